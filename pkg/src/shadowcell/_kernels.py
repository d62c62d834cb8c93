"""Compiled inner loops for the Monte Carlo factor estimators.

These kernels consume a numpy Generator directly so the draw sequence is
part of the contract: for each sample, user x, user y, then per base
station (in index order) position x, position y where applicable, then one
standard normal when shadowing is on.  Shadowing off (sigma = 0) consumes
no normal draws.

Attenuation is evaluated as (K^2 * r^2)^(beta/2) on squared distances to
avoid a square root per pair; the common exponents beta = 3, 4, 5 use
explicit multiply/sqrt forms instead of pow.
"""

import numpy as np
from numba import njit

BETA_GENERIC = 0
BETA_3 = 1
BETA_4 = 2
BETA_5 = 3


def beta_kind(beta):
    if beta == 3.0:
        return BETA_3
    if beta == 4.0:
        return BETA_4
    if beta == 5.0:
        return BETA_5
    return BETA_GENERIC


@njit(cache=True, nogil=True, inline="always")
def _attenuation(r2, k2, half_beta, kind):
    x = k2 * r2
    if kind == BETA_4:
        return x * x
    if kind == BETA_3:
        return x * np.sqrt(x)
    if kind == BETA_5:
        return x * x * np.sqrt(x)
    return x**half_beta


@njit(cache=True, nogil=True)
def poisson_factor_samples(
    gen, counts, width, height, k2, half_beta, kind, r2_min, sigma, closest
):
    """One (f, l) pair per sample, fresh uniform BS layout per sample.

    counts[i] is the number of base stations in sample i (all >= 1).
    Returns arrays (f, l) of length len(counts).
    """
    m = counts.shape[0]
    out_f = np.empty(m)
    out_l = np.empty(m)
    hw = 0.5 * width
    hh = 0.5 * height
    mu = -0.5 * sigma * sigma
    for i in range(m):
        ux = gen.uniform(-hw, hw)
        uy = gen.uniform(-hh, hh)
        att_min = np.inf
        r2_best = np.inf
        att_nearest = np.inf
        inv_sum = 0.0
        for _ in range(counts[i]):
            dx = gen.uniform(-hw, hw) - ux
            if dx > hw:
                dx -= width
            elif dx < -hw:
                dx += width
            dy = gen.uniform(-hh, hh) - uy
            if dy > hh:
                dy -= height
            elif dy < -hh:
                dy += height
            r2 = dx * dx + dy * dy
            if r2 < r2_min:
                r2 = r2_min
            att = _attenuation(r2, k2, half_beta, kind)
            if sigma > 0.0:
                att /= np.exp(mu + sigma * gen.standard_normal())
            if att < att_min:
                att_min = att
            if r2 < r2_best:
                r2_best = r2
                att_nearest = att
            inv_sum += 1.0 / att
        serving = att_nearest if closest else att_min
        # the serving term contributes exactly 1, so it is excluded here
        f = serving * (inv_sum - 1.0 / serving)
        out_f[i] = f if f > 0.0 else 0.0
        out_l[i] = serving
    return out_f, out_l


@njit(cache=True, nogil=True)
def fixed_layout_factor_samples(
    gen, m, xs, ys, width, height, k2, half_beta, kind, r2_min, sigma, closest
):
    """One (f, l) pair per sample against a fixed BS layout."""
    n = xs.shape[0]
    out_f = np.empty(m)
    out_l = np.empty(m)
    hw = 0.5 * width
    hh = 0.5 * height
    mu = -0.5 * sigma * sigma
    for i in range(m):
        ux = gen.uniform(-hw, hw)
        uy = gen.uniform(-hh, hh)
        att_min = np.inf
        r2_best = np.inf
        att_nearest = np.inf
        inv_sum = 0.0
        for j in range(n):
            dx = xs[j] - ux
            if dx > hw:
                dx -= width
            elif dx < -hw:
                dx += width
            dy = ys[j] - uy
            if dy > hh:
                dy -= height
            elif dy < -hh:
                dy += height
            r2 = dx * dx + dy * dy
            if r2 < r2_min:
                r2 = r2_min
            att = _attenuation(r2, k2, half_beta, kind)
            if sigma > 0.0:
                att /= np.exp(mu + sigma * gen.standard_normal())
            if att < att_min:
                att_min = att
            if r2 < r2_best:
                r2_best = r2
                att_nearest = att
            inv_sum += 1.0 / att
        serving = att_nearest if closest else att_min
        f = serving * (inv_sum - 1.0 / serving)
        out_f[i] = f if f > 0.0 else 0.0
        out_l[i] = serving
    return out_f, out_l
