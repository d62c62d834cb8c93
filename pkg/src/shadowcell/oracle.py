"""Closed-form reference values for the QoS factors.

Pure arithmetic, no randomness, no I/O.  These are the analytical answers
the Monte Carlo estimators are validated against: exact results for the
infinite Poisson model and curve-fit approximations for the hexagonal one.
"""

import math

from .propagation import sigma_from_v


def _check_beta(beta):
    if not beta > 2:
        raise ValueError(f"beta must exceed 2, got {beta}")


def poisson_mean_f(beta):
    """Mean interference factor of the infinite Poisson model: 2/(beta - 2).

    Holds for any shadowing distribution and any intensity.
    """
    _check_beta(beta)
    return 2.0 / (beta - 2.0)


def poisson_mean_l(beta, k_per_km, intensity_per_km2, moment_2_over_beta=1.0):
    """Mean path-loss factor of the infinite Poisson model.

    K^beta * Gamma(1 + beta/2) / (pi * lambda * E[S^(2/beta)])^(beta/2);
    pass moment_2_over_beta = 1 for no shadowing, or
    ``lognormal_moment(v_db, 2/beta)`` for log-normal shadowing, which
    reduces the expression to an extra factor exp((1 - 2/beta) * sigma^2/2).
    """
    _check_beta(beta)
    if not k_per_km > 0:
        raise ValueError(f"k_per_km must be positive, got {k_per_km}")
    if not intensity_per_km2 > 0:
        raise ValueError(f"intensity must be positive, got {intensity_per_km2}")
    if not moment_2_over_beta > 0:
        raise ValueError(f"moment must be positive, got {moment_2_over_beta}")
    return (
        k_per_km**beta
        * math.gamma(1.0 + beta / 2.0)
        / (math.pi * intensity_per_km2 * moment_2_over_beta) ** (beta / 2.0)
    )


def hex_mean_f_approx(beta):
    """Approximate mean interference factor of the hexagonal model, no
    shadowing: 0.9365/(beta - 2).  Good to roughly 10%."""
    _check_beta(beta)
    return 0.9365 / (beta - 2.0)


def hex_mean_l_approx(beta, k_per_km, intensity_per_km2):
    """Approximate mean path-loss factor of the hexagonal model, no
    shadowing: K^beta / ((pi*lambda)^(beta/2) * (1 + beta/2))."""
    _check_beta(beta)
    if not k_per_km > 0:
        raise ValueError(f"k_per_km must be positive, got {k_per_km}")
    if not intensity_per_km2 > 0:
        raise ValueError(f"intensity must be positive, got {intensity_per_km2}")
    return k_per_km**beta / (
        (math.pi * intensity_per_km2) ** (beta / 2.0) * (1.0 + beta / 2.0)
    )


def closest_bs_poisson_mean_f(beta, v_db):
    """Predicted mean interference factor under the closest-station policy,
    Poisson model with log-normal shadowing: e^{sigma^2} * beta/(beta-2) - 1.

    Obtained by factoring the mean inverse shadowing of the serving station,
    E[1/S] = e^{sigma^2}, out of the expectation of the whole interference
    sum, whose no-shadowing value is beta/(beta - 2).  Note that the
    factorization is applied to the serving station's own term as well,
    even though in a per-sample evaluation that term is identically 1; see
    ``closest_bs_poisson_mean_f_independent_terms`` for the variant that
    keeps the serving term fixed.  At v_db = 0 both reduce to 2/(beta - 2).
    """
    _check_beta(beta)
    sigma = sigma_from_v(v_db)
    return math.exp(sigma * sigma) * beta / (beta - 2.0) - 1.0


def closest_bs_poisson_mean_f_independent_terms(beta, v_db):
    """Mean interference factor under the closest-station policy with the
    serving term pinned at 1: e^{sigma^2} * 2/(beta - 2).

    Each non-serving term of the interference sum carries the independent
    factor S_X / S_serving with mean E[S] * E[1/S] = e^{sigma^2}, while the
    serving term stays exactly 1; the penalty relative to the
    smallest-path-loss policy is the factor e^{sigma^2}, i.e.
    v^2 * ln(10)/10 dB.
    """
    _check_beta(beta)
    sigma = sigma_from_v(v_db)
    return math.exp(sigma * sigma) * 2.0 / (beta - 2.0)
