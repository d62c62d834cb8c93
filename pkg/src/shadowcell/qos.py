"""Serving-station selection and Monte Carlo estimation of the QoS factors.

For a user at y served by station X* the path-loss factor is
l(y) = L_{X*}(y) and the interference factor is
f(y) = sum_X l(y)/L_X(y) - 1, the interference-to-signal ratio of the
downlink.  The serving station is the one with smallest path-loss by
default; the geographically closest station is available as an alternative
handover policy (the two coincide when there is no shadowing).

``estimate_factors`` averages these over uniform user locations (and over
layout realizations for the Poisson model), with reproducible streams: the
sample set is split into fixed-size chunks, chunk i drawing from
``SeedSequence(root_seed, spawn_key=(i,))``.  The chunk plan depends only
on the model and sample count, so results are bit-identical across runs
and independent of how chunks would be scheduled.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .geometry import TorusSpec, hex_layout, toroidal_distance_array
from .propagation import R_MIN_KM, DistanceLossParams, ShadowingModel, distance_loss

SMALLEST_PATH_LOSS = "smallest_path_loss"
GEOGRAPHICALLY_CLOSEST = "geographically_closest"
POLICIES = (SMALLEST_PATH_LOSS, GEOGRAPHICALLY_CLOSEST)

# chunking targets roughly this many BS-user evaluations per kernel call
_CHUNK_TARGET_EVALS = 4_000_000
_CHUNK_MIN = 64
_CHUNK_MAX = 65_536


@dataclass(frozen=True)
class HexModel:
    """Fixed triangular-lattice layout on the given torus."""

    torus: TorusSpec

    @property
    def expected_bs(self):
        return self.torus.grid_order**2


@dataclass(frozen=True)
class PoissonModel:
    """Poisson layout redrawn independently for every sample."""

    torus: TorusSpec
    intensity_per_km2: float

    def __post_init__(self):
        if not self.intensity_per_km2 > 0:
            raise ValueError(f"intensity must be positive, got {self.intensity_per_km2}")

    @property
    def expected_bs(self):
        return self.intensity_per_km2 * self.torus.area_km2


@dataclass(frozen=True)
class QosSample:
    serving_index: int
    l: float  # path-loss factor, linear
    f: float  # interference factor, >= 0


@dataclass(frozen=True)
class FactorEstimate:
    """Sample means and standard errors of f and l.

    mean_l_db is 10*log10(mean_l) (dB of the mean).  The alternative
    convention, the mean of per-sample dB values, is also reported as
    mean_db_l with its own standard error.
    """

    mean_f: float
    se_f: float
    mean_l: float
    se_l: float
    n_samples: int
    mean_l_db: float
    mean_db_l: float
    se_db_l: float
    n_resampled: int = 0  # zero-BS Poisson layouts redrawn
    samples_f: Optional[np.ndarray] = None
    samples_l: Optional[np.ndarray] = None


def _check_policy(policy):
    if policy not in POLICIES:
        raise ValueError(f"unknown handover policy {policy!r}; expected one of {POLICIES}")


def serving_bs(path_losses):
    """Index of the smallest path-loss; ties go to the lowest index."""
    values = np.asarray(path_losses, dtype=float)
    if values.size == 0:
        raise ValueError("no base stations: cannot select a serving station")
    if not np.all(values > 0):
        raise ValueError("path-loss values must be positive")
    return int(np.argmin(values))


def qos_sample(layout, user, shadowing_values, dl_params, policy=SMALLEST_PATH_LOSS):
    """Evaluate (serving station, l, f) for one user against a layout.

    Parameters
    ----------
    layout : BaseStationLayout
    user : Point2D
    shadowing_values : array of per-BS linear shadowing factors S
    dl_params : DistanceLossParams
    policy : handover policy constant

    The serving term of the interference sum contributes exactly 1, so f is
    accumulated over the other stations only; a single-station layout gives
    f = 0 exactly.
    """
    _check_policy(policy)
    if layout.n_bs == 0:
        raise ValueError("degenerate layout with zero base stations")
    s = np.asarray(shadowing_values, dtype=float)
    if s.shape != (layout.n_bs,):
        raise ValueError(f"need one shadowing value per BS, got shape {s.shape}")
    if not np.all(s > 0):
        raise ValueError("shadowing values must be positive")
    u = np.array([[user.x_km, user.y_km]])
    r = toroidal_distance_array(layout.positions, u, layout.torus)
    losses = distance_loss(r, dl_params) / s
    if policy == GEOGRAPHICALLY_CLOSEST:
        serving = int(np.argmin(r))
    else:
        serving = serving_bs(losses)
    l = float(losses[serving])
    others = np.arange(layout.n_bs) != serving
    f = float(l * np.sum(1.0 / losses[others]))
    return QosSample(serving, l, f)


def _chunk_plan(expected_bs, n_samples):
    per_chunk = _CHUNK_TARGET_EVALS // max(1, int(round(expected_bs)))
    per_chunk = max(_CHUNK_MIN, min(_CHUNK_MAX, per_chunk))
    sizes = []
    left = n_samples
    while left > 0:
        take = min(per_chunk, left)
        sizes.append(take)
        left -= take
    return sizes


def _chunk_generator(root_seed, chunk_index):
    ss = np.random.SeedSequence(root_seed, spawn_key=(chunk_index,))
    return np.random.default_rng(ss)


def estimate_factors(
    model,
    shadowing,
    dl_params,
    policy,
    n_samples,
    root_seed,
    keep_samples=False,
):
    """Monte Carlo estimate of E[f] and E[l] over uniform user locations.

    The hexagonal model keeps its lattice fixed and randomizes only the
    user and the shadowing; the Poisson model redraws the whole layout for
    every sample (zero-BS layouts are redrawn, counted in n_resampled).
    Deterministic for a given root_seed.
    """
    _check_policy(policy)
    if not isinstance(shadowing, ShadowingModel):
        raise TypeError("shadowing must be a ShadowingModel")
    if not isinstance(dl_params, DistanceLossParams):
        raise TypeError("dl_params must be DistanceLossParams")
    if n_samples < 2:
        raise ValueError(f"n_samples must be at least 2, got {n_samples}")

    torus = model.torus
    sigma = shadowing.sigma
    k2 = dl_params.k_per_km**2
    half_beta = dl_params.beta / 2.0
    kind = _kernels.beta_kind(dl_params.beta)
    r2_min = R_MIN_KM * R_MIN_KM
    closest = policy == GEOGRAPHICALLY_CLOSEST
    width = torus.width_km
    height = torus.height_km

    if isinstance(model, HexModel):
        positions = hex_layout(torus).positions
        xs = np.ascontiguousarray(positions[:, 0])
        ys = np.ascontiguousarray(positions[:, 1])
    elif not isinstance(model, PoissonModel):
        raise TypeError(f"unknown model {model!r}")

    sizes = _chunk_plan(model.expected_bs, n_samples)
    f_parts = []
    l_parts = []
    n_resampled = 0
    for i, m in enumerate(sizes):
        gen = _chunk_generator(root_seed, i)
        if isinstance(model, PoissonModel):
            mean_count = model.intensity_per_km2 * torus.area_km2
            counts = gen.poisson(mean_count, m).astype(np.int64)
            while True:
                zero = counts == 0
                if not zero.any():
                    break
                n_resampled += int(zero.sum())
                counts[zero] = gen.poisson(mean_count, int(zero.sum()))
            f_i, l_i = _kernels.poisson_factor_samples(
                gen, counts, width, height, k2, half_beta, kind, r2_min, sigma, closest
            )
        else:
            f_i, l_i = _kernels.fixed_layout_factor_samples(
                gen, m, xs, ys, width, height, k2, half_beta, kind, r2_min, sigma, closest
            )
        f_parts.append(f_i)
        l_parts.append(l_i)

    f = np.concatenate(f_parts)
    l = np.concatenate(l_parts)
    db_l = 10.0 * np.log10(l)

    def _mean_se(x):
        return float(np.mean(x)), float(np.std(x, ddof=1) / math.sqrt(x.size))

    mean_f, se_f = _mean_se(f)
    mean_l, se_l = _mean_se(l)
    mean_db_l, se_db_l = _mean_se(db_l)
    return FactorEstimate(
        mean_f=mean_f,
        se_f=se_f,
        mean_l=mean_l,
        se_l=se_l,
        n_samples=n_samples,
        mean_l_db=10.0 * math.log10(mean_l),
        mean_db_l=mean_db_l,
        se_db_l=se_db_l,
        n_resampled=n_resampled,
        samples_f=f if keep_samples else None,
        samples_l=l if keep_samples else None,
    )


def batch_qos(positions, users, shadowing, dl_params, torus, policy, gen, chunk=4096):
    """Vectorized (serving, l, f) for many users against one fixed layout.

    Shadowing is drawn inside, one value per (user, BS) pair, in row-major
    chunks of fixed size so the stream layout does not depend on the number
    of users.  Used by the blocking pipeline, where the per-realization
    layout is fixed and every location needs its serving cell.
    """
    _check_policy(policy)
    positions = np.asarray(positions, dtype=float)
    users = np.asarray(users, dtype=float)
    n = positions.shape[0]
    if n == 0:
        raise ValueError("degenerate layout with zero base stations")
    m = users.shape[0]
    serving = np.empty(m, dtype=np.int64)
    l = np.empty(m)
    f = np.empty(m)
    sigma = shadowing.sigma
    for lo in range(0, m, chunk):
        hi = min(lo + chunk, m)
        d = toroidal_distance_array(
            users[lo:hi, None, :], positions[None, :, :], torus
        )
        losses = distance_loss(d, dl_params)
        if sigma > 0.0:
            z = gen.standard_normal((hi - lo, n))
            losses = losses / np.exp(-0.5 * sigma * sigma + sigma * z)
        if policy == GEOGRAPHICALLY_CLOSEST:
            idx = np.argmin(d, axis=1)
        else:
            idx = np.argmin(losses, axis=1)
        rows = np.arange(hi - lo)
        l_chunk = losses[rows, idx]
        inv = 1.0 / losses
        f_chunk = l_chunk * (inv.sum(axis=1) - inv[rows, idx])
        serving[lo:hi] = idx
        l[lo:hi] = l_chunk
        f[lo:hi] = np.maximum(f_chunk, 0.0)
    return serving, l, f
