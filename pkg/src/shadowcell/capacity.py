"""Admission costs, Kaufman-Roberts blocking, and the blocking pipeline.

A cell admits a set of users when the sum of their resource fractions
phi(l, f) stays below 1.  Discretizing the unit resource into C integer
units turns each user location into a traffic class of a multi-rate Erlang
loss system, whose per-class blocking probabilities the Kaufman-Roberts
recursion computes exactly.  The end-to-end pipeline averages those over
random user locations, shadowing, and (for the Poisson model) layouts.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .geometry import hex_layout
from .qos import SMALLEST_PATH_LOSS, HexModel, PoissonModel, batch_qos

OFDMA = "ofdma"
CDMA = "cdma"


@dataclass(frozen=True)
class RadioParams:
    """Link-budget parameters shared by every BS.

    Powers are in dBm (only the noise/max-power ratio matters, so any
    common power unit would do); epsilon is the fraction of power pinned to
    common channels, alpha the intra-cell orthogonality factor, psi_scale
    the constant a in the link-performance function a*log2(1 + SINR).
    """

    bandwidth_hz: float
    max_power_dbm: float
    common_channel_fraction: float  # epsilon, 0 <= eps < 1
    orthogonality: float  # alpha, 0 <= alpha <= 1
    noise_power_dbm: float
    psi_scale: float = 1.0  # a, 0 < a <= 1

    def __post_init__(self):
        if not self.bandwidth_hz > 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth_hz}")
        if not 0.0 <= self.common_channel_fraction < 1.0:
            raise ValueError(f"epsilon must be in [0, 1), got {self.common_channel_fraction}")
        if not 0.0 <= self.orthogonality <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.orthogonality}")
        if not 0.0 < self.psi_scale <= 1.0:
            raise ValueError(f"psi_scale must be in (0, 1], got {self.psi_scale}")

    @property
    def noise_over_power(self):
        return 10.0 ** ((self.noise_power_dbm - self.max_power_dbm) / 10.0)


@dataclass(frozen=True)
class ServiceClass:
    bit_rate_bps: float

    def __post_init__(self):
        if not self.bit_rate_bps > 0:
            raise ValueError(f"bit rate must be positive, got {self.bit_rate_bps}")


@dataclass(frozen=True)
class TrafficSpec:
    density_erlang_per_km2: float

    def __post_init__(self):
        if self.density_erlang_per_km2 < 0:
            raise ValueError(f"traffic density must be >= 0, got {self.density_erlang_per_km2}")


@dataclass(frozen=True)
class CellDemandProfile:
    """Traffic offered to one cell: (rho_j, d_j) classes against C units.

    Classes whose demand exceeds C can never be admitted and are blocked
    with probability 1; the recursion only sees the feasible ones.
    """

    bs_index: int
    classes: tuple  # of (rho_j > 0, integer d_j >= 1)
    capacity_units: int

    def __post_init__(self):
        if self.capacity_units < 1:
            raise ValueError(f"capacity_units must be >= 1, got {self.capacity_units}")
        for rho, d in self.classes:
            if not rho > 0:
                raise ValueError(f"class intensity must be positive, got {rho}")
            if d < 1:
                raise ValueError(f"class demand must be >= 1, got {d}")


@dataclass(frozen=True)
class BlockingResult:
    mean_blocking: float
    se: float
    per_realization: np.ndarray = field(repr=False)


def psi(xi, a=1.0):
    """Link performance in bit/s/Hz at SINR xi: a * log2(1 + xi)."""
    return a * np.log2(1.0 + xi)


def psi_inv(u, a=1.0):
    """SINR needed for u bit/s/Hz: 2^(u/a) - 1."""
    return 2.0 ** (u / a) - 1.0


def phi_ofdma(l, f, radio, svc):
    """Resource fraction one user needs on the downlink shared channel.

    The achievable SINR is (1 - eps)/(noise*l/power + alpha + f) and the
    user needs bit_rate/(W * psi(SINR)) of the cell resource.  May exceed 1
    (user inadmissible even alone); callers handle that downstream.
    """
    l = np.asarray(l, dtype=float)
    xi = (1.0 - radio.common_channel_fraction) / (
        radio.noise_over_power * l + radio.orthogonality + f
    )
    out = svc.bit_rate_bps / (radio.bandwidth_hz * psi(xi, radio.psi_scale))
    return out if out.ndim else float(out)


def phi_cdma(l, f, radio, xi_threshold):
    """Power fraction one user needs at fixed SINR target xi_threshold."""
    if not xi_threshold > 0:
        raise ValueError(f"xi_threshold must be positive, got {xi_threshold}")
    l = np.asarray(l, dtype=float)
    out = (
        xi_threshold
        / (1.0 + radio.orthogonality * xi_threshold)
        * (radio.noise_over_power * l + radio.orthogonality + f)
        / (1.0 - radio.common_channel_fraction)
    )
    return out if out.ndim else float(out)


def discretize_demand(phi, capacity_units):
    """Integer resource units for a fractional demand: max(1, ceil(phi*C)).

    A phi above 1 maps to a demand above C, i.e. an always-blocked class.
    """
    if capacity_units < 1:
        raise ValueError(f"capacity_units must be >= 1, got {capacity_units}")
    phi = np.asarray(phi, dtype=float)
    if not np.all(phi > 0):
        raise ValueError("phi must be positive")
    d = np.maximum(1, np.ceil(phi * capacity_units).astype(np.int64))
    return d if d.ndim else int(d)


@njit(cache=True, nogil=True)
def _kr_g(demands, weights, cap):
    """Unnormalized occupancy weights g(0..cap).

    g(0) = 1, g(n) = (1/n) * sum_k weights[k] * g(n - demands[k]) with
    weights[k] = rho_k * d_k aggregated over classes of equal demand.
    Rescales everything when g grows past 1e280 so heavy loads with large
    cap cannot overflow; only ratios of g matter downstream.
    """
    g = np.zeros(cap + 1)
    g[0] = 1.0
    for n in range(1, cap + 1):
        acc = 0.0
        for k in range(demands.shape[0]):
            d = demands[k]
            if d <= n:
                acc += weights[k] * g[n - d]
        g[n] = acc / n
        if g[n] > 1e280:
            for t in range(n + 1):
                g[t] *= 1e-280
    return g


def kaufman_roberts(classes, capacity_units):
    """Occupancy distribution and per-class blocking of the loss system.

    Parameters
    ----------
    classes : sequence of (rho_j, d_j)
        Offered traffic in Erlangs and integer demand in resource units;
        every d_j must lie in [1, capacity_units] (callers segregate
        oversized classes as always-blocked beforehand).
    capacity_units : int

    Returns
    -------
    pi : array of length capacity_units + 1, sums to 1
    blocking : array, B_j = sum of pi over the top d_j occupancy levels
    """
    if capacity_units < 1:
        raise ValueError(f"capacity_units must be >= 1, got {capacity_units}")
    if len(classes) == 0:
        pi = np.zeros(capacity_units + 1)
        pi[0] = 1.0
        return pi, np.empty(0)
    rhos = np.array([c[0] for c in classes], dtype=float)
    demands = np.array([c[1] for c in classes], dtype=np.int64)
    if not np.all(rhos > 0):
        raise ValueError("class intensities must be positive")
    if not np.all(demands >= 1):
        raise ValueError("class demands must be >= 1")
    if not np.all(demands <= capacity_units):
        raise ValueError("class demand exceeds capacity; segregate it as always-blocked")
    uniq, inverse = np.unique(demands, return_inverse=True)
    weights = np.zeros(uniq.size)
    np.add.at(weights, inverse, rhos * demands)
    g = _kr_g(uniq, weights, int(capacity_units))
    # normalize tails of g directly: one division keeps simple cases exact
    gtail = np.cumsum(g[::-1])  # gtail[k-1] = sum of the top k levels
    total = gtail[-1]
    pi = g / total
    blocking = gtail[demands - 1] / total
    return pi, blocking


def per_class_blocking(classes, capacity_units):
    """Blocking for every class, oversized demands pinned at B = 1."""
    classes = list(classes)
    blocking = np.ones(len(classes))
    feasible = [i for i, (_, d) in enumerate(classes) if d <= capacity_units]
    if feasible:
        _, b = kaufman_roberts([classes[i] for i in feasible], capacity_units)
        blocking[feasible] = b
    return blocking


def profile_blocking(profile):
    """Arrival-weighted blocking of one cell's demand profile."""
    if len(profile.classes) == 0:
        return 0.0, np.empty(0)
    b = per_class_blocking(profile.classes, profile.capacity_units)
    rho = np.array([c[0] for c in profile.classes])
    return float(np.sum(rho * b) / np.sum(rho)), b


def blocking_probability(
    layout_model,
    shadowing,
    dl_params,
    radio,
    svc,
    traffic,
    tech,
    capacity_units,
    locations_per_realization,
    realizations,
    root_seed,
):
    """Mean blocking probability over network/shadowing realizations.

    For each of R realizations: draw the layout (hexagonal layouts are
    fixed, Poisson ones fresh per realization), drop M uniform user
    locations, draw independent shadowing to every BS, evaluate (l, f)
    under the smallest-path-loss policy, convert to resource demands, and
    run the loss-system recursion per cell.  Every location carries the
    same offered traffic rho = density * area / M, so the realization
    blocking is the plain average of the per-location blocking values,
    always-blocked locations counting 1.  Deterministic given root_seed;
    realization r draws from SeedSequence(root_seed, spawn_key=(r,)).
    """
    if tech not in (OFDMA, CDMA):
        raise ValueError(f"unknown technology {tech!r}")
    if locations_per_realization < 1:
        raise ValueError(f"need at least one location, got {locations_per_realization}")
    if realizations < 1:
        raise ValueError(f"need at least one realization, got {realizations}")
    torus = layout_model.torus
    area = torus.area_km2
    m = locations_per_realization
    rho = traffic.density_erlang_per_km2 * area / m
    if tech == CDMA:
        xi_threshold = psi_inv(svc.bit_rate_bps / radio.bandwidth_hz, radio.psi_scale)

    fixed_positions = None
    if isinstance(layout_model, HexModel):
        fixed_positions = hex_layout(torus).positions
    elif not isinstance(layout_model, PoissonModel):
        raise TypeError(f"unknown model {layout_model!r}")

    hw = 0.5 * torus.width_km
    hh = 0.5 * torus.height_km
    per_realization = np.empty(realizations)
    for r in range(realizations):
        gen = np.random.default_rng(np.random.SeedSequence(root_seed, spawn_key=(r,)))
        if fixed_positions is not None:
            positions = fixed_positions
        else:
            mean_count = layout_model.intensity_per_km2 * area
            count = int(gen.poisson(mean_count))
            while count == 0:
                count = int(gen.poisson(mean_count))
            positions = np.column_stack(
                [gen.uniform(-hw, hw, count), gen.uniform(-hh, hh, count)]
            )
        users = np.column_stack([gen.uniform(-hw, hw, m), gen.uniform(-hh, hh, m)])
        serving, l, f = batch_qos(
            positions, users, shadowing, dl_params, torus, SMALLEST_PATH_LOSS, gen
        )
        if tech == OFDMA:
            phi = phi_ofdma(l, f, radio, svc)
        else:
            phi = phi_cdma(l, f, radio, xi_threshold)
        demands = discretize_demand(phi, capacity_units)

        if rho == 0.0:
            per_realization[r] = 0.0
            continue
        blocking = np.empty(m)
        for bs in np.unique(serving):
            here = serving == bs
            blocking[here] = per_class_blocking(
                [(rho, int(d)) for d in demands[here]], capacity_units
            )
        per_realization[r] = float(blocking.mean())

    mean_blocking = float(per_realization.mean())
    if realizations >= 2:
        se = float(per_realization.std(ddof=1) / math.sqrt(realizations))
    else:
        se = float("nan")
    return BlockingResult(mean_blocking, se, per_realization)
