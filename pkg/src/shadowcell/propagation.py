"""Distance-loss, log-normal shadowing, and the combined path-loss.

Path-loss here is a linear power-attenuation ratio: received power equals
emitted power divided by the path-loss value.  The deterministic part is
the power law (K*r)^beta; shadowing divides it by a mean-1 log-normal
factor S = exp(-sigma^2/2 + sigma*z) with z standard normal.

Shadowing strength is quoted as v, the standard deviation of S in dB
(sigma = v*ln(10)/10).  All arithmetic stays in the linear domain; for
v up to 40 dB the extreme moments (e.g. E[1/S] = e^{sigma^2}) remain
within double-precision range, so no log-domain bookkeeping is needed.
Values of v above 40 dB are outside the supported range.
"""

import math
from dataclasses import dataclass

import numpy as np

from .geometry import toroidal_distance

# Distances below this are clamped before applying the power law; a user
# exactly on top of a BS has probability zero under continuous sampling,
# and the clamp keeps the attenuation finite and positive.
R_MIN_KM = 1e-6

V_DB_MAX = 40.0


@dataclass(frozen=True)
class DistanceLossParams:
    k_per_km: float  # > 0
    beta: float  # > 2, required for a finite mean interference factor

    def __post_init__(self):
        if not self.k_per_km > 0:
            raise ValueError(f"k_per_km must be positive, got {self.k_per_km}")
        if not self.beta > 2:
            raise ValueError(f"beta must exceed 2, got {self.beta}")


@dataclass(frozen=True)
class ShadowingModel:
    """Shadowing distribution: none, or mean-1 log-normal with log-SD v dB.

    v = 0 is exactly no shadowing (S identically 1, and no normal draws are
    consumed), so the two variants coincide where they overlap.
    """

    log_sd_db: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.log_sd_db <= V_DB_MAX:
            raise ValueError(
                f"log_sd_db must be in [0, {V_DB_MAX}], got {self.log_sd_db}"
            )

    @classmethod
    def none(cls):
        return cls(0.0)

    @classmethod
    def log_normal(cls, v_db):
        return cls(float(v_db))

    @property
    def variant(self):
        return "none" if self.log_sd_db == 0.0 else "lognormal"

    @property
    def sigma(self):
        return sigma_from_v(self.log_sd_db)


def sigma_from_v(v_db):
    """Log-scale standard deviation sigma from the dB-scale one: v*ln(10)/10."""
    if v_db < 0:
        raise ValueError(f"v_db must be non-negative, got {v_db}")
    return v_db * math.log(10.0) / 10.0


def distance_loss(r_km, params):
    """Power-law attenuation (K*r)^beta, clamped at r = R_MIN_KM.

    Accepts scalars or arrays; monotone non-decreasing in r.
    """
    r = np.maximum(np.asarray(r_km, dtype=float), R_MIN_KM)
    out = (params.k_per_km * r) ** params.beta
    return out if out.ndim else float(out)


def sample_shadowing(model, rng, size=None):
    """Draw linear shadowing values S with E[S] = 1.

    With log_sd_db = 0 this returns exactly 1 and consumes no randomness;
    otherwise S = exp(-sigma^2/2 + sigma*z) for standard normal z.
    """
    if model.log_sd_db == 0.0:
        return 1.0 if size is None else np.ones(size)
    sigma = model.sigma
    z = rng.standard_normal(size)
    return np.exp(-0.5 * sigma * sigma + sigma * z)


def lognormal_moment(v_db, p):
    """E[S^p] for mean-1 log-normal shadowing: exp(sigma^2 * p * (p-1) / 2).

    p = 1 gives 1 (normalization); p = -1 gives e^{sigma^2}, the mean
    inverse shadowing that governs the closest-station handover penalty.
    """
    sigma = sigma_from_v(v_db)
    return math.exp(0.5 * sigma * sigma * p * (p - 1.0))


def path_loss(bs, user, s, params, torus):
    """Combined path-loss distance_loss(|bs - user|)/s for one BS-user pair."""
    if not s > 0:
        raise ValueError(f"shadowing value must be positive, got {s}")
    r = toroidal_distance(bs, user, torus)
    return distance_loss(r, params) / s
