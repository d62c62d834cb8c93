"""
Mean interference and path-loss factors vs closed forms
=======================================================

Estimates the two pre-metrics of network quality of service, the mean
interference factor f (inverse signal-to-interference ratio) and the mean
path-loss factor l, by Monte Carlo, and compares them against their
closed-form references.

Sample sizes here are trimmed for a quick run; push n_samples to 10^6 and
grid_order to 100 to reproduce the validation-grade numbers.
"""

import math

from shadowcell import oracle
from shadowcell.geometry import TorusSpec, hex_intensity
from shadowcell.propagation import DistanceLossParams, ShadowingModel, lognormal_moment
from shadowcell.qos import SMALLEST_PATH_LOSS, HexModel, PoissonModel, estimate_factors

N = 100_000
K = 8667.0  # 1/km, urban macro distance-loss scale
LAM = hex_intensity(1.0)

# On Poisson layouts the mean interference factor has the exact closed
# form 2/(beta - 2), independent of both the density and the shadowing.
print("Poisson mean f vs 2/(beta-2), no shadowing:")
for beta in (3.0, 4.0, 5.0):
    est = estimate_factors(
        PoissonModel(TorusSpec(30, 1.0), LAM),
        ShadowingModel.none(),
        DistanceLossParams(K, beta),
        SMALLEST_PATH_LOSS,
        N,
        root_seed=1,
    )
    print(
        f"  beta={beta}: {est.mean_f:.4f} +- {est.se_f:.4f}"
        f"  (closed form {oracle.poisson_mean_f(beta):.4f})"
    )

# The mean path-loss factor does depend on shadowing, through the
# fractional moment E[S^(2/beta)] of the log-normal factor.
beta, v = 4.0, 6.0
est = estimate_factors(
    PoissonModel(TorusSpec(30, 1.0), LAM),
    ShadowingModel(v),
    DistanceLossParams(K, beta),
    SMALLEST_PATH_LOSS,
    N,
    root_seed=2,
)
want = oracle.poisson_mean_l(beta, K, LAM, lognormal_moment(v, 2.0 / beta))
print(f"Poisson mean l at beta={beta}, v={v} dB: {est.mean_l:.4g} +- {est.se_l:.2g}")
print(f"  closed form {want:.4g}; in dB: {est.mean_l_db:.2f} vs {10 * math.log10(want):.2f}")

# The hexagonal lattice admits only approximations, good to about 10%.
print("hexagonal lattice vs approximations, no shadowing:")
for beta in (3.0, 4.0, 5.0):
    est = estimate_factors(
        HexModel(TorusSpec(30, 1.0)),
        ShadowingModel.none(),
        DistanceLossParams(K, beta),
        SMALLEST_PATH_LOSS,
        N,
        root_seed=3,
    )
    f_approx = oracle.hex_mean_f_approx(beta)
    l_approx = oracle.hex_mean_l_approx(beta, K, LAM)
    print(
        f"  beta={beta}: f {est.mean_f:.4f} (approx {f_approx:.4f}, "
        f"{100 * (f_approx / est.mean_f - 1):+.1f}%), "
        f"l {est.mean_l:.3g} (approx {l_approx:.3g})"
    )
