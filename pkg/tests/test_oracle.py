"""Closed-form reference values for the mean factors."""

import math

import pytest

from shadowcell import oracle
from shadowcell.geometry import hex_intensity
from shadowcell.propagation import lognormal_moment, sigma_from_v


class TestPoissonMeanF:
    def test_exact_values(self):
        assert oracle.poisson_mean_f(4.0) == 1.0
        assert oracle.poisson_mean_f(3.0) == 2.0
        assert oracle.poisson_mean_f(5.0) == pytest.approx(2.0 / 3.0, rel=1e-15)

    def test_decreasing_in_beta(self):
        vals = [oracle.poisson_mean_f(b) for b in (2.5, 3.0, 4.0, 5.0, 8.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_rejects_beta_at_most_two(self):
        for beta in (2.0, 1.5, -1.0):
            with pytest.raises(ValueError):
                oracle.poisson_mean_f(beta)


class TestPoissonMeanL:
    def test_gamma_three_plugin(self):
        # K=1, lambda=1/pi, beta=4: Gamma(1+2) / (pi * 1/pi)^2 = 2
        assert oracle.poisson_mean_l(4.0, 1.0, 1.0 / math.pi) == pytest.approx(2.0, rel=1e-12)

    def test_shadowing_enters_through_fractional_moment(self):
        beta, v = 4.0, 6.0
        m = lognormal_moment(v, 2.0 / beta)
        assert m == pytest.approx(0.787741400474197, rel=1e-12)
        plain = oracle.poisson_mean_l(beta, 8667.0, hex_intensity(1.0))
        shadowed = oracle.poisson_mean_l(beta, 8667.0, hex_intensity(1.0), m)
        assert shadowed == pytest.approx(plain / m ** (beta / 2), rel=1e-12)
        assert shadowed > plain  # sub-unit moment raises the mean loss

    def test_unit_moment_is_no_shadowing(self):
        assert oracle.poisson_mean_l(3.0, 2.0, 1.5) == oracle.poisson_mean_l(3.0, 2.0, 1.5, 1.0)

    def test_monotone_in_intensity(self):
        assert oracle.poisson_mean_l(4.0, 1.0, 2.0) < oracle.poisson_mean_l(4.0, 1.0, 1.0)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            oracle.poisson_mean_l(2.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            oracle.poisson_mean_l(4.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            oracle.poisson_mean_l(4.0, 1.0, -1.0)


class TestHexApproximations:
    def test_mean_f_values(self):
        assert oracle.hex_mean_f_approx(3.0) == pytest.approx(0.9365, rel=1e-15)
        assert oracle.hex_mean_f_approx(4.0) == pytest.approx(0.46825, rel=1e-15)
        assert oracle.hex_mean_f_approx(5.0) == pytest.approx(0.31216666666666665, rel=1e-15)

    def test_mean_l_plugins(self):
        # K=1, lambda=1/pi, beta=4: 1 / (1 + 2) = 1/3
        assert oracle.hex_mean_l_approx(4.0, 1.0, 1.0 / math.pi) == pytest.approx(1 / 3, rel=1e-12)
        got = oracle.hex_mean_l_approx(4.0, 8667.0, hex_intensity(1.0))
        want = 8667.0**4 / ((math.pi * hex_intensity(1.0)) ** 2 * 3.0)
        assert got == pytest.approx(want, rel=1e-12)

    def test_hex_below_poisson(self):
        # the lattice both attenuates less and interferes less
        for beta in (2.5, 3.0, 4.0, 5.0):
            assert oracle.hex_mean_f_approx(beta) < oracle.poisson_mean_f(beta)
            assert oracle.hex_mean_l_approx(beta, 1.0, 1.0) < oracle.poisson_mean_l(beta, 1.0, 1.0)

    def test_rejects_beta_at_most_two(self):
        with pytest.raises(ValueError):
            oracle.hex_mean_f_approx(2.0)
        with pytest.raises(ValueError):
            oracle.hex_mean_l_approx(1.9, 1.0, 1.0)


class TestClosestStationMeanF:
    def test_reduces_without_shadowing(self):
        assert oracle.closest_bs_poisson_mean_f(4.0, 0.0) == pytest.approx(1.0, rel=1e-15)
        assert oracle.closest_bs_poisson_mean_f_independent_terms(4.0, 0.0) == pytest.approx(
            1.0, rel=1e-15
        )

    def test_frozen_values(self):
        assert oracle.closest_bs_poisson_mean_f(4.0, 10.0) == pytest.approx(
            400.4348649810607, rel=1e-12
        )
        assert oracle.closest_bs_poisson_mean_f_independent_terms(4.0, 6.0) == pytest.approx(
            6.744202991200989, rel=1e-12
        )

    def test_db_penalty_identity(self):
        # 10 log10((f'+1)/(f+1)) equals v^2 ln(10) / 10
        for v in (3.0, 6.0, 12.0):
            f_plain = oracle.poisson_mean_f(4.0)
            f_closest = oracle.closest_bs_poisson_mean_f(4.0, v)
            penalty_db = 10 * math.log10((f_closest + 1) / (f_plain + 1))
            assert penalty_db == pytest.approx(v**2 * math.log(10) / 10, rel=1e-12)

    def test_variant_ratio_is_shadowing_second_moment(self):
        for beta, v in ((3.0, 4.0), (4.0, 8.0)):
            sigma = sigma_from_v(v)
            ratio = (
                oracle.closest_bs_poisson_mean_f_independent_terms(beta, v)
                / oracle.poisson_mean_f(beta)
            )
            assert ratio == pytest.approx(math.exp(sigma**2), rel=1e-12)

    def test_strictly_increasing_in_v(self):
        for fn in (
            oracle.closest_bs_poisson_mean_f,
            oracle.closest_bs_poisson_mean_f_independent_terms,
        ):
            vals = [fn(4.0, v) for v in (0.0, 2.0, 6.0, 10.0)]
            assert all(a < b for a, b in zip(vals, vals[1:]))


class TestGammaDependency:
    def test_known_values(self):
        assert math.gamma(1.0) == 1.0
        assert math.gamma(3.0) == 2.0
        assert math.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-10)
