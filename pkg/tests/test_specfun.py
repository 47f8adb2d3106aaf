import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lps.specfun import (
    QuadratureRule,
    bessel_ratio,
    gamma_fn,
    gauss_jacobi_rule,
    gauss_laguerre_rule,
    gauss_legendre_rule,
    laguerre_poly,
    log_bessel_mantissa,
    scaled_bessel_i,
    scaled_bessel_i_exp,
)


def laguerre_series(k, a, x):
    """Independent oracle: L_k^a(x) = sum_i binom(k+a, k-i) (-x)^i / i!."""
    total = mpmath.mpf(0)
    with mpmath.workdps(50):
        for i in range(k + 1):
            binom = mpmath.gamma(k + a + 1) / (
                mpmath.gamma(a + i + 1) * mpmath.factorial(k - i)
            )
            total += binom * (-mpmath.mpf(x)) ** i / mpmath.factorial(i)
    return float(total)


def bessel_series_oracle(nu, z, terms=40):
    """Truncated power series of z^-nu I_nu(z) in extended precision."""
    with mpmath.workdps(60):
        w = mpmath.mpf(z) ** 2 / 4
        acc = mpmath.mpf(0)
        for m in range(terms):
            acc += w**m / (mpmath.factorial(m) * mpmath.gamma(m + nu + 1))
        return float(acc / mpmath.mpf(2) ** nu)


class TestGamma:
    def test_classical_values(self):
        assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-13)
        assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
        assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-13)

    def test_against_mpmath(self):
        for z in np.linspace(0.05, 30.0, 37):
            assert gamma_fn(z) == pytest.approx(float(mpmath.gamma(z)), rel=1e-13)

    def test_domain(self):
        with pytest.raises(ValueError):
            gamma_fn(0.0)
        with pytest.raises(ValueError):
            gamma_fn(-1.5)


class TestLaguerrePoly:
    def test_degree_zero_is_one(self):
        for a in (-0.5, 0.0, 2.3):
            assert laguerre_poly(0, a, 1.7) == 1.0

    def test_degree_one(self):
        assert laguerre_poly(1, 0.7, 2.0) == pytest.approx(-0.3, abs=1e-14)

    def test_degree_two(self):
        # L_2^0(x) = (x^2 - 4x + 2)/2
        assert laguerre_poly(2, 0.0, 1.0) == pytest.approx(-0.5, abs=1e-14)

    @pytest.mark.parametrize("a", [-0.5, 0.0, 0.7, 3.0])
    def test_recurrence_vs_series(self, a):
        rng = np.random.default_rng(11)
        xs = rng.uniform(0.0, 20.0, 100)
        for k in range(13):
            for x in xs[:25]:
                got = laguerre_poly(k, a, float(x))
                want = laguerre_series(k, a, float(x))
                assert abs(got - want) <= 1e-9 * (1.0 + abs(want))

    def test_vectorized(self):
        xs = np.linspace(0.0, 5.0, 7)
        vals = laguerre_poly(3, 0.5, xs)
        assert vals.shape == xs.shape
        assert vals[0] == pytest.approx(laguerre_series(3, 0.5, 0.0))


class TestScaledBessel:
    def test_value_at_zero(self):
        for nu in (-0.5, 0.0, 1.0, 2.7):
            want = 1.0 / (2.0**nu * gamma_fn(nu + 1.0))
            assert scaled_bessel_i(nu, 0.0) == pytest.approx(want, rel=1e-13)

    def test_half_order_sinh(self):
        want = math.sqrt(2.0 / math.pi) * math.sinh(1.0)
        assert scaled_bessel_i(0.5, 1.0) == pytest.approx(want, rel=1e-12)
        assert scaled_bessel_i(0.5, 1.0) == pytest.approx(
            bessel_series_oracle(0.5, 1.0), rel=1e-12
        )

    def test_minus_half_order_cosh(self):
        # i_(-1/2)(z) = sqrt(2/pi) cosh(z) * z^(1/2) / z^(1/2) ... = sqrt(2/pi) cosh z
        got = scaled_bessel_i(-0.5, 2.0)
        assert got == pytest.approx(bessel_series_oracle(-0.5, 2.0), rel=1e-12)
        assert got == pytest.approx(math.sqrt(2.0 / math.pi) * math.cosh(2.0), rel=1e-12)

    @pytest.mark.parametrize("nu", [-0.5, 0.0, 0.3, 1.0, 3.5])
    def test_against_mpmath_both_regimes(self, nu):
        for z in (0.01, 0.5, 5.0, 19.9, 20.1, 50.0, 300.0):
            with mpmath.workdps(40):
                want = float(mpmath.besseli(nu, z) / mpmath.mpf(z) ** nu)
            assert scaled_bessel_i(nu, z) == pytest.approx(want, rel=1e-10)

    def test_exp_pair_large_argument(self):
        mant, expo = scaled_bessel_i_exp(0.7, 5000.0)
        with mpmath.workdps(60):
            want = float(mpmath.log(mpmath.besseli(0.7, 5000)) - 0.7 * mpmath.log(5000))
        assert math.log(mant) + expo == pytest.approx(want, rel=1e-12)

    def test_log_mantissa_matches(self):
        for z in (0.1, 3.0, 19.0, 25.0, 1e4):
            lm = float(log_bessel_mantissa(1.2, z))
            with mpmath.workdps(60):
                want = float(
                    mpmath.log(mpmath.besseli(1.2, z)) - 1.2 * mpmath.log(z) - z
                )
            assert lm == pytest.approx(want, rel=1e-9, abs=1e-12)

    def test_positive_and_nondecreasing(self):
        zs = np.linspace(0.0, 60.0, 400)
        for nu in (-0.5, 0.0, 1.3, 4.0):
            vals = scaled_bessel_i(nu, zs)
            assert np.all(vals > 0)
            assert np.all(np.diff(vals) >= 0)

    def test_ratio(self):
        for nu, z in [(0.0, 0.5), (1.3, 8.0), (-0.5, 30.0), (2.0, 100.0)]:
            want = bessel_series_oracle(nu + 1, z, 200) / bessel_series_oracle(nu, z, 200) \
                if z < 25 else None
            got = bessel_ratio(nu, z)
            if want is not None:
                assert got == pytest.approx(want, rel=1e-10)
            with mpmath.workdps(50):
                ref = float(mpmath.besseli(nu + 1, z) / (z * mpmath.besseli(nu, z)))
            assert got == pytest.approx(ref, rel=1e-10)

    def test_domain(self):
        with pytest.raises(ValueError):
            scaled_bessel_i(-0.6, 1.0)
        with pytest.raises(ValueError):
            scaled_bessel_i(0.0, -1.0)


class TestQuadrature:
    def test_laguerre_moments(self):
        # zeroth moment with a = 0.3 is Gamma(1.3); first moment with a = 0 is 1
        rule = gauss_laguerre_rule(8, 0.3)
        assert rule.integrate(lambda u: np.ones_like(u)) == pytest.approx(
            gamma_fn(1.3), rel=1e-13
        )
        rule = gauss_laguerre_rule(8, 0.0)
        assert rule.integrate(lambda u: u) == pytest.approx(1.0, rel=1e-13)

    @pytest.mark.parametrize("n,a", [(6, -0.5), (10, 0.0), (9, 1.7), (14, 4.0)])
    def test_laguerre_degree_exactness(self, n, a):
        rule = gauss_laguerre_rule(n, a)
        for m in range(2 * n):
            want = float(mpmath.gamma(a + m + 1))
            got = rule.integrate(lambda u: u**m)
            assert abs(got - want) <= 1e-11 * want

    def test_jacobi_total_weight(self):
        # a = 1/2: constant weight on (-1,1), total 2
        rule = gauss_jacobi_rule(6, 0.5)
        assert rule.weights.sum() == pytest.approx(2.0, rel=1e-13)
        # general a: beta function oracle B(1/2, a+1/2)
        for a in (0.0, 0.8, 2.5):
            rule = gauss_jacobi_rule(8, a)
            want = math.sqrt(math.pi) * gamma_fn(a + 0.5) / gamma_fn(a + 1.0)
            assert rule.weights.sum() == pytest.approx(want, rel=1e-12)

    def test_jacobi_odd_moment_vanishes(self):
        rule = gauss_jacobi_rule(8, 0.7)
        assert abs(rule.integrate(lambda s: s)) < 1e-14

    @pytest.mark.parametrize("n,a", [(6, 0.0), (8, 0.7), (10, 2.0)])
    def test_jacobi_degree_exactness(self, n, a):
        rule = gauss_jacobi_rule(n, a)
        for m in range(0, 2 * n, 2):
            with mpmath.workdps(40):
                want = float(mpmath.beta((m + 1) / 2.0, a + 0.5))
            got = rule.integrate(lambda s: s**m)
            assert abs(got - want) <= 1e-11 * want

    def test_legendre(self):
        rule = gauss_legendre_rule(12)
        assert rule.integrate(lambda s: s**8) == pytest.approx(2.0 / 9.0, rel=1e-13)

    def test_rule_invariants(self):
        for rule in (
            gauss_laguerre_rule(20, -0.5),
            gauss_jacobi_rule(20, 1.1),
            gauss_legendre_rule(20),
        ):
            assert np.all(np.diff(rule.nodes) > 0)
            assert np.all(rule.weights > 0)

    def test_invalid_construction(self):
        with pytest.raises(ValueError):
            gauss_laguerre_rule(0, 0.0)
        with pytest.raises(ValueError):
            gauss_laguerre_rule(4, -1.0)
        with pytest.raises(ValueError):
            gauss_jacobi_rule(4, -0.5)
        with pytest.raises(ValueError):
            QuadratureRule([1.0, 0.5], [1.0, 1.0], "bad")
        with pytest.raises(ValueError):
            QuadratureRule([0.5, 1.0], [1.0, -1.0], "bad")


@settings(max_examples=60, deadline=None)
@given(
    k=st.integers(0, 12),
    a=st.sampled_from([-0.5, 0.0, 0.7, 3.0]),
    x=st.floats(0.0, 20.0, allow_nan=False),
)
def test_laguerre_recurrence_property(k, a, x):
    got = laguerre_poly(k, a, x)
    want = laguerre_series(k, a, x)
    assert abs(got - want) <= 1e-9 * (1.0 + abs(want))
