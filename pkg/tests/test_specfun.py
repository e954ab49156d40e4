import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from risfso import _mbkernel_py, kernels
from risfso.errors import (
    ConvergenceError,
    DomainError,
    NonSeparablePolesError,
    OverflowRangeError,
    PoleError,
)
from risfso.specfun import (
    MeijerGSpec,
    bessel_i,
    beta_reflection,
    laguerre_half,
    log_gamma_complex,
    lower_incomplete_gamma_regularized,
    meijer_g,
    meijer_g_many,
    mellin_product,
)

# adaptive quadrature of t^1.5 e^-t on [0, 3.7] divided by Gamma(2.5)
P_25_37 = 0.8074495669206042685
# sum (1/2)^(2k) / (k!)^2
I0_AT_1 = 1.266065877752008335598
I1_AT_1 = 0.5651591039924850272077
# multiprecision values of I0, I1
BESSEL_REF = {
    0.5: (1.06348337074132351926, 0.25789430539089631636),
    7.3: (222.658799873011866268, 206.791670046225483807),
    24.9: (5235629675.80442218415, 5129395695.92574206937),
    25.1: (6369018573.80350254257, 6240828249.87398027192),
    37.0: (771245522292810.504947, 760750876492641.556908),
    50.0: (293255378384933632665.4675, 290307859010355679675.1433),
    -12.5: (30596.3351557851536123, -29345.7496420711273196),
}

EXP_SPEC = MeijerGSpec(1, 0, [], [0])
RECIP_SPEC = MeijerGSpec(1, 1, [0], [0])


class TestIncompleteGamma:
    def test_exponential_case(self):
        assert lower_incomplete_gamma_regularized(1, math.log(2)) == pytest.approx(0.5, abs=1e-15)

    def test_zero(self):
        assert lower_incomplete_gamma_regularized(2.5, 0) == 0.0

    def test_quadrature_oracle(self):
        assert abs(lower_incomplete_gamma_regularized(2.5, 3.7) - P_25_37) < 1e-10

    def test_continued_fraction_branch(self):
        # x > s + 1 uses the continued fraction; compare with 1 - Q for s = 1
        for x in (3.0, 10.0, 40.0):
            assert lower_incomplete_gamma_regularized(1.0, x) == pytest.approx(-math.expm1(-x), rel=1e-14)

    def test_limit(self):
        assert lower_incomplete_gamma_regularized(3.3, 1e4) == 1.0
        assert lower_incomplete_gamma_regularized(3.3, math.inf) == 1.0

    def test_array_input(self):
        x = np.array([0.0, 1.0, 5.0])
        out = lower_incomplete_gamma_regularized(2.0, x)
        assert out.shape == (3,)
        assert out[1] == pytest.approx(1 - 2 * math.exp(-1), rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            lower_incomplete_gamma_regularized(0.0, 1.0)
        with pytest.raises(DomainError):
            lower_incomplete_gamma_regularized(1.0, -1.0)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.2, 30), st.floats(0, 10))
    def test_alternating_series_agrees(self, s, x):
        # the series cancels heavily near x = 10, so sum it in extra precision
        mpmath = pytest.importorskip("mpmath")
        with mpmath.workdps(40):
            xs, ss = mpmath.mpf(x), mpmath.mpf(s)
            total = mpmath.nsum(lambda n: (-1) ** n * xs ** (ss + n) / (mpmath.factorial(n) * (ss + n)), [0, mpmath.inf])
            ref = float(total / mpmath.gamma(ss))
        assert abs(lower_incomplete_gamma_regularized(s, x) - ref) < 1e-10

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.1, 50), st.floats(0, 100), st.floats(0, 10))
    def test_monotone(self, s, x, dx):
        lo = lower_incomplete_gamma_regularized(s, x)
        hi = lower_incomplete_gamma_regularized(s, x + dx)
        assert 0.0 <= lo <= hi + 1e-15 <= 1.0 + 1e-15


class TestBetaReflection:
    def test_half(self):
        assert beta_reflection(0.5) == pytest.approx(math.pi, rel=1e-15)

    def test_quarter(self):
        assert beta_reflection(0.25) == pytest.approx(math.pi * math.sqrt(2), rel=1e-15)

    def test_pole(self):
        with pytest.raises(PoleError):
            beta_reflection(3.0)
        with pytest.raises(PoleError):
            beta_reflection(-2.0 + 1e-10)

    def test_large_argument_keeps_sign(self):
        # sin(pi (z + k)) = (-1)^k sin(pi z)
        assert beta_reflection(7.25) == pytest.approx(-beta_reflection(0.25), rel=1e-13)
        assert beta_reflection(-3.5) == pytest.approx(math.pi, rel=1e-13)


class TestBessel:
    def test_origin(self):
        assert bessel_i(0, 0) == 1.0
        assert bessel_i(1, 0) == 0.0

    def test_power_series_oracle(self):
        assert abs(bessel_i(0, 1) - I0_AT_1) <= 1e-12 * I0_AT_1
        assert abs(bessel_i(1, 1) - I1_AT_1) <= 1e-12 * I1_AT_1

    @pytest.mark.parametrize("x", sorted(BESSEL_REF))
    def test_reference_values(self, x):
        r0, r1 = BESSEL_REF[x]
        assert bessel_i(0, x) == pytest.approx(r0, rel=1e-12)
        assert bessel_i(1, x) == pytest.approx(r1, rel=1e-12)

    def test_overflow(self):
        with pytest.raises(OverflowRangeError):
            bessel_i(0, 1000.0)

    def test_bad_order(self):
        with pytest.raises(DomainError):
            bessel_i(2, 1.0)


class TestLaguerreHalf:
    def test_zero(self):
        assert laguerre_half(0.0) == 1.0

    def test_composition(self):
        ref = math.exp(-1) * (3 * I0_AT_1 + 2 * I1_AT_1)
        assert laguerre_half(-2.0) == pytest.approx(ref, rel=1e-13)

    def test_rayleigh_mean(self):
        omega = 2.7
        assert 0.5 * math.sqrt(math.pi * omega) * laguerre_half(0) == pytest.approx(math.sqrt(math.pi * omega / 4))

    def test_large_k_no_overflow(self):
        # L_{1/2}(-K) ~ 2 sqrt(K / pi) for large K
        val = laguerre_half(-4000.0)
        assert val == pytest.approx(2 * math.sqrt(4000 / math.pi), rel=1e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            laguerre_half(0.5)


class TestLogGamma:
    def test_one(self):
        assert abs(log_gamma_complex(1)) < 1e-13

    def test_half(self):
        assert log_gamma_complex(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-13)

    def test_recurrence_point(self):
        z = 3.2 + 1.5j
        res = log_gamma_complex(z + 1) - log_gamma_complex(z) - np.log(z)
        assert abs(res) <= 1e-12

    def test_recurrence_grid(self):
        rng = np.random.default_rng(7)
        z = rng.uniform(0.5, 10, 100) + 1j * rng.uniform(-50, 50, 100)
        lg = kernels.log_gamma
        res = lg(z + 1) - lg(z) - np.log(z)
        assert np.max(np.abs(res)) <= 1e-12

    def test_matches_real_lgamma(self):
        for x in (0.1, 2.5, 17.0, 99.5, -3.5):
            ref = math.lgamma(x)
            val = log_gamma_complex(x)
            assert val.real == pytest.approx(ref, abs=1e-12 * max(1, abs(ref)))

    def test_negative_real_branch(self):
        # Gamma(-0.5) = -2 sqrt(pi): principal log has imaginary part +-pi
        val = log_gamma_complex(-0.5 + 0j)
        assert np.exp(val).real == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-13)

    def test_gamma_accuracy_grid(self):
        rng = np.random.default_rng(11)
        r = rng.uniform(0.05, 100, 200)
        th = rng.uniform(-np.pi, np.pi, 200)
        z = r * np.exp(1j * th)
        from scipy.special import loggamma

        err = np.abs(np.expm1(kernels.log_gamma(z) - loggamma(z)))
        assert err.max() <= 1e-12

    def test_pole(self):
        with pytest.raises(PoleError):
            log_gamma_complex(-3)
        with pytest.raises(PoleError):
            log_gamma_complex(0)

    def test_backends_agree(self):
        z = np.array([0.3 + 2j, -7.7 + 0.1j, 45 - 30j, 2.0])
        assert np.allclose(kernels.log_gamma(z), _mbkernel_py.log_gamma(z), rtol=0, atol=1e-13)


class TestMeijerIdentities:
    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_exponential(self, x):
        assert abs(meijer_g(EXP_SPEC, x) - math.exp(-x)) <= 1e-10

    @pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
    def test_reciprocal(self, x):
        assert abs(meijer_g(RECIP_SPEC, x) - 1 / (1 + x)) <= 1e-10

    def test_quoted_values(self):
        assert abs(meijer_g(EXP_SPEC, 1.0) - math.exp(-1)) <= 1e-10
        assert meijer_g(RECIP_SPEC, 3.0) == pytest.approx(0.25, abs=1e-12)

    def test_incomplete_gamma_form(self):
        # G^{1,1}_{1,2}(x | 1; s, 0) = gamma(s, x)
        s = 2.5
        spec = MeijerGSpec(1, 1, [1], [s, 0])
        assert meijer_g(spec, 3.7) == pytest.approx(P_25_37 * math.gamma(s), rel=1e-9)

    def test_bessel_k_form(self):
        # G^{2,0}_{0,2}(x | -; v, -v) = 2 K_{2v}(2 sqrt x)
        from scipy.special import kv

        for x in (0.05, 2.0, 30.0):
            assert meijer_g(MeijerGSpec(2, 0, [], [0.3, -0.3]), x) == pytest.approx(
                2 * kv(0.6, 2 * math.sqrt(x)), rel=1e-9
            )

    def test_oracle_values(self, meijer_oracle):
        assert len(meijer_oracle) >= 11
        for case in meijer_oracle:
            spec = MeijerGSpec(case["m"], case["n"], case["a"], case["b"])
            ref = float(case["value"])
            assert abs(meijer_g(spec, case["z"]) / ref - 1) <= 1e-6, case["name"]

    def test_step_halving_bound(self, meijer_oracle):
        for case in meijer_oracle[:6]:
            spec = MeijerGSpec(case["m"], case["n"], case["a"], case["b"])
            v, err, lev = meijer_g(spec, case["z"], full_output=True)
            v2 = meijer_g(spec, case["z"], min_halvings=lev + 1)
            assert abs(v2 - v) <= err

    def test_batch_matches_scalar(self):
        spec = MeijerGSpec(3, 1, [1, 2.21], [1.21, 2.296, 1, 0])
        z = np.array([0.01, 0.3, 1.0, 4.0, 80.0])
        many = meijer_g_many(spec, z)
        single = [meijer_g(spec, v) for v in z]
        assert np.allclose(many, single, rtol=1e-12, atol=0)

    def test_deterministic(self):
        spec = MeijerGSpec(6, 1, [1, 2.21, 45.89], [44.89, 2.296, 1, 1.21, 8, 3, 0])
        assert meijer_g(spec, 0.7) == meijer_g(spec, 0.7)

    def test_non_separable(self):
        with pytest.raises(NonSeparablePolesError):
            meijer_g(MeijerGSpec(1, 1, [2.0], [0.5]), 1.0)

    def test_divergent_line(self):
        with pytest.raises(DomainError):
            meijer_g(MeijerGSpec(1, 0, [0.5], [0.0, 0.2]), 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            meijer_g(EXP_SPEC, 0.0)
        with pytest.raises(DomainError):
            MeijerGSpec(2, 0, [], [0.0])

    def test_convergence_error_reports_tolerance(self):
        err = ConvergenceError("x", achieved=1e-3)
        assert err.achieved == 1e-3


class TestMeijerTransforms:
    SPEC = MeijerGSpec(6, 1, [1, 2.21, 45.89], [44.89, 2.296, 1, 1.21, 2.296, 2, 0])

    def test_root_expansion(self):
        for r in (2, 3):
            pref, spec_r, argf = self.SPEC.root_expansion(r)
            for x in (0.05, 1.0, 9.0):
                lhs = meijer_g(self.SPEC, x ** (1 / r))
                assert pref * meijer_g(spec_r, argf * x) == pytest.approx(lhs, rel=1e-8)

    def test_root_expansion_order(self):
        pref, full, argf = self.SPEC.root_expansion(2, reduce=False)
        # G^{6r,1}_{2r+1,6r+1} once the obvious Gamma ratio cancels
        paper_form = MeijerGSpec(
            12, 1, [full.a[1]] + list(full.a[2:]), list(full.b[:12]) + [full.b[12]]
        )
        assert (full.m, full.n, full.p, full.q) == (12, 2, 6, 14)
        assert (paper_form.m, paper_form.n, paper_form.p, paper_form.q) == (12, 1, 5, 13)
        assert argf == 2.0 ** -8
        _, red, _ = self.SPEC.root_expansion(2)
        # xi^2 and 1 + xi^2 halves cancel pairwise as well
        assert (red.m, red.n, red.p, red.q) == (10, 1, 3, 11)
        for x in (0.3, 4.0):
            ref = meijer_g(red, argf * x)
            assert meijer_g(full, argf * x) == pytest.approx(ref, rel=1e-9)
            assert meijer_g(paper_form, argf * x) == pytest.approx(ref, rel=1e-9)

    def test_inversion(self):
        inv = self.SPEC.inverted()
        for x in (0.2, 3.0):
            assert meijer_g(inv, 1 / x) == pytest.approx(meijer_g(self.SPEC, x), rel=1e-9)

    def test_reduction_keeps_value(self):
        spec = MeijerGSpec(2, 1, [0.3, 1.7], [1.7, 0.9, 0.3])
        red = spec.reduced()
        assert (red.m, red.n, red.p, red.q) == (1, 0, 0, 1)
        assert meijer_g(red, 2.0) == pytest.approx(meijer_g(spec, 2.0), rel=1e-9)
        assert meijer_g(red, 2.0) == pytest.approx(math.exp(-2.0) * 2.0**0.9, rel=1e-9)

    def test_gamma_average(self):
        from scipy.integrate import quad

        nu, theta, sigma = 2.7, 0.8, 1.3
        for k in (1, 2):
            pref, spec_k, argf = RECIP_SPEC.gamma_average(k, nu)
            closed = pref * meijer_g(spec_k, argf * sigma * theta**k)

            def integrand(u):
                return u ** (nu - 1) * math.exp(-u / theta) / (math.gamma(nu) * theta**nu) / (1 + sigma * u**k)

            ref, _ = quad(integrand, 0, np.inf, epsabs=1e-13, epsrel=1e-12)
            assert closed == pytest.approx(ref, rel=1e-8)

    def test_mellin_product(self):
        from scipy.integrate import quad

        s, w = 0.7, 2.2
        # G^{1,1}_{1,1}(x | 1; 1) = x / (1 + x), so the x^{-1} weight stays integrable
        g2 = MeijerGSpec(1, 1, [1.0], [1.0])
        spec = mellin_product(EXP_SPEC, g2)
        ref, _ = quad(lambda x: math.exp(-s * x) * w / (1 + w * x), 0, np.inf, epsabs=1e-14)
        assert meijer_g(spec, s / w) == pytest.approx(ref, rel=1e-9)
