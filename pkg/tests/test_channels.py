import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from risfso import montecarlo as mc
from risfso.channels import (
    Channels,
    MalagaPointingLink,
    RicianHopParams,
    ScenarioConfig,
    db_to_linear,
    fit_rf_cascade,
    linear_to_db,
    malaga_constants,
    omega_prime,
    rician_amp_mean,
)
from risfso.errors import DegenerateError, DomainError


class TestRician:
    def test_rayleigh_mean(self):
        assert rician_amp_mean(RicianHopParams(0, 1)) == pytest.approx(math.sqrt(math.pi / 4), rel=1e-14)

    def test_rayleigh_scales_with_sqrt_omega(self):
        assert rician_amp_mean(RicianHopParams(0, 4)) == pytest.approx(2 * math.sqrt(math.pi / 4), rel=1e-14)

    def test_mean_matches_sampled_mean(self):
        hop = RicianHopParams(2, 3)
        est = mc.estimate(mc.sample_rician_amp(hop, mc.block_rng(21, 0), 1_000_000))
        assert abs(est.mean - rician_amp_mean(hop)) <= 3 * est.stderr

    def test_invalid_hop(self):
        with pytest.raises(DomainError):
            RicianHopParams(-1, 1)
        with pytest.raises(DomainError):
            RicianHopParams(1, 0)


class TestCascadeFit:
    def test_rayleigh_product_moments(self):
        fit = fit_rf_cascade(RicianHopParams(0, 1), RicianHopParams(0, 1), 1)
        assert fit.mean_amp == pytest.approx(math.pi / 4, rel=1e-14)
        assert fit.var_sum == pytest.approx(1 - math.pi**2 / 16, rel=1e-13)

    def test_shape_and_scale_definitions(self):
        hop = RicianHopParams(2, 3)
        fit = fit_rf_cascade(hop, hop, 4)
        mean = 4 * fit.mean_amp
        assert fit.a == pytest.approx(mean**2 / fit.var_sum - 1, rel=1e-13)
        assert fit.b == pytest.approx(fit.var_sum / mean, rel=1e-13)
        # Gamma(a + 1, b) reproduces the first two moments of the sum
        assert (fit.a + 1) * fit.b == pytest.approx(mean, rel=1e-13)
        assert (fit.a + 1) * fit.b**2 == pytest.approx(fit.var_sum, rel=1e-13)

    def test_second_moment_is_omega_product(self):
        h1, h2 = RicianHopParams(1.5, 2.0), RicianHopParams(0.3, 5.0)
        fit = fit_rf_cascade(h1, h2, 1)
        assert fit.var_sum + fit.mean_amp**2 == pytest.approx(10.0, rel=1e-13)

    def test_mc_moment_oracle(self):
        hop = RicianHopParams(2, 3)
        fit = fit_rf_cascade(hop, hop, 4)
        amp = np.sqrt(mc.sample_rf_cascade_snr(hop, hop, 4, 1.0, mc.block_rng(22, 0), 1_000_000))
        assert np.mean(amp) == pytest.approx((fit.a + 1) * fit.b, rel=0.01)
        assert np.var(amp) == pytest.approx((fit.a + 1) * fit.b**2, rel=0.01)

    @settings(max_examples=40, deadline=None)
    @given(
        k1=st.floats(0, 10), o1=st.floats(0.1, 10), k2=st.floats(0, 10), o2=st.floats(0.1, 10),
        s=st.floats(0.2, 5), n=st.integers(1, 16),
    )
    def test_scale_consistency(self, k1, o1, k2, o2, s, n):
        base = fit_rf_cascade(RicianHopParams(k1, o1), RicianHopParams(k2, o2), n)
        scaled = fit_rf_cascade(RicianHopParams(k1, o1 * s * s), RicianHopParams(k2, o2), n)
        assert scaled.mean_amp == pytest.approx(s * base.mean_amp, rel=1e-11)
        assert scaled.a == pytest.approx(base.a, rel=1e-9, abs=1e-9)
        assert scaled.b == pytest.approx(s * base.b, rel=1e-11)
        assert base.var_sum > 0

    def test_invalid_count(self):
        with pytest.raises(DomainError):
            fit_rf_cascade(RicianHopParams(1, 1), RicianHopParams(1, 1), 0)


class TestMalaga:
    def test_omega_prime_without_coupling(self):
        assert omega_prime(MalagaPointingLink(2.296, 2, 1.1, omega=0.7, rho=0.0)) == 0.7

    def test_omega_prime_aligned_phases(self):
        link = MalagaPointingLink(2.296, 2, 1.1, omega=0.5, b0=0.25, rho=0.596, phi_a=0.3, phi_b=0.3)
        expected = (math.sqrt(0.5) + math.sqrt(2 * 0.25 * 0.596)) ** 2
        assert omega_prime(link) == pytest.approx(expected, rel=1e-14)

    def test_omega_prime_maximised_by_aligned_phases(self):
        vals = [omega_prime(MalagaPointingLink(2, 1, 1, phi_a=p, phi_b=0.0)) for p in np.linspace(0, 2 * math.pi, 13)]
        assert min(vals) >= 0
        assert max(vals) == pytest.approx(vals[0], rel=1e-14)

    def test_from_omega_prime(self):
        link = MalagaPointingLink.from_omega_prime(2.296, 2, 6.7, 1.0)
        assert link.constants.omega_prime == pytest.approx(1.0, rel=1e-13)

    def test_single_term_mixture(self):
        k = malaga_constants(MalagaPointingLink(3.0, 1, 2.0))
        assert len(k.b_m) == 1 and len(k.a_m) == 1

    def test_constant_B(self):
        link = MalagaPointingLink(4.2, 3, 1.1)
        k = link.constants
        c, op = k.c, k.omega_prime
        assert c == pytest.approx(2 * 0.25 * (1 - 0.596), rel=1e-15)
        expected = 1.1**2 * 4.2 * 3 * (c + op) / ((1.1**2 + 1) * (3 * c + op))
        assert k.B == pytest.approx(expected, rel=1e-14)

    def test_degenerate_rho(self):
        with pytest.raises(DegenerateError):
            MalagaPointingLink(2.296, 2, 1.1, rho=1.0)

    def test_beta_must_be_integer(self):
        with pytest.raises(DomainError):
            MalagaPointingLink(2.296, 2.5, 1.1)

    def test_detection_order(self):
        with pytest.raises(DomainError):
            MalagaPointingLink(2.296, 2, 1.1, r=3)


class TestScenario:
    def test_phi(self):
        assert ScenarioConfig("I", 1, 1, 1, 1, rs=1.5).phi == 2**1.5

    def test_rejects_bad_values(self):
        with pytest.raises(DomainError):
            ScenarioConfig("IV", 1, 1, 1, 1)
        with pytest.raises(DomainError):
            ScenarioConfig("I", 0, 1, 1, 1)
        with pytest.raises(DomainError):
            ScenarioConfig("I", 1, 1, 1, 1, rs=-0.1)
        with pytest.raises(DomainError):
            ScenarioConfig("I", 1, 1, 1, 1, n_elements=0)

    def test_replace(self):
        cfg = ScenarioConfig("I", 1, 2, 3, 4, rs=0.5)
        assert cfg.replace(rs=0.0).rs == 0.0 and cfg.replace(rs=0.0).gamma2 == 2

    def test_channels_need_shared_order(self):
        hop = RicianHopParams(1, 1)
        with pytest.raises(DomainError):
            Channels(hop, hop, hop, MalagaPointingLink(2, 1, 1, r=1), MalagaPointingLink(2, 1, 1, r=2),
                     MalagaPointingLink(2, 1, 1, r=1))

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-80, 80))
    def test_db_round_trip(self, db):
        assert linear_to_db(db_to_linear(db)) == pytest.approx(db, rel=1e-12, abs=1e-12)
        x = db_to_linear(db)
        assert db_to_linear(linear_to_db(x)) == pytest.approx(x, rel=1e-12)
