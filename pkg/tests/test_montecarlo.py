import math

import numpy as np
import pytest
from scipy import stats

from risfso import metrics as m
from risfso import montecarlo as mc
from risfso.channels import Channels, MalagaPointingLink, RicianHopParams, ScenarioConfig
from risfso.errors import DomainError, IncompatibleMetricError

LINK = MalagaPointingLink(2.296, 2, 1.1)
CH = Channels(RicianHopParams(2, 2), RicianHopParams(2, 2), RicianHopParams(1, 2), LINK, LINK, LINK)


def cfg(scenario, rs=0.5):
    return ScenarioConfig(scenario, 10.0, 10.0, 1.0, 1.0, rs=rs, n_elements=2)


class TestEstimate:
    def test_mean_and_stderr(self):
        e = mc.estimate([0.0, 1.0, 1.0, 0.0])
        assert e.mean == 0.5 and e.trials == 4
        assert e.stderr == pytest.approx(math.sqrt(1 / 3 / 4))

    def test_single_sample(self):
        assert mc.estimate([2.0]).stderr == 0.0


class TestSamplers:
    def test_rician_power(self):
        a = mc.sample_rician_amp(RicianHopParams(3, 2.5), mc.block_rng(1, 0), 400_000)
        assert np.mean(a**2) == pytest.approx(2.5, rel=0.01)

    def test_rician_rayleigh_law(self):
        a = mc.sample_rician_amp(RicianHopParams(0, 1), mc.block_rng(2, 0), 100_000)
        assert stats.kstest(a, stats.rayleigh(scale=math.sqrt(0.5)).cdf).pvalue > 1e-3

    @pytest.mark.parametrize("r", [1, 2])
    def test_fso_link_mean(self, r):
        lk = MalagaPointingLink(4.2, 3, 1.1, r=r)
        s = mc.sample_fso_link_snr(lk, 2.0, mc.block_rng(3, 0), 400_000)
        if r == 1:
            assert np.mean(s) == pytest.approx(2.0, rel=0.01)
        else:
            assert np.all(s >= 0)

    def test_irradiance_mean(self):
        i = mc.sample_malaga_pe_irradiance(LINK, mc.block_rng(4, 0), 1_000_000)
        assert np.mean(i) == pytest.approx(LINK.mean_irradiance, rel=0.01)

    def test_pair_split_does_not_change_law(self):
        a = mc.sample_fso_pair_snr(LINK, LINK, 9.0, mc.block_rng(5, 0), 50_000, split=0.5)
        b = mc.sample_fso_pair_snr(LINK, LINK, 9.0, mc.block_rng(6, 0), 50_000, split=0.9)
        assert stats.ks_2samp(a, b).pvalue > 1e-3

    def test_inverse_sampler_agrees(self):
        a = mc.sample_fso_link_snr(LINK, 1.0, mc.block_rng(7, 0), 20_000)
        b = mc.sample_fso_link_snr_inverse(LINK, 1.0, mc.block_rng(8, 0), 2_000, iterations=40)
        assert stats.ks_2samp(a, b).pvalue > 1e-3


class TestSimulate:
    def test_reproducible_across_workers(self):
        c = cfg("I")
        reqs = [("sop", "I", "lower"), ("asc", "I", "lower")]
        one = mc.simulate(reqs, c, CH, mc.TrialConfig(20_000, 9, workers=1))
        three = mc.simulate(reqs, c, CH, mc.TrialConfig(20_000, 9, workers=3))
        assert one == three

    def test_seed_changes_draws(self):
        a = mc.draw_block(cfg("II"), CH, 100, mc.block_rng(1, 0))
        b = mc.draw_block(cfg("II"), CH, 100, mc.block_rng(2, 0))
        c = mc.draw_block(cfg("II"), CH, 100, mc.block_rng(1, 1))
        for key in a:
            assert not np.array_equal(a[key], b[key])
            assert not np.array_equal(a[key], c[key])

    @pytest.mark.parametrize("scenario", ["I", "II", "III"])
    def test_lower_event_inside_exact(self, scenario):
        s = mc.draw_block(cfg(scenario), CH, 20_000, mc.block_rng(11, 0))
        lower = mc.outage_indicator(scenario, s, 2.0, "lower")
        exact = mc.outage_indicator(scenario, s, 2.0, "exact")
        assert np.all(exact[lower])

    @pytest.mark.parametrize("scenario", ["II", "III"])
    def test_matches_analytic(self, scenario):
        # both race terms here are exact, so the sampler must agree within noise
        c = cfg(scenario)
        e = mc.simulate_metric("ip" if scenario == "II" else "sop", scenario, c, CH,
                               mc.TrialConfig(200_000, 3, 1))
        ref = (m.ip if scenario == "II" else m.sop)(c, CH).value
        if scenario == "II":
            assert abs(e.mean - ref) < 4 * e.stderr
        else:
            assert abs(e.mean - ref) < 0.02

    def test_est_samples(self):
        c = cfg("I", rs=1.5)
        s = mc.draw_block(c, CH, 1000, mc.block_rng(12, 0))
        v = mc.metric_samples("est", "I", c, s)
        assert set(np.unique(v)) <= {0.0, 1.5}

    def test_asc_needs_scenario_one(self):
        with pytest.raises(IncompatibleMetricError):
            mc.simulate([("asc", "II", "lower")], cfg("II"), CH, mc.TrialConfig(100))

    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            mc.TrialConfig(0)
        with pytest.raises(DomainError):
            mc.outage_indicator("I", {"R": np.ones(1), "D": np.ones(1), "EP": np.ones(1)}, 1.0, "upper")

    def test_worker_env(self, monkeypatch):
        monkeypatch.setenv(mc.WORKERS_ENV, "3")
        assert mc.default_workers() == 3
        monkeypatch.setenv(mc.WORKERS_ENV, "zero")
        with pytest.raises(DomainError):
            mc.default_workers()
