"""Monte-Carlo channel simulator and metric estimators.

All variates are generated physically: Rician hops as LOS plus complex
Gaussian scatter, Malaga irradiance as Gamma x shadowed-Rician x pointing
loss. Trials are split into fixed-size blocks, each with its own Philox
stream keyed by (master_seed, block), so estimates do not depend on the
worker count.
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from risfso import distributions as dist
from risfso.errors import DomainError, IncompatibleMetricError

BLOCK = 8192
WORKERS_ENV = "RISFSO_WORKERS"


def default_workers():
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"{WORKERS_ENV} must be a positive integer, got {env!r}") from None
        if n < 1:
            raise DomainError(f"{WORKERS_ENV} must be a positive integer, got {env!r}")
        return n
    return os.cpu_count() or 1


@dataclass(frozen=True)
class TrialConfig:
    """Trial count, master seed and worker count of one simulation."""

    trials: int
    master_seed: int = 0
    workers: int | None = None

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise DomainError("master_seed must be a 64-bit unsigned integer")
        if self.workers is not None and self.workers < 1:
            raise DomainError(f"workers must be positive, got {self.workers}")


@dataclass(frozen=True)
class EmpiricalEstimate:
    mean: float
    stderr: float
    trials: int


def block_rng(master_seed, block):
    """Independent generator for one block of trials."""
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(block),))
    return np.random.Generator(np.random.Philox(seq))


def estimate(samples):
    """Mean and standard error with compensated summation."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    mean = math.fsum(x) / n
    if n < 2:
        return EmpiricalEstimate(mean, 0.0, n)
    var = math.fsum((x - mean) ** 2) / (n - 1)
    return EmpiricalEstimate(mean, math.sqrt(var / n), n)


# --- samplers -----------------------------------------------------------------

def sample_rician_amp(hop, rng, size=None):
    """|LOS + scatter| with E[amp^2] = omega."""
    los = math.sqrt(hop.omega * hop.K / (hop.K + 1.0))
    sd = math.sqrt(hop.omega / (hop.K + 1.0) / 2.0)
    re = los + sd * rng.standard_normal(size)
    im = sd * rng.standard_normal(size)
    return np.hypot(re, im)


def sample_rf_cascade_snr(hop_a, hop_b, n_elements, gbar, rng, size=None):
    """gbar * (sum_i alpha_i beta_i)^2 over n_elements phase-aligned elements."""
    shape = (n_elements,) if size is None else (int(size), n_elements)
    s = np.sum(sample_rician_amp(hop_a, rng, shape) * sample_rician_amp(hop_b, rng, shape), axis=-1)
    return gbar * s * s


def sample_malaga_pe_irradiance(link, rng, size=None):
    """Gamma large-scale x shadowed-Rician small-scale x pointing loss."""
    k = link.constants
    x = rng.gamma(link.alpha, 1.0 / link.alpha, size)
    g = rng.gamma(link.beta, k.omega_prime / link.beta, size)
    sd = math.sqrt(k.c / 2.0)
    y = (np.sqrt(g) + sd * rng.standard_normal(size)) ** 2 + (sd * rng.standard_normal(size)) ** 2
    ip = rng.random(size) ** (1.0 / link.xi**2)
    return x * y * ip


def sample_fso_link_snr(link, gbar, rng, size=None):
    """gbar * (I / E[I])^r for one sub-link."""
    return gbar * (sample_malaga_pe_irradiance(link, rng, size) / link.mean_irradiance) ** link.r


def sample_fso_pair_snr(link_a, link_b, gprod, rng, size=None, split=0.5):
    """Product of two independent sub-link SNRs with averages splitting gprod."""
    ga = gprod**split
    return sample_fso_link_snr(link_a, ga, rng, size) * sample_fso_link_snr(link_b, gprod / ga, rng, size)


def sample_fso_link_snr_inverse(link, gbar, rng, size=None, iterations=60):
    """Inverse-CDF sampler by bisection on the analytic single-link CDF.

    Secondary consistency tool; much slower than the physical sampler.
    """
    u = np.atleast_1d(rng.random(size))
    lo = np.full(u.shape, -60.0)
    hi = np.full(u.shape, 60.0)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        below = dist.cdf_snr_fso_link(link, gbar, gbar * np.exp(mid)) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out = gbar * np.exp(0.5 * (lo + hi))
    return float(out[0]) if size is None else out


# --- per-trial metric samples ------------------------------------------------------

def draw_block(cfg, ch, n, rng):
    """SNR draws of one block: gamma_R, gamma_EP, gamma_D, gamma_EQ.

    The eavesdroppers get independent copies of the shared first hops, the
    same independence the closed forms assume.
    """
    N = cfg.n_elements
    return {
        "R": sample_rf_cascade_snr(ch.hop1, ch.hop2, N, cfg.gamma1, rng, n),
        "EP": sample_rf_cascade_snr(ch.hop1, ch.hop3, N, cfg.gamma_e1, rng, n),
        "D": sample_fso_pair_snr(ch.link_h, ch.link_g, cfg.gamma2, rng, n, cfg.hop_split),
        "EQ": sample_fso_pair_snr(ch.link_h, ch.link_ge, cfg.gamma_e2, rng, n, cfg.hop_split),
    }


def outage_indicator(scenario, s, phi, variant="lower"):
    """Per-trial outage event of a scenario.

    ``lower`` is the event whose probability the closed forms give;
    ``exact`` is {ln(1 + gamma_eq) - ln(1 + gamma_E) < Rs}.
    """
    R, D = s["R"], s["D"]
    if variant not in ("lower", "exact"):
        raise DomainError(f"variant must be 'lower' or 'exact', got {variant!r}")
    if scenario == "I":
        eq, E = np.minimum(R, D), s["EP"]
        return eq <= phi * E + (phi - 1.0 if variant == "exact" else 0.0)
    if scenario == "II":
        E = s["EQ"]
        if variant == "exact":
            return np.minimum(R, D) <= phi * E + phi - 1.0
        return (R <= phi - 1.0) | (D <= phi * E)
    if scenario == "III":
        if variant == "exact":
            E = np.maximum(s["EP"], s["EQ"])
            return np.minimum(R, D) <= phi * E + phi - 1.0
        return (R <= phi * s["EP"]) | (D <= phi * s["EQ"])
    raise DomainError(f"unknown scenario {scenario!r}")


def metric_samples(metric, scenario, cfg, s, variant="lower"):
    """Per-trial values whose mean estimates the metric."""
    if metric == "sop":
        return outage_indicator(scenario, s, cfg.phi, variant).astype(float)
    if metric == "spsc":
        return 1.0 - outage_indicator(scenario, s, 1.0, variant)
    if metric == "est":
        return cfg.rs * (1.0 - outage_indicator(scenario, s, cfg.phi, variant))
    if metric == "ip":
        if scenario == "I":
            return (s["R"] <= s["EP"]).astype(float)
        if scenario == "II":
            return (s["D"] <= s["EQ"]).astype(float)
        return ((s["R"] <= s["EP"]) | (s["D"] <= s["EQ"])).astype(float)
    if metric == "asc":
        if scenario != "I":
            raise IncompatibleMetricError("ASC is only defined for scenario I")
        return np.maximum(0.0, np.log1p(np.minimum(s["R"], s["D"])) - np.log1p(s["EP"]))
    raise IncompatibleMetricError(f"unknown metric {metric!r}")


def _blocks(trials):
    nb = -(-trials // BLOCK)
    return [(b, min(BLOCK, trials - b * BLOCK)) for b in range(nb)]


def simulate(requests, cfg, ch, trial):
    """Estimate several metrics from one shared set of draws.

    ``requests`` is a list of (metric, scenario, variant) tuples; returns a
    dict mapping each tuple to an EmpiricalEstimate.
    """
    requests = [tuple(r) for r in requests]
    for metric, scenario, _ in requests:
        if metric == "asc" and scenario != "I":
            raise IncompatibleMetricError("ASC is only defined for scenario I")

    def run(block):
        b, n = block
        s = draw_block(cfg, ch, n, block_rng(trial.master_seed, b))
        return [metric_samples(m, sc, cfg, s, v) for m, sc, v in requests]

    workers = trial.workers or default_workers()
    blocks = _blocks(trial.trials)
    if workers == 1 or len(blocks) == 1:
        parts = [run(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    return {req: estimate(np.concatenate([p[i] for p in parts])) for i, req in enumerate(requests)}


def simulate_metric(metric, scenario, cfg, ch, trial, variant="lower"):
    """Empirical estimate of one metric for one scenario."""
    metric = metric.lower()
    key = (metric, scenario, variant)
    return simulate([key], cfg.replace(scenario=scenario), ch, trial)[key]
