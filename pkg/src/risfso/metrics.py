"""Secrecy metrics for the three eavesdropping scenarios.

Scenario I: RF eavesdropper near the RF RIS. Scenario II: FSO eavesdropper
near the FSO RIS. Scenario III: both at once. All SOP values are the
lower bound Pr{gamma_eq <= phi * gamma_E} (Scenario II: its variable-gain
form), with phi = 2^Rs. ASC is in nats.

The closed forms are assembled from two "race" probabilities,
Pr{gamma_R <= phi gamma_EP} (Gamma-fitted RF amplitudes) and
Pr{gamma_D <= phi gamma_EQ} (Malaga products, a single Meijer G per term).
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc

from risfso import distributions as dist
from risfso.errors import ConvergenceError, IncompatibleMetricError, NonSeparablePolesError, PoleError
from risfso.policy import (
    FLAG_CLAMPED,
    FLAG_ILL_CONDITIONED,
    FLAG_POLE_PERTURBED,
    FLAG_TRUNCATED,
    SERIES_CAP,
    SERIES_RTOL,
    clamp_probability,
)
from risfso.quadrature import integrate_positive
from risfso.specfun import MeijerGSpec, beta_reflection, meijer_g, meijer_g_many, mellin_product

CLOSED_FORM = "closed-form"
QUADRATURE = "quadrature"
MONTE_CARLO = "monte-carlo"

METRICS = ("asc", "sop", "spsc", "est", "ip")
PROBABILITY_METRICS = ("sop", "spsc", "ip")
# largest |term| / |sum| tolerated in an alternating series (about 11 digits kept)
MAX_SERIES_CONDITION = 1e5
QUAD_RTOL = 1e-9
ASC_RTOL = 1e-6


@dataclass(frozen=True)
class MetricValue:
    """A metric value with its provenance."""

    value: float
    method: str
    stderr: float | None = None
    flags: frozenset = frozenset()
    details: dict = field(default_factory=dict, compare=False)


def _finish(raw, method, flags, details=None):
    value, flagged = clamp_probability(raw)
    flags = set(flags)
    if flagged:
        flags.add(FLAG_CLAMPED)
    details = dict(details or {})
    details["raw"] = float(raw)
    return MetricValue(float(value), method, None, frozenset(flags), details)


# --- alternating series -----------------------------------------------------

def _alternating(log_mag, n_max=SERIES_CAP):
    """Sum (-1)^n exp(log_mag(n)); returns (sum, truncated, condition)."""
    terms = []
    peak = 0.0
    total = 0.0
    for n in range(n_max):
        t = math.exp(log_mag(n))
        if n % 2:
            t = -t
        terms.append(t)
        peak = max(peak, abs(t))
        total = math.fsum(terms)
        if abs(t) < SERIES_RTOL * abs(total):
            break
    else:
        return total, True, peak / max(abs(total), 1e-300)
    return total, False, peak / max(abs(total), 1e-300)


def _race_series(s1, s2, x):
    # Pr{u <= x v}, u ~ Gamma(s1, 1), v ~ Gamma(s2, 1), by the series in x < 1
    base = -math.lgamma(s1) - math.lgamma(s2)
    lx = math.log(x)

    def log_mag(n):
        return (s1 + n) * lx + math.lgamma(s1 + s2 + n) - math.lgamma(n + 1.0) - math.log(s1 + n) + base

    return _alternating(log_mag)


def _rf_ratio(fit_r, fit_e, g1, ge1, phi):
    return math.sqrt(phi) * fit_e.b * math.sqrt(ge1) / (fit_r.b * math.sqrt(g1))


# --- RF race ------------------------------------------------------------------

def rf_race_closed(fit_r, fit_e, g1, ge1, phi):
    """Series value of Pr{gamma_R <= phi gamma_EP}.

    Returns ``(value, flags, details)``; flags report truncation or loss of
    significance, in which case the value should not be trusted.
    """
    s1, s2 = fit_r.a + 1.0, fit_e.a + 1.0
    x = _rf_ratio(fit_r, fit_e, g1, ge1, phi)
    flags = set()
    if x < 1.0:
        val, trunc, cond = _race_series(s1, s2, x)
    elif x > 1.0:
        # mirror: Pr{u <= x v} = 1 - Pr{v <= u / x}
        comp, trunc, cond = _race_series(s2, s1, 1.0 / x)
        val = 1.0 - comp
    else:
        val, trunc, cond = math.nan, True, math.inf
    if trunc:
        flags.add(FLAG_TRUNCATED)
    if cond > MAX_SERIES_CONDITION:
        flags.add(FLAG_ILL_CONDITIONED)
    return val, flags, {"x": x, "condition": cond}


def rf_race_quadrature(fit_r, fit_e, g1, ge1, phi):
    """Pr{gamma_R <= phi gamma_EP} as int F_R(phi g) f_EP(g) dg."""
    def integrand(g):
        return dist.cdf_snr_rf(fit_r, g1, phi * g) * dist.pdf_snr_rf(fit_e, ge1, g)

    return integrate_positive(integrand, rtol=QUAD_RTOL)


def rf_race_beta(fit_r, fit_e, g1, ge1, phi):
    """The same race as a regularized incomplete beta, I_{x/(1+x)}(a+1, a_e+1)."""
    x = _rf_ratio(fit_r, fit_e, g1, ge1, phi)
    return float(betainc(fit_r.a + 1.0, fit_e.a + 1.0, x / (1.0 + x)))


def rf_race(fit_r, fit_e, g1, ge1, phi, method="auto"):
    """Pr{gamma_R <= phi gamma_EP}; returns ``(value, method, flags, details)``.

    ``auto`` sums the series and switches to the incomplete-beta form of the
    same sum when the series truncates or loses significance.
    """
    if method == QUADRATURE:
        return rf_race_quadrature(fit_r, fit_e, g1, ge1, phi), QUADRATURE, set(), {}
    val, flags, details = rf_race_closed(fit_r, fit_e, g1, ge1, phi)
    if flags and method == "auto":
        details = dict(details, fallback_from=sorted(flags), evaluator="incomplete-beta")
        return rf_race_beta(fit_r, fit_e, g1, ge1, phi), CLOSED_FORM, set(), details
    return val, CLOSED_FORM, flags, details


# --- FSO race -------------------------------------------------------------------

def fso_race_terms(link_h, link_g, link_h2, link_ge):
    """Terms (weight, spec, log_arg_base) of Pr{gamma_D <= phi gamma_EQ}.

    Each term is weight * G_spec(exp(log_arg_base) * phi * ge2 / g2); the
    spec is the r-expanded Mellin product of the main-pair CDF kernel with
    the eavesdropper-pair PDF kernel.
    """
    r = link_h.r
    BD = link_h.constants.B * link_g.constants.B
    BE = link_h2.constants.B * link_ge.constants.B
    out = []
    for wD, cdf_spec in dist.pair_cdf_terms(link_h, link_g):
        for wE, pdf_spec in dist.pair_pdf_terms(link_h2, link_ge):
            pref, spec, argf = mellin_product(cdf_spec, pdf_spec).root_expansion(r)
            out.append((wD * wE * pref, spec, math.log(argf) + r * math.log(BD / BE)))
    return out


def fso_race_closed(ch, g2, ge2, phi):
    """Pr{gamma_D <= phi gamma_EQ} in closed form (sum of Meijer G terms)."""
    ratio = phi * ge2 / g2
    total = math.fsum(
        w * meijer_g(spec, math.exp(lab) * ratio)
        for w, spec, lab in fso_race_terms(ch.link_h, ch.link_g, ch.link_h, ch.link_ge)
    )
    return total


def fso_race_quadrature(ch, g2, ge2, phi):
    """Pr{gamma_D <= phi gamma_EQ} as int F_D(phi g) f_EQ(g) dg."""
    def integrand(g):
        return (
            dist.cdf_snr_fso_pair(ch.link_h, ch.link_g, g2, phi * g)
            * dist.pdf_snr_fso_pair(ch.link_h, ch.link_ge, ge2, g)
        )

    return integrate_positive(integrand, rtol=QUAD_RTOL)


def fso_race(ch, g2, ge2, phi, method="auto"):
    if method == QUADRATURE:
        return fso_race_quadrature(ch, g2, ge2, phi), QUADRATURE
    return fso_race_closed(ch, g2, ge2, phi), CLOSED_FORM


# --- Scenario I SOP pieces --------------------------------------------------------

def _fd_gamma_average_terms(ch, g2, ge1, phi, b_e):
    # F_D(phi gamma_EP) averaged over the eavesdropper amplitude; yields
    # (weight, spec_builder(nu)) pieces sharing one argument
    r = ch.r
    Bz = ch.link_h.constants.B * ch.link_g.constants.B
    out = []
    for w, cdf_spec in dist.pair_cdf_terms(ch.link_h, ch.link_g):
        pref, spec_r, argf = cdf_spec.root_expansion(r)
        sigma = argf * Bz**r * phi * ge1 / g2
        out.append((w * pref, spec_r, sigma * b_e**2))
    return out


def _fd_average(pieces, nu):
    # E_{u ~ Gamma(nu, 1)}[F_D(...)] for the stored pieces
    total = []
    for w, spec_r, sig in pieces:
        pa, spec_a, argf = spec_r.gamma_average(2, nu)
        total.append(w * pa * meijer_g(spec_a, argf * sig))
    return math.fsum(total)


def sop1_closed(cfg, ch):
    """R1 + R2 - R3 decomposition of SOP^I; returns (value, flags, details)."""
    fit_r, fit_e = ch.main_fit(cfg.n_elements), ch.eve_fit(cfg.n_elements)
    phi = cfg.phi
    R1, flags, det = rf_race_closed(fit_r, fit_e, cfg.gamma1, cfg.gamma_e1, phi)
    s1, s2 = fit_r.a + 1.0, fit_e.a + 1.0
    pieces = _fd_gamma_average_terms(ch, cfg.gamma2, cfg.gamma_e1, phi, fit_e.b)
    R2 = _fd_average(pieces, s2)
    x = det["x"]
    if x >= 1.0:
        # the R3 power series has radius 1 in x
        flags.add(FLAG_TRUNCATED)
        return math.nan, flags, {"R1": R1, "R2": R2, "x": x}
    base = -math.lgamma(s1) - math.lgamma(s2)
    terms, peak = [], 0.0
    R3 = 0.0
    for n in range(SERIES_CAP):
        nu = s1 + s2 + n
        mag = math.exp(
            (s1 + n) * math.log(x) + math.lgamma(nu) - math.lgamma(n + 1.0) - math.log(s1 + n) + base
        )
        try:
            t = (-1) ** n * mag * _fd_average(pieces, nu)
        except (ConvergenceError, OverflowError):
            t = math.nan
        if not math.isfinite(t):
            # the averaged kernel leaves double range long before the series is useful
            flags.add(FLAG_TRUNCATED)
            break
        terms.append(t)
        peak = max(peak, abs(t))
        R3 = math.fsum(terms)
        if abs(t) < SERIES_RTOL * abs(R3) or mag < SERIES_RTOL * abs(R3):
            break
    else:
        flags.add(FLAG_TRUNCATED)
    if FLAG_TRUNCATED in flags:
        return math.nan, flags, {"R1": R1, "R2": R2, "x": x, "R3_terms": len(terms)}
    cond = peak / max(abs(R3), 1e-300)
    if cond > MAX_SERIES_CONDITION:
        flags.add(FLAG_ILL_CONDITIONED)
    return R1 + R2 - R3, flags, {"R1": R1, "R2": R2, "R3": R3, "x": x, "R3_terms": len(terms)}


def sop1_quadrature(cfg, ch):
    fit_r, fit_e = ch.main_fit(cfg.n_elements), ch.eve_fit(cfg.n_elements)
    phi = cfg.phi

    def integrand(g):
        Feq = dist.cdf_dualhop(fit_r, cfg.gamma1, ch.link_h, ch.link_g, cfg.gamma2, phi * g)
        return Feq * dist.pdf_snr_rf(fit_e, cfg.gamma_e1, g)

    return integrate_positive(integrand, rtol=QUAD_RTOL)


# --- public metrics ---------------------------------------------------------------------

def _require(cfg, scenario):
    if cfg.scenario != scenario:
        raise IncompatibleMetricError(f"this metric needs scenario {scenario}, got {cfg.scenario}")


def sop_scenario1(cfg, ch, method="auto"):
    """SOP^I = Pr{min(gamma_R, gamma_D) <= phi gamma_EP}."""
    _require(cfg, "I")
    if method == QUADRATURE:
        return _finish(sop1_quadrature(cfg, ch), QUADRATURE, ())
    val, flags, details = sop1_closed(cfg, ch)
    if flags and method == "auto":
        details = dict(details, fallback_from=sorted(flags))
        return _finish(sop1_quadrature(cfg, ch), QUADRATURE, (), details)
    return _finish(val, CLOSED_FORM, flags, details)


def sop_scenario2(cfg, ch, method="auto"):
    """SOP^II lower bound F_R(phi - 1) + (1 - F_R(phi - 1)) Pr{gamma_D <= phi gamma_EQ}."""
    _require(cfg, "II")
    phi = cfg.phi
    FR = dist.cdf_snr_rf(ch.main_fit(cfg.n_elements), cfg.gamma1, phi - 1.0)
    race, used = fso_race(ch, cfg.gamma2, cfg.gamma_e2, phi, method)
    raw = FR + (1.0 - FR) * race
    return _finish(raw, used, (), {"F_R": FR, "fso_race": race})


def sop_scenario3(cfg, ch, method="auto"):
    """SOP^III = 1 - Pr{gamma_R > phi gamma_EP} Pr{gamma_D > phi gamma_EQ}."""
    _require(cfg, "III")
    phi = cfg.phi
    fit_r, fit_e = ch.main_fit(cfg.n_elements), ch.eve_fit(cfg.n_elements)
    rf, rf_method, flags, details = rf_race(fit_r, fit_e, cfg.gamma1, cfg.gamma_e1, phi, method)
    fso, fso_method = fso_race(ch, cfg.gamma2, cfg.gamma_e2, phi, method)
    rf_c, _ = clamp_probability(rf)
    fso_c, _ = clamp_probability(fso)
    raw = 1.0 - (1.0 - rf_c) * (1.0 - fso_c)
    used = QUADRATURE if QUADRATURE in (rf_method, fso_method) else CLOSED_FORM
    details = dict(details, rf_race=rf, fso_race=fso)
    return _finish(raw, used, flags, details)


_SOP = {"I": sop_scenario1, "II": sop_scenario2, "III": sop_scenario3}


def sop(cfg, ch, method="auto"):
    return _SOP[cfg.scenario](cfg, ch, method)


def spsc(scenario, cfg, ch, method="auto"):
    """1 - SOP at Rs = 0."""
    cfg0 = cfg.replace(scenario=scenario, rs=0.0)
    s = sop(cfg0, ch, method)
    return MetricValue(1.0 - s.value, s.method, None, s.flags, {"sop_rs0": s.value})


def est(scenario, cfg, ch, method="auto"):
    """Rs (1 - SOP)."""
    cfg1 = cfg.replace(scenario=scenario)
    s = sop(cfg1, ch, method)
    return MetricValue(cfg.rs * (1.0 - s.value), s.method, None, s.flags, {"sop": s.value})


def ip_scenario1(cfg, ch, method="auto"):
    """Pr{gamma_R <= gamma_EP}."""
    _require(cfg, "I")
    fit_r, fit_e = ch.main_fit(cfg.n_elements), ch.eve_fit(cfg.n_elements)
    val, used, flags, details = rf_race(fit_r, fit_e, cfg.gamma1, cfg.gamma_e1, 1.0, method)
    return _finish(val, used, flags, details)


def ip_scenario2(cfg, ch, method="auto"):
    """Pr{gamma_D <= gamma_EQ}."""
    _require(cfg, "II")
    val, used = fso_race(ch, cfg.gamma2, cfg.gamma_e2, 1.0, method)
    return _finish(val, used, ())


def ip_scenario3(cfg, ch, method="auto"):
    """1 - SPSC^III."""
    _require(cfg, "III")
    s = spsc("III", cfg, ch, method)
    return MetricValue(1.0 - s.value, s.method, None, s.flags, {"spsc": s.value})


_IP = {"I": ip_scenario1, "II": ip_scenario2, "III": ip_scenario3}


def ip(cfg, ch, method="auto"):
    return _IP[cfg.scenario](cfg, ch, method)


# --- ASC -----------------------------------------------------------------------------

def asc_quadrature(cfg, ch, rtol=ASC_RTOL):
    """int F_EP(g) (1 - F_eq(g)) / (1 + g) dg in nats."""
    fit_r, fit_e = ch.main_fit(cfg.n_elements), ch.eve_fit(cfg.n_elements)

    def integrand(g):
        FE = dist.cdf_snr_rf(fit_e, cfg.gamma_e1, g)
        surv = (1.0 - dist.cdf_snr_rf(fit_r, cfg.gamma1, g)) * (
            1.0 - dist.cdf_snr_fso_pair(ch.link_h, ch.link_g, cfg.gamma2, g)
        )
        return FE * surv / (1.0 + g)

    return integrate_positive(integrand, rtol=rtol, atol=1e-12)


def asc_closed_form_experimental(cfg, ch):
    """Term-wise closed form of the ASC integral, as published.

    The U1/U2 integrals only exist by analytic continuation and the U3/U4
    Meijer forms have overlapping pole sets, so terms that cannot be
    evaluated are skipped and counted. Not a validated result.
    """
    fit_r, fit_e = ch.main_fit(cfg.n_elements), ch.eve_fit(cfg.n_elements)
    a, b, ae, be = fit_r.a, fit_r.b, fit_e.a, fit_e.b
    r = ch.r
    Beq = (ch.link_h.constants.B * ch.link_g.constants.B) ** r / r ** (4 * r)
    kh, kg = ch.link_h.constants, ch.link_g.constants
    xh2, xg2 = ch.link_h.xi**2, ch.link_g.xi**2
    flags, skipped = set(), {"U1": 0, "U2": 0, "U3": 0, "U4": 0}
    terms = []

    def l_lists(mh, mg):
        # l_{h1}, l_{g1} (top) and l_{h2}, l_{g2} (bottom) of the r-expanded CDF
        lh1 = [(xh2 + 1 + j) / r for j in range(r)]
        lg1 = [(xg2 + 1 + j) / r for j in range(r)]
        lh2 = [(v + j) / r for v in (xh2, ch.link_h.alpha, mh) for j in range(r)]
        lg2 = [(v + j) / r for v in (xg2, ch.link_g.alpha, mg) for j in range(r)]
        return lh1, lg1, lh2, lg2

    def u_meijer(alpha_k, exponent, mh, mg):
        lh1, lg1, lh2, lg2 = l_lists(mh, mg)
        top = [0.0] + [-alpha_k - v for v in lh2 + lg2] + [-alpha_k]
        bottom = [0.0, -alpha_k - 1.0] + [-alpha_k - v for v in lg1 + lh1]
        spec = MeijerGSpec(2, 6 * r + 1, top, bottom)
        return (Beq / cfg.gamma2) ** (-exponent) * meijer_g(spec, cfg.gamma2 / Beq)

    for n in range(SERIES_CAP):
        X1 = (-1) ** n * (1.0 / (be * math.sqrt(cfg.gamma_e1))) ** (ae + n + 1) / (
            math.factorial(n) * (ae + n + 1) * math.gamma(ae + 1)
        )
        X2 = (-1) ** n * (1.0 / (b * math.sqrt(cfg.gamma1))) ** (a + n + 1) / (
            math.factorial(n) * (a + n + 1) * math.gamma(a + 1)
        )
        alpha1 = 0.5 * (ae + n + 3)
        alpha2 = 0.5 * (a + ae + 2 * n + 2)
        inner = []
        for name, fn in (
            ("U1", lambda: beta_reflection(alpha1)),
            ("U2", lambda: -X2 * beta_reflection(0.5 * (a + ae + 2 * n + 4))),
        ):
            try:
                inner.append(fn())
            except PoleError:
                skipped[name] += 1
                flags.add(FLAG_POLE_PERTURBED)
        for mh in range(1, ch.link_h.beta + 1):
            for mg in range(1, ch.link_g.beta + 1):
                X3 = kh.b_m[mh - 1] * kg.b_m[mg - 1] * r ** (ch.link_h.alpha + ch.link_g.alpha + mh + mg - 2) / (
                    2 * math.pi
                ) ** (2 * (r - 1))
                for name, sign, alpha_k, expo in (("U3", -1.0, alpha1, alpha1), ("U4", X2, alpha2, alpha2 + 1)):
                    try:
                        inner.append(sign * X3 * u_meijer(alpha_k, expo, mh, mg))
                    except (NonSeparablePolesError, ConvergenceError, ValueError):
                        skipped[name] += 1
                        flags.add(FLAG_ILL_CONDITIONED)
        t = X1 * math.fsum(inner)
        terms.append(t)
        total = math.fsum(terms)
        if abs(t) <= SERIES_RTOL * abs(total):
            break
    else:
        flags.add(FLAG_TRUNCATED)
    return MetricValue(math.fsum(terms), CLOSED_FORM, None, frozenset(flags),
                       {"skipped_terms": skipped, "n_terms": len(terms)})


def asc_scenario1(cfg, ch, *, experimental=False):
    """Average secrecy capacity of Scenario I in nats (quadrature is normative)."""
    _require(cfg, "I")
    value = asc_quadrature(cfg, ch)
    details = {}
    if experimental:
        details["closed_form_experimental"] = asc_closed_form_experimental(cfg, ch)
    return MetricValue(max(value, 0.0), QUADRATURE, None, frozenset(), details)


def evaluate(metric, cfg, ch, method="auto"):
    """Dispatch a metric name for the config's scenario."""
    metric = metric.lower()
    if metric == "asc":
        if cfg.scenario != "I":
            raise IncompatibleMetricError("ASC is only defined for scenario I")
        return asc_scenario1(cfg, ch)
    if metric == "sop":
        return sop(cfg, ch, method)
    if metric == "spsc":
        return spsc(cfg.scenario, cfg, ch, method)
    if metric == "est":
        return est(cfg.scenario, cfg, ch, method)
    if metric == "ip":
        return ip(cfg, ch, method)
    raise IncompatibleMetricError(f"unknown metric {metric!r}; expected one of {METRICS}")
