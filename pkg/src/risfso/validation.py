"""Validation suite shared by the acceptance tests and ``risfso --selftest``.

Each ``criterion_*`` function returns a CheckResult whose ``lines`` list
every individual comparison, so a failure shows exactly which point and
by how much.
"""
import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.integrate import quad

from risfso import distributions as dist
from risfso import figures, metrics, runner
from risfso import montecarlo as mc
from risfso.channels import (
    TURBULENCE_PRESETS,
    MalagaPointingLink,
    RicianHopParams,
    fit_rf_cascade,
)
from risfso.quadrature import integrate_positive
from risfso.specfun import (
    MeijerGSpec,
    lower_incomplete_gamma_regularized,
    meijer_g,
)

XI_VALUES = (1.1, 6.7)
DETECTION_ORDERS = (1, 2)
GAMMA1_POINTS = (0.0, 5.0, 10.0, 15.0, 20.0)
GAMMA2_POINTS = (0.0, 10.0, 20.0, 30.0, 40.0)


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    lines: list = field(default_factory=list)

    def check(self, ok, message):
        self.lines.append(("ok   " if ok else "FAIL ") + message)
        self.passed &= bool(ok)
        return ok

    def report(self):
        return "\n".join([f"{'PASS' if self.passed else 'FAIL'} {self.name}"] + ["  " + s for s in self.lines])


def load_meijer_oracle():
    """Frozen multiprecision Mellin-Barnes reference values."""
    text = resources.files("risfso").joinpath("data/meijer_oracle.json").read_text()
    return json.loads(text)


def _links(alpha, beta, xi, r):
    return MalagaPointingLink(alpha, beta, xi, r=r)


# --- criterion 1 -------------------------------------------------------------------------

def criterion_1_special_functions():
    res = CheckResult("1 special-function identities and multiprecision oracle")
    exp_spec = MeijerGSpec(1, 0, [], [0.0])
    rat_spec = MeijerGSpec(1, 1, [0.0], [0.0])
    for x in (0.1, 1.0, 10.0):
        e1 = abs(meijer_g(exp_spec, x) - math.exp(-x))
        e2 = abs(meijer_g(rat_spec, x) - 1.0 / (1.0 + x))
        res.check(e1 <= 1e-10, f"G10_01({x}) vs exp(-x): {e1:.2e} <= 1e-10")
        res.check(e2 <= 1e-10, f"G11_11({x}) vs 1/(1+x): {e2:.2e} <= 1e-10")
    oracle = [c for c in load_meijer_oracle() if c["name"] != "cdf_pair_fig6"]
    res.check(len(oracle) >= 10, f"{len(oracle)} random oracle parameter sets (need 10)")
    fig6 = [c for c in load_meijer_oracle() if c["name"] == "cdf_pair_fig6"]
    for case in fig6 + oracle:
        spec = MeijerGSpec(case["m"], case["n"], case["a"], case["b"])
        ref = float(case["value"])
        rel = abs(meijer_g(spec, case["z"]) / ref - 1.0)
        res.check(rel <= 1e-6, f"{case['name']} {spec} at z={case['z']:.4g}: rel err {rel:.2e} <= 1e-6")
    return res


def quick_checks():
    """Identities plus incomplete-gamma checks; used by ``--selftest quick``."""
    res = criterion_1_special_functions()
    res.name = "quick: Meijer identities, oracle and incomplete gamma"
    for s, x in ((1.0, math.log(2.0)), (2.5, 3.7), (0.7, 12.0), (40.0, 35.0)):
        p = lower_incomplete_gamma_regularized(s, x)
        ref, _ = quad(lambda t: math.exp((s - 1) * math.log(t) - t - math.lgamma(s)), 0.0, x,
                      epsabs=1e-14, epsrel=1e-12, limit=200)
        res.check(abs(p - ref) <= 1e-10, f"P({s}, {x:.4g}) = {p:.12g} vs quadrature {ref:.12g}")
    res.check(abs(lower_incomplete_gamma_regularized(1.0, math.log(2.0)) - 0.5) <= 1e-14, "P(1, ln 2) = 1/2")
    grid = np.linspace(0.0, 60.0, 301)
    vals = lower_incomplete_gamma_regularized(3.3, grid)
    res.check(bool(np.all(np.diff(vals) >= 0)) and abs(vals[-1] - 1) < 1e-12, "P(3.3, x) monotone with limit 1")
    return res


# --- criterion 2 -------------------------------------------------------------------------

def _fd_check(res, name, cdf, pdf, points):
    for g in points:
        h = 1e-3 * g
        fd = (cdf(g + h) - cdf(g - h)) / (2 * h)
        f = pdf(g)
        rel = abs(fd / f - 1.0)
        res.check(rel <= 1e-4, f"{name}: CDF' vs PDF at {g:.4g}: rel {rel:.2e} <= 1e-4")


def _cdf_shape(res, name, cdf, gbar):
    grid = gbar * np.logspace(-4, 4, 41)
    vals = np.array([cdf(g) for g in grid])
    res.check(cdf(0.0) == 0.0, f"{name}: CDF(0) = 0")
    res.check(bool(np.all(np.diff(vals) >= -1e-12)), f"{name}: CDF nondecreasing on 41 log-spaced points")
    top = cdf(gbar * 1e12)
    res.check(abs(top - 1.0) <= 1e-4, f"{name}: CDF(1e12 gbar) = {top:.8f} -> 1")


def criterion_2_normalization(presets=None):
    res = CheckResult("2 distribution normalization and CDF consistency")
    hop = RicianHopParams(2.0, 3.0)
    for N in (2, 4):
        fit = fit_rf_cascade(hop, hop, N)
        gbar = 10.0
        total = integrate_positive(lambda g: dist.pdf_snr_rf(fit, gbar, g), rtol=1e-10)
        res.check(abs(total - 1) <= 1e-4, f"RF N={N}: integral of PDF {total:.10f}")
        cdf = lambda g, fit=fit: dist.cdf_snr_rf(fit, gbar, g)
        _cdf_shape(res, f"RF N={N}", cdf, gbar)
        _fd_check(res, f"RF N={N}", cdf, lambda g, fit=fit: dist.pdf_snr_rf(fit, gbar, g), (1.0, 10.0, 100.0))
    presets = presets or list(TURBULENCE_PRESETS.items())
    for tname, (al, be) in presets:
        for xi in XI_VALUES:
            for r in DETECTION_ORDERS:
                lk = _links(al, be, xi, r)
                tag = f"{tname} xi={xi} r={r}"
                gbar = 10.0
                tot = integrate_positive(lambda g: dist.pdf_snr_fso_link(lk, gbar, g), rtol=1e-8)
                res.check(abs(tot - 1) <= 1e-4, f"FSO link {tag}: integral {tot:.8f}")
                cdf = lambda g, lk=lk: dist.cdf_snr_fso_link(lk, gbar, g)
                _cdf_shape(res, f"FSO link {tag}", cdf, gbar)
                _fd_check(res, f"FSO link {tag}", cdf, lambda g, lk=lk: dist.pdf_snr_fso_link(lk, gbar, g),
                          (1.0, 10.0, 100.0))
                tot = integrate_positive(lambda g: dist.pdf_snr_fso_pair(lk, lk, gbar, g), rtol=1e-8)
                res.check(abs(tot - 1) <= 1e-4, f"FSO pair {tag}: integral {tot:.8f}")
                cdf = lambda g, lk=lk: dist.cdf_snr_fso_pair(lk, lk, gbar, g)
                _cdf_shape(res, f"FSO pair {tag}", cdf, gbar)
                _fd_check(res, f"FSO pair {tag}", cdf, lambda g, lk=lk: dist.pdf_snr_fso_pair(lk, lk, gbar, g),
                          (1.0, 10.0, 100.0))
    fit = fit_rf_cascade(hop, hop, 2)
    lk = _links(2.296, 2, 6.7, 1)
    cdf = lambda g: dist.cdf_dualhop(fit, 10.0, lk, lk, 300.0, g)
    _cdf_shape(res, "dual-hop", cdf, 10.0)
    return res


# --- criterion 3 -------------------------------------------------------------------------

def ks_distance(samples, cdf_on_grid, grid):
    """Sup distance between the empirical CDF and an analytic CDF tabulated on a log grid."""
    x = np.sort(np.asarray(samples))
    F = np.interp(np.log(x), np.log(grid), cdf_on_grid)
    n = x.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def _tabulated(cdf, samples, points=4001):
    lo, hi = np.min(samples), np.max(samples)
    grid = np.exp(np.linspace(math.log(lo) - 0.1, math.log(hi) + 0.1, points))
    return grid, np.asarray(cdf(grid))


def criterion_3_fso_sampler(trials=100_000, seed=3):
    res = CheckResult("3 FSO sampler fidelity (KS <= 0.01)")
    k = 0
    for tname, (al, be) in TURBULENCE_PRESETS.items():
        for xi in XI_VALUES:
            for r in DETECTION_ORDERS:
                lk = _links(al, be, xi, r)
                rng = mc.block_rng(seed, k)
                k += 1
                s = mc.sample_fso_link_snr(lk, 10.0, rng, trials)
                grid, F = _tabulated(lambda g: dist.cdf_snr_fso_link(lk, 10.0, g), s)
                d = ks_distance(s, F, grid)
                res.check(d <= 0.01, f"{tname} ({al},{be}) xi={xi} r={r}: KS {d:.4f}")
    return res


# --- criterion 4 -------------------------------------------------------------------------

def criterion_4_rf_fit(trials=1_000_000, seed=4):
    res = CheckResult("4 RF Gamma-fit quality")
    hop = RicianHopParams(2.0, 3.0)
    for j, N in enumerate((2, 4)):
        fit = fit_rf_cascade(hop, hop, N)
        rng = mc.block_rng(seed, j)
        amp = np.sqrt(mc.sample_rf_cascade_snr(hop, hop, N, 1.0, rng, trials))
        m, v = float(np.mean(amp)), float(np.var(amp, ddof=1))
        m_ref, v_ref = N * fit.mean_amp, fit.var_sum
        res.check(abs(m / m_ref - 1) <= 0.01, f"N={N}: mean {m:.5f} vs {m_ref:.5f}")
        res.check(abs(v / v_ref - 1) <= 0.01, f"N={N}: variance {v:.5f} vs {v_ref:.5f}")
        g = amp**2 * 10.0
        x = np.sort(g)
        F = np.asarray(dist.cdf_snr_rf(fit, 10.0, x))
        i = np.arange(1, x.size + 1)
        d = float(max(np.max(i / x.size - F), np.max(F - (i - 1) / x.size)))
        res.check(d <= 0.03, f"N={N}: empirical vs fitted CDF sup distance {d:.4f} <= 0.03")
    return res


# --- criterion 5 -------------------------------------------------------------------------

def _curve(fig, index=0):
    return figures.figure_curves(fig)[index][1]


def cross_validation_cases():
    """(scenario, RunConfig, sweep variable, points, metrics) per cross-validation family."""
    return [
        ("I", _curve("fig6"), "gamma1_db", GAMMA1_POINTS, ("sop", "spsc", "est", "ip")),
        ("I", _curve("fig9"), "gamma1_db", GAMMA1_POINTS, ("asc",)),
        ("II", _curve("fig8"), "gamma2_db", GAMMA2_POINTS, ("sop", "spsc", "est", "ip")),
        ("III", _curve("fig10-sop"), "gamma1_db", GAMMA1_POINTS, ("sop", "spsc", "est", "ip")),
    ]


def criterion_5_cross_validation(trials=100_000, seed=5):
    res = CheckResult("5 metric cross-validation against Monte-Carlo")
    for scen, rc, var, points, mets in cross_validation_cases():
        rc = rc.with_overrides({"sweep.variable": var, "sweep.values": list(points)})
        ch = rc.channels()
        for v in points:
            sc = rc.scenario_config(v)
            reqs = [(m, scen, "lower") for m in mets]
            est = mc.simulate(reqs, sc, ch, mc.TrialConfig(trials, seed))
            for m in mets:
                a = metrics.evaluate(m, sc, ch)
                e = est[(m, scen, "lower")]
                tol = max(3 * e.stderr, 0.02 * max(a.value, 0.01))
                diff = abs(a.value - e.mean)
                res.check(diff <= tol, f"{m.upper()}^{scen} {var}={v:g}: analytic {a.value:.5f} "
                                       f"MC {e.mean:.5f} +- {e.stderr:.5f} |d|={diff:.5f} tol {tol:.5f}")
    return res


# --- criterion 6 -------------------------------------------------------------------------

def criterion_6_identities():
    res = CheckResult("6 exact identities (bit level)")
    for scen, rc, var, points, _ in cross_validation_cases():
        if rc.metric == "asc":
            continue
        ch = rc.channels()
        for v in points:
            sc = rc.with_overrides({"sweep.variable": var, "sweep.values": [v]}).scenario_config(v)
            sop0 = metrics.sop(sc.replace(rs=0.0), ch)
            sp = metrics.spsc(scen, sc, ch)
            res.check(sp.value == 1.0 - sop0.value, f"{scen} {var}={v:g}: SPSC == 1 - SOP(Rs=0)")
            sop = metrics.sop(sc, ch)
            e = metrics.est(scen, sc, ch)
            res.check(e.value == sc.rs * (1.0 - sop.value), f"{scen} {var}={v:g}: EST == Rs (1 - SOP)")
            if scen == "III":
                ip = metrics.ip(sc, ch)
                res.check(ip.value == 1.0 - metrics.spsc("III", sc, ch).value,
                          f"III {var}={v:g}: IP == 1 - SPSC")
            fit = ch.main_fit(sc.n_elements)
            for g in (0.5, 5.0, 50.0):
                FR = dist.cdf_snr_rf(fit, sc.gamma1, g)
                FD = dist.cdf_snr_fso_pair(ch.link_h, ch.link_g, sc.gamma2, g)
                Feq = dist.cdf_dualhop(fit, sc.gamma1, ch.link_h, ch.link_g, sc.gamma2, g)
                res.check(Feq == FR + FD - FR * FD, f"{scen} {var}={v:g}: F_eq({g}) == F_R + F_D - F_R F_D")
    return res


# --- criterion 7 -------------------------------------------------------------------------

def _family(fig):
    out = {}
    for label, rc in figures.figure_curves(fig):
        ch = rc.channels()
        out[label] = [metrics.evaluate(rc.metric, rc.scenario_config(v), ch).value for v in rc.grid()]
    return out


def _pointwise(res, what, lo, hi, slack=0.0):
    bad = [i for i, (a, b) in enumerate(zip(lo, hi)) if not a <= b + slack]
    res.check(not bad, f"{what}" + (f" (violated at grid indices {bad})" if bad else ""))


def is_concave_unimodal(values):
    """Starts at zero, rises to one peak, falls after it, and bends downward up to the peak."""
    v = np.asarray(values)
    k = int(np.argmax(v))
    rising = np.all(np.diff(v[: k + 1]) >= 0)
    falling = np.all(np.diff(v[k:]) <= 0)
    concave = np.all(np.diff(v[: k + 1], 2) <= 1e-12)
    return bool(v[0] == 0 and rising and falling and concave), k


def criterion_7_trends():
    res = CheckResult("7 trend reproduction")
    f6 = _family("fig6")
    for k3 in (1, 4):
        _pointwise(res, f"SOP^I(r=1) <= SOP^I(r=2), K3={k3}", f6[f"K3={k3},r=1"], f6[f"K3={k3},r=2"])
    f9 = _family("fig9")
    for t in ("strong", "weak"):
        _pointwise(res, f"ASC^I: xi=6.7 >= xi=1.1 ({t})", f9[f"{t},xi=1.1"], f9[f"{t},xi=6.7"])
    f10 = _family("fig10")
    for t in ("strong", "weak"):
        _pointwise(res, f"IP^II: xi=6.7 <= xi=1.1 ({t})", f10[f"{t},xi=6.7"], f10[f"{t},xi=1.1"])
    s3 = _family("fig10-sop")
    for n in (1, 4):
        _pointwise(res, f"SOP^III: xi=6.7 <= xi=1.1 (N1={n})", s3[f"N1={n},xi=6.7"], s3[f"N1={n},xi=1.1"])
    for xi in (1.1, 6.7):
        _pointwise(res, f"SOP^III: N1=4 <= N1=1 (xi={xi})", s3[f"N1=4,xi={xi}"], s3[f"N1=1,xi={xi}"])
    f11 = _family("fig11")
    _pointwise(res, "SPSC^II >= SPSC^I", f11["scenario=I"], f11["scenario=II"])
    _pointwise(res, "SPSC^I >= SPSC^III", f11["scenario=III"], f11["scenario=I"])
    for fig in ("fig2", "fig3"):
        for label, vals in _family(fig).items():
            ok, k = is_concave_unimodal(vals)
            res.check(ok, f"EST {fig} {label}: EST(0)=0, concave-unimodal (peak at grid index {k})")
    return res


# --- criterion 8 -------------------------------------------------------------------------

def criterion_8_determinism(trials=20_000):
    from risfso import cli

    res = CheckResult("8 determinism across worker counts")
    specs = [
        {"mode": "figure", "figure": "fig8", "config": None, "overrides": {"sweep.values": [5.0, 25.0]},
         "trials": trials, "seed": 11, "analytic": True, "monte_carlo": True},
        {"mode": "figure", "figure": "fig6", "config": None, "overrides": {"sweep.values": [10.0]},
         "trials": trials, "seed": 12, "analytic": False, "monte_carlo": True},
    ]
    for spec in specs:
        texts = [cli.execute(dict(spec), workers=w)[0] for w in (1, 3, 1)]
        res.check(texts[0] == texts[1] == texts[2],
                  f"{spec['figure']}: byte-identical CSV for workers 1, 3 and a repeat")
    return res


CRITERIA = (
    criterion_1_special_functions,
    criterion_2_normalization,
    criterion_3_fso_sampler,
    criterion_4_rf_fit,
    criterion_5_cross_validation,
    criterion_6_identities,
    criterion_7_trends,
    criterion_8_determinism,
)


def selftest(level="quick", stream=None):
    checks = [quick_checks] if level == "quick" else list(CRITERIA)
    ok = True
    for fn in checks:
        res = fn()
        ok &= res.passed
        if stream is not None:
            lines = res.report().splitlines()
            shown = lines if not res.passed else lines[:1]
            print("\n".join(l for l in shown if not res.passed or l.startswith("PASS")), file=stream, flush=True)
            if not res.passed:
                first = next(l for l in lines[1:] if l.strip().startswith("FAIL"))
                print(f"first failure: {first.strip()}", file=stream, flush=True)
    return ok
