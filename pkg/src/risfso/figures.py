"""Built-in parameter presets for the standard curve families.

Each figure is a list of curves; a curve is a label plus a config document
fragment merged over the defaults. Values the curve descriptions leave open use
documented choices (see README).
"""
import numpy as np

from risfso.config import RunConfig
from risfso.errors import ConfigError

STRONG = {"alpha": 2.296, "beta": 2}
MODERATE = {"alpha": 4.2, "beta": 3}
WEAK = {"alpha": 8.0, "beta": 4}
TURBULENCE = {"strong": STRONG, "moderate": MODERATE, "weak": WEAK}

GAMMA1_GRID = [float(v) for v in np.arange(0.0, 20.1, 2.5)]
GAMMA2_GRID = [float(v) for v in np.arange(0.0, 40.1, 5.0)]
RS_GRID = [float(v) for v in np.round(np.arange(0.0, 4.01, 0.25), 10)]


def _sweep(variable, values):
    return {"variable": variable, "values": list(values)}


def _fig2():
    base = {
        "scenario": {"name": "I", "metric": "est", "n_elements": 2},
        "rf": {"K1": 2, "K2": 2, "omega1": 3, "omega2": 3},
        "fso": dict(STRONG, xi=6.7, r=1, gamma2_db=10),
        "eavesdropper": {"K3": 2, "omega3": 3, "gamma_e1_db": -5},
        "sweep": _sweep("rs", RS_GRID),
    }
    return [(f"gamma1={g:g}dB", base, {"rf": {"gamma1_db": g}}) for g in (-10, 0, 10)]


def _fig3():
    base = {
        "scenario": {"name": "III", "metric": "est", "n_elements": 5},
        "rf": {"K1": 2, "K2": 2, "omega1": 2, "omega2": 2},
        "fso": dict(STRONG, xi=1.1, r=1, gamma2_db=10),
        "eavesdropper": {"K3": 2, "omega3": 2, "gamma_e1_db": -5, "gamma_e2_db": -5},
        "sweep": _sweep("rs", RS_GRID),
    }
    return [(f"gamma1={g:g}dB", base, {"rf": {"gamma1_db": g}}) for g in (-10, 0, 10)]


def _fig4():
    base = {
        "scenario": {"name": "I", "metric": "ip", "rs": 0.1, "n_elements": 2},
        "rf": {"K1": 2, "K2": 2},
        "eavesdropper": {"K3": 2},
        "sweep": _sweep("gamma1_db", GAMMA1_GRID),
    }
    curves = []
    for om12, om3 in ((2, 2), (4, 2), (2, 4)):
        for ge1 in (0, 5):
            curves.append((
                f"omega12={om12},omega3={om3},gammaE1={ge1}dB",
                base,
                {"rf": {"omega1": om12, "omega2": om12}, "eavesdropper": {"omega3": om3, "gamma_e1_db": ge1}},
            ))
    return curves


def _fig5():
    base = {
        "scenario": {"name": "III", "metric": "ip", "rs": 0.0, "n_elements": 4},
        "rf": {"omega1": 3, "omega2": 3},
        "fso": dict(STRONG, xi=6.7, r=1, gamma2_db=25),
        "eavesdropper": dict(STRONG, xi=6.7, K3=2, omega3=3, gamma_e2_db=0),
        "sweep": _sweep("gamma1_db", GAMMA1_GRID),
    }
    curves = []
    for k in (1, 3):
        for ge1 in (0, 5):
            curves.append((
                f"K12={k},gammaE1={ge1}dB", base,
                {"rf": {"K1": k, "K2": k}, "eavesdropper": {"gamma_e1_db": ge1}},
            ))
    return curves


def _fig6():
    base = {
        "scenario": {"name": "I", "metric": "sop", "rs": 0.1, "n_elements": 2},
        "rf": {"K1": 2, "K2": 2, "omega1": 3, "omega2": 3},
        "fso": dict(STRONG, xi=6.7, omega_prime=1.0, gamma2_db=25),
        "eavesdropper": {"omega3": 3, "gamma_e1_db": 10},
        "sweep": _sweep("gamma1_db", GAMMA1_GRID),
    }
    return [
        (f"K3={k3},r={r}", base, {"fso": {"r": r}, "eavesdropper": {"K3": k3}})
        for k3 in (1, 4) for r in (1, 2)
    ]


def _fso_eve_family(metric):
    base = {
        "scenario": {"name": "II", "metric": metric, "rs": 0.5, "n_elements": 4},
        "rf": {"K1": 2, "K2": 2, "omega1": 3, "omega2": 3, "gamma1_db": 10},
        "fso": {"xi": 1.1, "r": 1},
        "eavesdropper": {"alpha": 1.0, "beta": 1, "xi": 1.1},
        "sweep": _sweep("gamma2_db", GAMMA2_GRID),
    }
    return [
        (f"{name},gammaE2={ge2}dB", base, {"fso": dict(TURBULENCE[name]), "eavesdropper": {"gamma_e2_db": ge2}})
        for name in ("strong", "weak") for ge2 in (0, 5)
    ]


def _fig9():
    base = {
        "scenario": {"name": "I", "metric": "asc", "rs": 0.1, "n_elements": 2},
        "rf": {"K1": 1, "K2": 1, "omega1": 2, "omega2": 2},
        "fso": {"r": 1, "gamma2_db": 25},
        "eavesdropper": {"K3": 1, "omega3": 2, "gamma_e1_db": -5},
        "sweep": _sweep("gamma1_db", GAMMA1_GRID),
    }
    return [
        (f"{name},xi={xi}", base, {"fso": dict(TURBULENCE[name], xi=xi)})
        for name in ("strong", "weak") for xi in (1.1, 6.7)
    ]


def _fig10():
    base = {
        "scenario": {"name": "II", "metric": "ip", "rs": 0.5, "n_elements": 4},
        "rf": {"K1": 2, "K2": 2, "omega1": 2, "omega2": 2, "gamma1_db": 10},
        "fso": {"r": 1},
        "eavesdropper": {"alpha": 1.0, "beta": 1, "xi": 1.1, "gamma_e2_db": 0},
        "sweep": _sweep("gamma2_db", GAMMA2_GRID),
    }
    return [
        (f"{name},xi={xi}", base, {"fso": dict(TURBULENCE[name], xi=xi)})
        for name in ("strong", "weak") for xi in (1.1, 6.7)
    ]


def _fig10_sop():
    base = {
        "scenario": {"name": "III", "metric": "sop", "rs": 0.1},
        "rf": {"K1": 1, "K2": 1, "omega1": 2, "omega2": 2},
        "fso": dict(STRONG, r=1, gamma2_db=20),
        "eavesdropper": dict(STRONG, xi=6.7, K3=1, omega3=2, gamma_e1_db=-5, gamma_e2_db=-5),
        "sweep": _sweep("gamma1_db", GAMMA1_GRID),
    }
    return [
        (f"N1={n},xi={xi}", base, {"scenario": {"n_elements": n}, "fso": {"xi": xi}})
        for n in (1, 4) for xi in (1.1, 6.7)
    ]


def _fig11():
    base = {
        "scenario": {"metric": "spsc", "n_elements": 3},
        "rf": {"K1": 2, "K2": 2, "omega1": 2, "omega2": 2, "gamma1_db": 2},
        "fso": dict(STRONG, xi=1.1, r=1),
        "eavesdropper": {"alpha": 1.0, "beta": 1, "xi": 1.1, "K3": 2, "omega3": 2,
                         "gamma_e1_db": -1, "gamma_e2_db": -1},
        "sweep": _sweep("gamma2_db", GAMMA2_GRID),
    }
    return [(f"scenario={s}", base, {"scenario": {"name": s}}) for s in ("I", "II", "III")]


FIGURES = {
    "fig2": ("EST, scenario I, versus Rs", _fig2),
    "fig3": ("EST, scenario III, versus Rs", _fig3),
    "fig4": ("IP, scenario I, versus gamma1", _fig4),
    "fig5": ("IP, scenario III, versus gamma1", _fig5),
    "fig6": ("SOP, scenario I, versus gamma1 (K3 and r)", _fig6),
    "fig7": ("EST, scenario II, versus gamma2", lambda: _fso_eve_family("est")),
    "fig8": ("SOP, scenario II, versus gamma2", lambda: _fso_eve_family("sop")),
    "fig9": ("ASC, scenario I, versus gamma1", _fig9),
    "fig10": ("IP, scenario II, versus gamma2", _fig10),
    "fig10-sop": ("SOP, scenario III, versus gamma1 (N1 and xi)", _fig10_sop),
    "fig11": ("SPSC of all scenarios versus gamma2", _fig11),
}

ALIASES = {
    "fig12": "fig11",
    "fig11-sop": "fig10-sop",
    "est1": "fig2", "est3": "fig3", "ip1": "fig4", "ip3": "fig5", "sop1": "fig6",
    "est2": "fig7", "sop2": "fig8", "asc1": "fig9", "ip2": "fig10", "sop3": "fig10-sop",
    "spsc": "fig11",
}


def _deep_merge(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = _deep_merge(out[k], v) if isinstance(v, dict) and isinstance(out.get(k), dict) else v
    return out


def resolve(figure_id):
    fid = figure_id.lower()
    fid = ALIASES.get(fid, fid)
    if fid not in FIGURES:
        known = ", ".join(sorted(FIGURES) + sorted(ALIASES))
        raise ConfigError(f"unknown figure id {figure_id!r}; known ids: {known}")
    return fid


def figure_curves(figure_id, overrides=None):
    """List of (label, RunConfig) for a figure, with overrides applied to every curve."""
    fid = resolve(figure_id)
    curves = []
    for label, base, delta in FIGURES[fid][1]():
        cfg = RunConfig.from_dict(_deep_merge(base, delta), f"figure {fid} [{label}]")
        if overrides:
            cfg = cfg.with_overrides(overrides)
        curves.append((label, cfg))
    return curves
