"""Run configuration: TOML documents, validation and conversion to channel objects.

Sections: [scenario], [rf], [fso], [eavesdropper], [mc], [sweep]. SNRs are
given in dB. FSO sub-links h and g take the [fso] values unless
[fso.h] / [fso.g] override them; the eavesdropper sub-link g_e takes
[eavesdropper] turbulence keys and falls back to [fso].
"""
import copy
import json
import math
import sys

import numpy as np

from risfso.channels import (
    DEFAULT_B0,
    DEFAULT_OMEGA,
    DEFAULT_PHI_A,
    DEFAULT_PHI_B,
    DEFAULT_RHO,
    SCENARIOS,
    Channels,
    MalagaPointingLink,
    RicianHopParams,
    ScenarioConfig,
    db_to_linear,
)
from risfso.errors import ConfigError, IncompatibleMetricError, RisFsoError
from risfso.metrics import METRICS

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

SWEEP_KEYS = ("gamma1_db", "gamma2_db", "gamma_e1_db", "gamma_e2_db", "rs")

FSO_LINK_KEYS = {
    "alpha": 2.296, "beta": 2, "xi": 6.7, "omega": DEFAULT_OMEGA, "omega_prime": None,
    "b0": DEFAULT_B0, "rho": DEFAULT_RHO, "phi_a": DEFAULT_PHI_A, "phi_b": DEFAULT_PHI_B,
}

DEFAULTS = {
    "scenario": {"name": "I", "metric": "sop", "rs": 0.1, "n_elements": 2, "hop_split": 0.5},
    "rf": {"K1": 2.0, "omega1": 3.0, "K2": 2.0, "omega2": 3.0, "gamma1_db": 10.0},
    "fso": dict(FSO_LINK_KEYS, r=1, gamma2_db=25.0, h={}, g={}),
    "eavesdropper": {
        "K3": 2.0, "omega3": 3.0, "gamma_e1_db": 10.0, "gamma_e2_db": 10.0,
        "alpha": None, "beta": None, "xi": None,
    },
    "mc": {"trials": 100000, "seed": 1, "workers": None},
    "sweep": {"variable": "gamma1_db", "values": None, "start": None, "stop": None, "num": None},
}


def _merge(base, doc, path=""):
    out = copy.deepcopy(base)
    for key, val in doc.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown key [{where}]")
        if isinstance(base[key], dict):
            if not isinstance(val, dict):
                raise ConfigError(f"[{where}] must be a table")
            out[key] = _merge(base[key], val, where) if base[key] else _merge_link(val, where)
        else:
            out[key] = val
    return out


def _merge_link(doc, where):
    for key in doc:
        if key not in FSO_LINK_KEYS:
            raise ConfigError(f"unknown key [{where}.{key}]")
    return dict(doc)


def parse_toml(text, source="<config>"):
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return RunConfig.from_dict(doc, source)


def load_config(path):
    """Load a TOML config or the config snapshot of a JSON run manifest."""
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if str(path).endswith(".json"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from None
        return RunConfig.from_dict(doc.get("config", doc), str(path))
    return parse_toml(text, str(path))


def _num(doc, section, key, *, positive=False, nonneg=False, integer=False, allow_none=False):
    val = doc[section][key]
    where = f"[{section}].{key}"
    if val is None and allow_none:
        return None
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{where} must be a number, got {val!r}")
    if not math.isfinite(val):
        raise ConfigError(f"{where} must be finite")
    if integer and int(val) != val:
        raise ConfigError(f"{where} must be an integer, got {val}")
    if positive and not val > 0:
        raise ConfigError(f"{where} must be > 0, got {val}")
    if nonneg and not val >= 0:
        raise ConfigError(f"{where} must be >= 0, got {val}")
    return int(val) if integer else float(val)


class RunConfig:
    """A validated configuration document."""

    def __init__(self, doc, source="<config>"):
        self.doc = doc
        self.source = source
        self._validate()

    @classmethod
    def from_dict(cls, doc, source="<config>"):
        return cls(_merge(DEFAULTS, doc), source)

    def to_dict(self):
        return copy.deepcopy(self.doc)

    def with_overrides(self, overrides):
        """Apply ``section.key=value`` style overrides (values already parsed)."""
        doc = self.to_dict()
        for dotted, val in overrides.items():
            parts = dotted.split(".")
            node = doc
            for p in parts[:-1]:
                if p not in node or not isinstance(node[p], dict):
                    raise ConfigError(f"unknown override key {dotted!r}")
                node = node[p]
            if parts[-1] not in node and not (len(parts) == 3 and parts[-1] in FSO_LINK_KEYS):
                raise ConfigError(f"unknown override key {dotted!r}")
            node[parts[-1]] = val
        return RunConfig(_merge(DEFAULTS, doc), self.source)

    # --- validation --------------------------------------------------------------

    def _validate(self):
        d = self.doc
        sc = d["scenario"]
        if sc["name"] not in SCENARIOS:
            raise ConfigError(f"[scenario].name must be one of {SCENARIOS}, got {sc['name']!r}")
        if str(sc["metric"]).lower() not in METRICS:
            raise ConfigError(f"[scenario].metric must be one of {METRICS}, got {sc['metric']!r}")
        sc["metric"] = str(sc["metric"]).lower()
        if sc["metric"] == "asc" and sc["name"] != "I":
            raise IncompatibleMetricError(
                f"[scenario].metric: ASC is only defined for scenario I, got scenario {sc['name']}"
            )
        _num(d, "scenario", "rs", nonneg=True)
        _num(d, "scenario", "n_elements", positive=True, integer=True)
        _num(d, "scenario", "hop_split", nonneg=True)
        for k in ("K1", "K2"):
            _num(d, "rf", k, nonneg=True)
        for k in ("omega1", "omega2"):
            _num(d, "rf", k, positive=True)
        _num(d, "rf", "gamma1_db")
        _num(d, "fso", "gamma2_db")
        if d["fso"]["r"] not in (1, 2):
            raise ConfigError(f"[fso].r must be 1 or 2, got {d['fso']['r']!r}")
        _num(d, "eavesdropper", "K3", nonneg=True)
        _num(d, "eavesdropper", "omega3", positive=True)
        _num(d, "eavesdropper", "gamma_e1_db")
        _num(d, "eavesdropper", "gamma_e2_db")
        _num(d, "mc", "trials", positive=True, integer=True)
        _num(d, "mc", "seed", nonneg=True, integer=True)
        _num(d, "mc", "workers", positive=True, integer=True, allow_none=True)
        sw = d["sweep"]
        if sw["variable"] not in SWEEP_KEYS:
            raise ConfigError(f"[sweep].variable must be one of {SWEEP_KEYS}, got {sw['variable']!r}")
        self.grid()
        try:
            self.channels()
            self.scenario_config()
        except ConfigError:
            raise
        except RisFsoError as exc:
            raise ConfigError(f"{self.source}: {exc}") from None

    # --- derived objects -----------------------------------------------------------

    @property
    def scenario(self):
        return self.doc["scenario"]["name"]

    @property
    def metric(self):
        return self.doc["scenario"]["metric"]

    @property
    def trials(self):
        return int(self.doc["mc"]["trials"])

    @property
    def seed(self):
        return int(self.doc["mc"]["seed"])

    @property
    def workers(self):
        w = self.doc["mc"]["workers"]
        return None if w is None else int(w)

    @property
    def sweep_variable(self):
        return self.doc["sweep"]["variable"]

    def grid(self):
        sw = self.doc["sweep"]
        if sw["values"] is not None:
            vals = sw["values"]
            if not isinstance(vals, list) or not vals:
                raise ConfigError("[sweep].values must be a non-empty list of numbers")
            for v in vals:
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise ConfigError(f"[sweep].values contains a non-number: {v!r}")
            return [float(v) for v in vals]
        if sw["start"] is None or sw["stop"] is None or sw["num"] is None:
            raise ConfigError("[sweep] needs either values or start, stop and num")
        start = _num(self.doc, "sweep", "start")
        stop = _num(self.doc, "sweep", "stop")
        num = _num(self.doc, "sweep", "num", positive=True, integer=True)
        return [float(v) for v in np.linspace(start, stop, num)]

    def point(self, value):
        """Scenario quantities in dB (and Rs) at one sweep value."""
        d = self.doc
        p = {
            "gamma1_db": float(d["rf"]["gamma1_db"]),
            "gamma2_db": float(d["fso"]["gamma2_db"]),
            "gamma_e1_db": float(d["eavesdropper"]["gamma_e1_db"]),
            "gamma_e2_db": float(d["eavesdropper"]["gamma_e2_db"]),
            "rs": float(d["scenario"]["rs"]),
        }
        p[self.sweep_variable] = float(value)
        if p["rs"] < 0:
            raise ConfigError(f"[sweep] produced a negative rate {p['rs']}")
        return p

    def scenario_config(self, value=None):
        p = self.point(self.grid()[0] if value is None else value)
        sc = self.doc["scenario"]
        return ScenarioConfig(
            sc["name"],
            db_to_linear(p["gamma1_db"]),
            db_to_linear(p["gamma2_db"]),
            db_to_linear(p["gamma_e1_db"]),
            db_to_linear(p["gamma_e2_db"]),
            rs=p["rs"],
            n_elements=int(sc["n_elements"]),
            hop_split=float(sc["hop_split"]),
        )

    def _link(self, overrides, where):
        fso = self.doc["fso"]
        vals = {k: fso[k] for k in FSO_LINK_KEYS}
        vals.update({k: v for k, v in overrides.items() if v is not None})
        try:
            if vals["omega_prime"] is not None:
                return MalagaPointingLink.from_omega_prime(
                    vals["alpha"], vals["beta"], vals["xi"], vals["omega_prime"], b0=vals["b0"],
                    rho=vals["rho"], phi_a=vals["phi_a"], phi_b=vals["phi_b"], r=fso["r"],
                )
            return MalagaPointingLink(
                vals["alpha"], vals["beta"], vals["xi"], vals["omega"], vals["b0"], vals["rho"],
                vals["phi_a"], vals["phi_b"], fso["r"],
            )
        except RisFsoError as exc:
            raise ConfigError(f"{where}: {exc}") from None

    def channels(self):
        d = self.doc
        rf, ev = d["rf"], d["eavesdropper"]
        try:
            hop1 = RicianHopParams(rf["K1"], rf["omega1"])
            hop2 = RicianHopParams(rf["K2"], rf["omega2"])
            hop3 = RicianHopParams(ev["K3"], ev["omega3"])
        except RisFsoError as exc:
            raise ConfigError(f"[rf]/[eavesdropper]: {exc}") from None
        ge = {k: ev[k] for k in ("alpha", "beta", "xi")}
        return Channels(
            hop1, hop2, hop3,
            self._link(d["fso"]["h"], "[fso.h]"),
            self._link(d["fso"]["g"], "[fso.g]"),
            self._link(ge, "[eavesdropper]"),
        )


def parse_override(text):
    """Parse ``section.key=value`` with a TOML value (bare words become strings)."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} must look like section.key=value")
    key, raw = text.split("=", 1)
    key = key.strip()
    try:
        val = tomllib.loads(f"v = {raw.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        val = raw.strip()
    return key, val
