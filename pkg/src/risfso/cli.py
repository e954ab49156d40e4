"""Command-line sweep runner.

    risfso --config run.toml --output out.csv
    risfso --figure fig6 --trials 20000 --output fig6.csv
    risfso --config out.manifest.json --output again.csv
    risfso --selftest quick
"""
import argparse
import json
import sys

from risfso import figures, runner
from risfso.config import RunConfig, load_config, parse_override
from risfso.errors import ConfigError, RisFsoError
from risfso.metrics import METRICS

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def build_parser():
    p = argparse.ArgumentParser(prog="risfso", description="Secrecy metrics of RIS-aided RF-FSO links")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", metavar="PATH", help="TOML config or JSON run manifest")
    src.add_argument("--figure", metavar="ID", help="built-in figure preset (fig2 ... fig11, or an alias)")
    src.add_argument("--selftest", choices=("quick", "full"), help="run the built-in validation suite")
    p.add_argument("--metric", choices=METRICS, help="override [scenario].metric")
    p.add_argument("--scenario", choices=("I", "II", "III"), help="override [scenario].name")
    p.add_argument("--trials", type=int, help="Monte-Carlo trials per grid point")
    p.add_argument("--seed", type=int, help="Monte-Carlo master seed")
    p.add_argument("--workers", type=int, help="worker threads (default: RISFSO_WORKERS or CPU count)")
    p.add_argument("--output", metavar="PATH", help="CSV path; a manifest is written next to it")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--analytic-only", action="store_true", help="skip Monte-Carlo")
    mode.add_argument("--mc-only", action="store_true", help="skip closed-form evaluation")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="config override such as fso.gamma2_db=15 (repeatable)")
    return p


def _overrides(args):
    out = dict(parse_override(s) for s in args.set)
    if args.metric:
        out["scenario.metric"] = args.metric
    if args.scenario:
        out["scenario.name"] = args.scenario
    return out


def _replay(path):
    """Run spec stored in a manifest, or None for a plain config."""
    if not str(path).endswith(".json"):
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from None
    return doc.get("run")


def resolve_run(args):
    """Turn CLI arguments into a run spec (a JSON-serialisable dict)."""
    overrides = _overrides(args)
    spec = None
    if args.config:
        spec = _replay(args.config)
        if spec is not None:
            spec = dict(spec)
            spec["overrides"] = {**spec.get("overrides", {}), **overrides}
    if spec is None:
        if args.figure:
            spec = {"mode": "figure", "figure": figures.resolve(args.figure), "config": None}
        else:
            cfg = load_config(args.config)
            spec = {"mode": "config", "figure": None, "config": cfg.to_dict()}
        spec["overrides"] = overrides
    if args.trials is not None:
        spec["trials"] = args.trials
    if args.seed is not None:
        spec["seed"] = args.seed
    if args.analytic_only or args.mc_only:
        spec["analytic"] = not args.mc_only
        spec["monte_carlo"] = not args.analytic_only
    spec.setdefault("analytic", True)
    spec.setdefault("monte_carlo", True)
    return spec


def curves_for(spec):
    if spec["mode"] == "figure":
        return figures.figure_curves(spec["figure"], spec.get("overrides"))
    cfg = RunConfig.from_dict(spec["config"], "manifest")
    if spec.get("overrides"):
        cfg = cfg.with_overrides(spec["overrides"])
    return [("", cfg)]


def execute(spec, workers=None):
    """Run a spec; returns (csv_text, manifest_dict)."""
    curves = curves_for(spec)
    first = curves[0][1]
    spec.setdefault("trials", first.trials)
    spec.setdefault("seed", first.seed)
    if spec["mode"] == "config":
        spec["config"] = first.to_dict()
        spec["overrides"] = {}
    results = runner.run_sweep(
        curves, analytic=spec["analytic"], monte_carlo=spec["monte_carlo"],
        trials=spec["trials"], seed=spec["seed"], workers=workers or first.workers,
    )
    text = runner.to_csv(results, with_curve=spec["mode"] == "figure")
    return text, runner.manifest(spec, results)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.selftest:
            from risfso import validation

            return EXIT_OK if validation.selftest(args.selftest, stream=sys.stdout) else EXIT_FAIL
        if args.workers is not None and args.workers < 1:
            raise ConfigError("--workers must be positive")
        if args.trials is not None and args.trials < 1:
            raise ConfigError("--trials must be positive")
        spec = resolve_run(args)
        text, man = execute(spec, args.workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RisFsoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.output:
        mpath = runner.write_outputs(args.output, text, man)
        print(f"wrote {args.output} and {mpath}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
