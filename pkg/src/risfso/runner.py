"""Sweep execution: analytic and Monte-Carlo values per grid point, CSV and manifest output."""
import csv
import datetime
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor

from risfso import __version__, metrics
from risfso import montecarlo as mc

COLUMNS = (
    "scenario", "metric", "gamma1_db", "gamma2_db", "gammaE1_db", "gammaE2_db", "Rs",
    "value_analytic", "value_mc", "mc_stderr", "trials", "flags",
)
LN2 = math.log(2.0)


def fmt(x):
    if x is None or x == "":
        return ""
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return "%.12g" % x
    return str(x)


def evaluate_point(cfg, value, *, analytic=True, monte_carlo=True, trials=None, seed=None, channels=None):
    """One output row (a dict keyed by COLUMNS) plus extra manifest data."""
    sc = cfg.scenario_config(value)
    ch = channels or cfg.channels()
    metric, scen = cfg.metric, cfg.scenario
    p = cfg.point(value)
    row = {
        "scenario": scen, "metric": metric, "gamma1_db": p["gamma1_db"], "gamma2_db": p["gamma2_db"],
        "gammaE1_db": p["gamma_e1_db"], "gammaE2_db": p["gamma_e2_db"], "Rs": p["rs"],
        "value_analytic": "", "value_mc": "", "mc_stderr": "", "trials": "", "flags": "",
    }
    extra = {}
    scale = 1.0 / LN2 if metric == "asc" else 1.0
    flags = set()
    if analytic:
        mv = metrics.evaluate(metric, sc, ch)
        row["value_analytic"] = mv.value * scale
        flags |= set(mv.flags)
        extra["method"] = mv.method
    if monte_carlo:
        trials = cfg.trials if trials is None else trials
        seed = cfg.seed if seed is None else seed
        reqs = [(metric, scen, "lower")]
        if metric == "sop":
            reqs.append(("sop", scen, "exact"))
        est = mc.simulate(reqs, sc, ch, mc.TrialConfig(trials, seed, workers=1))
        main = est[reqs[0]]
        row["value_mc"] = main.mean * scale
        row["mc_stderr"] = main.stderr * scale
        row["trials"] = main.trials
        if metric == "sop":
            ex = est[reqs[1]]
            extra["mc_exact_sop"] = ex.mean
            extra["mc_exact_stderr"] = ex.stderr
    row["flags"] = ";".join(sorted(flags))
    return row, extra


def run_sweep(curves, *, analytic=True, monte_carlo=True, trials=None, seed=None, workers=None):
    """Evaluate every (label, RunConfig) curve over its grid; rows come back in grid order."""
    jobs = []
    for label, cfg in curves:
        ch = cfg.channels()
        for value in cfg.grid():
            jobs.append((label, cfg, ch, value))

    def run(job):
        label, cfg, ch, value = job
        row, extra = evaluate_point(
            cfg, value, analytic=analytic, monte_carlo=monte_carlo, trials=trials, seed=seed, channels=ch
        )
        return label, row, extra

    workers = workers or mc.default_workers()
    if workers == 1:
        return [run(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, jobs))


def to_csv(results, with_curve=False):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow((("curve",) if with_curve else ()) + COLUMNS)
    for label, row, _ in results:
        w.writerow(((label,) if with_curve else ()) + tuple(fmt(row[c]) for c in COLUMNS))
    return buf.getvalue()


def flags_summary(results):
    summary = {}
    for _, row, _ in results:
        for f in filter(None, row["flags"].split(";")):
            summary[f] = summary.get(f, 0) + 1
    return dict(sorted(summary.items()))


def manifest(run_spec, results):
    """JSON manifest: everything needed to reproduce the CSV, plus per-row extras."""
    return {
        "tool": "risfso",
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "run": run_spec,
        "master_seed": run_spec.get("seed"),
        "flags_summary": flags_summary(results),
        "rows": [dict(curve=label, index=i, flags=row["flags"], **extra)
                 for i, (label, row, extra) in enumerate(results)],
    }


def write_outputs(path, csv_text, manifest_doc):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text)
    mpath = manifest_path(path)
    with open(mpath, "w", encoding="utf-8") as fh:
        json.dump(manifest_doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return mpath


def manifest_path(csv_path):
    s = str(csv_path)
    return (s[:-4] if s.endswith(".csv") else s) + ".manifest.json"



