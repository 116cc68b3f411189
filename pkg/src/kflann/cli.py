"""Command-line driver: ``kflann {run,tune,sweep,bench,synth,describe}``."""
from __future__ import annotations

import argparse
import os
import sys

from .dataset import DatasetError, describe, write_csv
from .evaluation import rho_grid, vigilance_sweep
from .experiment import (BENCH_COLUMNS, RunConfig, bench_table, default_manifest,
                         format_report, format_rows, resolve_dataset, run_experiment)
from .network import parse_vigilance, snap_vigilance
from .preprocess import METHODS, fit_stats, normalize
from .reference import TABLES
from .synth import PRESETS, generate, preset
from .tolerance import TOLERANCE_METHODS, make_tolerance


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _vigilance(text):
    try:
        parse_vigilance(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return text


def _grid(text):
    """``start:step:stop`` or a comma list of values (fractions allowed)."""
    try:
        if ":" in text:
            a, step, b = (float(v) for v in text.split(":"))
            return rho_grid(a, b, step)
        return [parse_vigilance(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad vigilance grid {text!r}: {exc}")


def _data_args(p, need_data=True):
    p.add_argument("--data", required=need_data,
                   help="CSV path, manifest entry name, or syntheticN")
    p.add_argument("--labeled", action="store_true",
                   help="last CSV column holds class labels")
    p.add_argument("--manifest", default=None,
                   help="dataset manifest (default: $KFLANN_MANIFEST or ./data/manifest.ini)")
    p.add_argument("--seed", type=int, default=0)


def _model_args(p):
    p.add_argument("--normalize", choices=METHODS, default="none")
    p.add_argument("--normalize-axis", choices=("feature", "pattern"), default="feature",
                   help="standardize columns (feature) or each pattern across its features")
    p.add_argument("--new-min", type=float, default=0.0)
    p.add_argument("--new-max", type=float, default=1.0)
    p.add_argument("--tolerance", choices=TOLERANCE_METHODS, default="maxmin")
    p.add_argument("--tolerance-values", type=_floats, default=None)
    p.add_argument("--vigilance", type=_vigilance, default="1",
                   help="decimal or ratio such as 18/34")
    p.add_argument("--no-snap", dest="snap", action="store_false",
                   help="use the vigilance literally instead of snapping to the nearest k/n")
    p.add_argument("--max-epochs", type=int, default=100)
    p.add_argument("--epoch-mode", choices=("seeded", "rebuild"), default="seeded")
    p.add_argument("--shuffle", action="store_true",
                   help="present patterns in a seeded random order")


def _tune_args(p):
    p.add_argument("--expected-clusters", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--tune-evaluate", choices=("fit", "epoch"), default="fit")


def _out_args(p, default="json"):
    p.add_argument("--format", choices=("json", "csv", "md"), default=default)
    p.add_argument("--output", "-o", default=None, help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kflann", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="fit one configuration and report clusters and error")
    _data_args(p)
    _model_args(p)
    _tune_args(p)
    p.add_argument("--tune", action="store_true", help="tune the tolerance before fitting")
    p.add_argument("--assignments", default=None, help="write per-pattern cluster ids as CSV")
    _out_args(p)

    p = sub.add_parser("tune", help="tune the tolerance toward an expected cluster count")
    _data_args(p)
    _model_args(p)
    _tune_args(p)
    p.add_argument("--assignments", default=None)
    _out_args(p)

    p = sub.add_parser("sweep", help="cluster count and error over a vigilance grid")
    _data_args(p)
    _model_args(p)
    p.add_argument("--grid", type=_grid, default=rho_grid(0.0, 1.0, 0.1),
                   help="start:step:stop or comma list (default 0:0.1:1)")
    _out_args(p, "csv")

    p = sub.add_parser("bench", help="rerun published result tables")
    p.add_argument("--table", action="append", default=None,
                   help="table id 3-9, or 'all' (repeatable; default all)")
    p.add_argument("--manifest", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-epochs", type=int, default=100)
    p.add_argument("--max-iters", type=int, default=50)
    _out_args(p, "md")

    p = sub.add_parser("synth", help="write synthetic preset datasets as CSV")
    p.add_argument("--preset", default="all", help="1-6 or 'all'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", default=".",
                   help="output directory, or a .csv path for a single preset")

    p = sub.add_parser("describe", help="pattern count, features and class histogram")
    _data_args(p)
    _out_args(p)
    return ap


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(a, tune) -> RunConfig:
    return RunConfig(
        data=a.data, labeled=a.labeled, normalize=a.normalize,
        normalize_axis=a.normalize_axis, new_min=a.new_min, new_max=a.new_max,
        tolerance=a.tolerance, tolerance_values=a.tolerance_values,
        vigilance=a.vigilance, tune=tune, expected_clusters=a.expected_clusters,
        max_epochs=a.max_epochs, max_iters=a.max_iters, tune_evaluate=a.tune_evaluate,
        epoch_mode=a.epoch_mode, seed=a.seed, shuffle=a.shuffle, snap=a.snap, manifest=a.manifest,
    )


def _load(a):
    return resolve_dataset(a.data, labeled=a.labeled, manifest=a.manifest, seed=a.seed)


def cmd_run(a, tune=None):
    tune = a.tune if tune is None else tune
    ds = _load(a)
    rep = run_experiment(_config(a, tune), ds)
    if tune and rep.tuning and not rep.tuning["reached"]:
        print(f"warning: tuning did not reach {rep.expected_clusters} clusters; "
              f"using closest ({rep.clusters})", file=sys.stderr)
    if a.assignments:
        with open(a.assignments, "w", encoding="utf-8") as fh:
            fh.write("pattern,cluster\n")
            for i, c in enumerate(rep.assignments):
                fh.write(f"{i},{c}\n")
    _emit(format_report(rep, a.format), a.output)
    return 0


def cmd_sweep(a):
    ds = _load(a)
    z, _ = normalize(ds, a.normalize, axis=a.normalize_axis, new_min=a.new_min, new_max=a.new_max)
    tol = make_tolerance(a.tolerance, fit_stats(z), a.tolerance_values)
    grid = a.grid
    if a.snap:
        grid = list(dict.fromkeys(snap_vigilance(r, z.n) for r in grid))
    res = vigilance_sweep(z, tol, grid, a.max_epochs)
    rows = [{"rho": p.vigilance, "clusters": p.clusters, "error_rate_percent": p.error_rate_percent,
             "epochs": p.epochs, "converged": p.converged} for p in res.points]
    _emit(format_rows(rows, ("rho", "clusters", "error_rate_percent", "epochs", "converged"),
                      a.format), a.output)
    return 0


def cmd_bench(a):
    wanted = a.table or ["all"]
    ids = []
    for t in wanted:
        if t == "all":
            ids.extend(sorted(TABLES))
        elif t.isdigit() and int(t) in TABLES:
            ids.append(int(t))
        else:
            raise ValueError(f"unknown table {t!r}; choose from {sorted(TABLES)} or 'all'")
    manifest = a.manifest or default_manifest()
    if not os.path.exists(manifest):
        print(f"warning: manifest {manifest} not found; real datasets will be skipped",
              file=sys.stderr)
    rows = []
    for t in dict.fromkeys(ids):
        for r in bench_table(t, manifest, a.seed, a.max_epochs, a.max_iters):
            r = {"table": t, **r}
            if r["status"] == "skipped":
                print(f"table {t}: {r['dataset']} skipped (not available)", file=sys.stderr)
            rows.append(r)
    _emit(format_rows(rows, ("table",) + BENCH_COLUMNS, a.format), a.output)
    return 0


def cmd_synth(a):
    ids = sorted(PRESETS) if a.preset == "all" else [int(a.preset)]
    single = len(ids) == 1 and a.output.endswith(".csv")
    if not single:
        os.makedirs(a.output, exist_ok=True)
    for i in ids:
        ds = generate(preset(i, a.seed))
        path = a.output if single else os.path.join(a.output, f"{ds.name}.csv")
        write_csv(ds, path)
        print(f"wrote {path} ({len(ds)} patterns)", file=sys.stderr)
    return 0


def cmd_describe(a):
    summary = describe(_load(a)).to_dict()
    if a.format == "json":
        import json
        _emit(json.dumps(summary, indent=2, sort_keys=True) + "\n", a.output)
    else:
        rows = [{"name": summary["name"], "patterns": summary["patterns"],
                 "features": summary["features"],
                 "classes": " ".join(f"{k}:{v}" for k, v in summary.get("classes", {}).items())}]
        _emit(format_rows(rows, ("name", "patterns", "features", "classes"), a.format), a.output)
    return 0


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    handlers = {
        "run": cmd_run,
        "tune": lambda a: cmd_run(a, tune=True),
        "sweep": cmd_sweep,
        "bench": cmd_bench,
        "synth": cmd_synth,
        "describe": cmd_describe,
    }
    try:
        return handlers[a.command](a)
    except (DatasetError, ValueError, OSError, RuntimeError) as exc:
        print(f"kflann {a.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
