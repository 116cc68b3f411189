"""End-to-end runs (load, normalize, tolerance, tune, fit, score) and the
benchmark tables built from them."""
from __future__ import annotations

import csv
import io
import json
import os
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .dataset import Dataset, DatasetError, load_csv, load_manifest
from .evaluation import error_rate
from .network import KflannParams, fit, parse_vigilance, snap_vigilance, tune_tolerance
from .preprocess import fit_stats, normalize
from .reference import TABLES, RefTable
from .synth import generate, preset
from .tolerance import make_tolerance

REPORT_COLUMNS = ("dataset", "normalization", "tolerance_method", "vigilance", "clusters",
                  "error_rate_percent", "epochs", "converged")
BENCH_COLUMNS = REPORT_COLUMNS + ("published_clusters", "published_error_rate_percent",
                                  "error_delta", "status")
DEFAULT_MANIFEST = os.path.join("data", "manifest.ini")
_SYNTH_NAME = re.compile(r"^synth(?:etic)?([1-6])$")


def default_manifest() -> str:
    return os.environ.get("KFLANN_MANIFEST", DEFAULT_MANIFEST)


@dataclass
class RunConfig:
    """Everything needed to reproduce one run."""

    data: str
    labeled: bool = True
    normalize: str = "none"
    normalize_axis: str = "feature"
    new_min: float = 0.0
    new_max: float = 1.0
    tolerance: str = "maxmin"
    tolerance_values: Optional[Sequence[float]] = None
    vigilance: object = 1.0
    tune: bool = False
    expected_clusters: Optional[int] = None
    max_epochs: int = 100
    max_iters: int = 50
    tune_evaluate: str = "fit"
    epoch_mode: str = "seeded"
    seed: int = 0
    shuffle: bool = False
    snap: bool = True
    manifest: Optional[str] = None

    def __post_init__(self):
        self.vigilance = parse_vigilance(self.vigilance)
        if self.tolerance == "manual" and not self.tolerance_values:
            raise ValueError("--tolerance manual needs --tolerance-values")
        if self.tolerance != "manual" and self.tolerance_values:
            raise ValueError("--tolerance-values only applies to --tolerance manual")
        if self.max_epochs < 1 or self.max_iters < 1:
            raise ValueError("max_epochs and max_iters must be >= 1")


def resolve_dataset(data: str, *, labeled=True, manifest=None, seed=0) -> Dataset:
    """Load ``data`` as a CSV path, a manifest entry name, or ``syntheticN``."""
    m = _SYNTH_NAME.match(data)
    if m and not os.path.exists(data):
        return generate(preset(int(m.group(1)), seed))
    if os.path.exists(data):
        return load_csv(data, labeled=labeled)
    mpath = manifest or default_manifest()
    if os.path.exists(mpath):
        entries = load_manifest(mpath)
        if data in entries:
            return entries[data].load()
    raise DatasetError(f"no such dataset file or manifest entry: {data}")


@dataclass
class RunReport:
    dataset: str
    n_patterns: int
    n_features: int
    normalization: str
    normalize_axis: str
    tolerance_method: str
    delta: list
    vigilance: float
    clusters: int
    error_rate_percent: Optional[float]
    epochs: int
    converged: bool
    cluster_history: list
    assignments: list = field(repr=False)
    tuning: Optional[dict] = None
    expected_clusters: Optional[int] = None

    def row(self) -> dict:
        return {k: getattr(self, k) for k in REPORT_COLUMNS}

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def run_experiment(config: RunConfig, ds: Optional[Dataset] = None) -> RunReport:
    if ds is None:
        ds = resolve_dataset(config.data, labeled=config.labeled,
                             manifest=config.manifest, seed=config.seed)
    z, _ = normalize(ds, config.normalize, axis=config.normalize_axis,
                     new_min=config.new_min, new_max=config.new_max)
    stats = fit_stats(z)
    tol = make_tolerance(config.tolerance, stats, config.tolerance_values)
    rho = snap_vigilance(config.vigilance, z.n) if config.snap else config.vigilance
    params = KflannParams(rho, tol, config.max_epochs, config.epoch_mode)
    order = None
    if config.shuffle:
        order = np.random.default_rng(config.seed).permutation(len(z))

    expected = config.expected_clusters or ds.expected_clusters
    trace = None
    if config.tune:
        if expected is None:
            raise ValueError("tuning needs --expected-clusters (or a manifest entry that sets it)")
        tuned, trace = tune_tolerance(z, params, expected, config.max_iters,
                                      evaluate=config.tune_evaluate, stats=stats)
        params = params.replace(tolerance=tuned)

    model = fit(z, params, order)
    err = error_rate(model, z).error_rate_percent if z.labeled else None
    return RunReport(
        dataset=ds.name,
        n_patterns=len(ds),
        n_features=ds.n,
        normalization=config.normalize,
        normalize_axis=config.normalize_axis,
        tolerance_method=params.tolerance.method,
        delta=[float(v) for v in params.delta],
        vigilance=params.vigilance,
        clusters=model.n_clusters,
        error_rate_percent=err,
        epochs=model.epochs_run,
        converged=model.converged,
        cluster_history=list(model.cluster_history),
        assignments=[int(a) for a in model.assignments],
        tuning=trace.to_dict() if trace is not None else None,
        expected_clusters=expected,
    )


# ---------------------------------------------------------------- bench

def _axis_for(normalization):
    # the published z-score tables standardize each pattern across its features
    return "pattern" if normalization == "zscore" else "feature"


def bench_table(table_id: int, manifest=None, seed=0, max_epochs=100, max_iters=50):
    """Rerun one published table; returns a list of row dicts.

    Datasets missing from the manifest (or from disk) yield rows with status
    ``'skipped'``.
    """
    if table_id not in TABLES:
        raise ValueError(f"no table {table_id}; choose from {sorted(TABLES)}")
    table: RefTable = TABLES[table_id]
    mpath = manifest or default_manifest()
    entries = load_manifest(mpath) if os.path.exists(mpath) else {}
    cache = {}
    rows = []
    for ref in table.rows:
        row = {"dataset": ref.dataset, "normalization": table.normalization,
               "tolerance_method": table.tolerance_method, "vigilance": ref.rho,
               "clusters": None, "error_rate_percent": None, "epochs": None,
               "converged": None, "published_clusters": ref.clusters,
               "published_error_rate_percent": ref.error_rate_percent,
               "error_delta": None, "status": "skipped"}
        if ref.dataset not in cache:
            m = _SYNTH_NAME.match(ref.dataset)
            if m:
                cache[ref.dataset] = generate(preset(int(m.group(1)), seed))
            elif ref.dataset in entries and entries[ref.dataset].exists():
                cache[ref.dataset] = entries[ref.dataset].load()
            else:
                cache[ref.dataset] = None
        ds = cache[ref.dataset]
        if ds is None:
            rows.append(row)
            continue
        cfg = RunConfig(ds.name, normalize=table.normalization,
                        normalize_axis=_axis_for(table.normalization),
                        tolerance=table.tolerance_method, vigilance=ref.vigilance,
                        max_epochs=max_epochs, max_iters=max_iters, seed=seed)
        rep = run_experiment(cfg, ds)
        if table.tune and ds.expected_clusters and rep.clusters != ds.expected_clusters:
            cfg.tune = True
            rep = run_experiment(cfg, ds)
        row.update(clusters=rep.clusters, error_rate_percent=rep.error_rate_percent,
                   epochs=rep.epochs, converged=rep.converged, status="ok")
        if rep.error_rate_percent is not None:
            row["error_delta"] = rep.error_rate_percent - ref.error_rate_percent
        rows.append(row)
    return rows


# ---------------------------------------------------------------- output

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{round(v, 4) + 0.0:.4f}"
    return str(v)


def format_rows(rows: Sequence[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: r.get(c) for c in columns} for r in rows],
                          indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in columns])
        return buf.getvalue()
    if fmt == "md":
        lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
        for r in rows:
            lines.append("| " + " | ".join(_cell(r.get(c)) for c in columns) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def format_report(report: RunReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    return format_rows([report.row()], REPORT_COLUMNS, fmt)
