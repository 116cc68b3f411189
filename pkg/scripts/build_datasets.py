"""Rebuild the bundled UCI CSV files under ``data/`` from offline package sources.

The machine has no route to the UCI archive, so the tables are recovered from
datasets shipped inside PyPI distributions:

* ``scikit-learn``          iris, wine
* ``keel-ds``               new thyroid, pima, haberman, image segmentation
* ``imbalanced-databases``  glass (original UCI ``glass.data``)
* ``orange3``               ionosphere (original UCI column layout)

Usage::

    pip download --no-deps keel-ds imbalanced-databases orange3 -d /tmp/wheels
    python scripts/build_datasets.py /tmp/wheels data/
"""
from __future__ import annotations

import csv
import glob
import io
import os
import sys
import zipfile
from collections import defaultdict

import numpy as np


def _wheel(wheel_dir, prefix):
    (path,) = glob.glob(os.path.join(wheel_dir, prefix + "*.whl"))
    return zipfile.ZipFile(path)


def _keel_rows(text):
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        rows.append([c.strip() for c in line.split(",")])
    return rows


def _write(path, header, features, labels):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for x, y in zip(features, labels):
            w.writerow([_num(v) for v in x] + [y])


def _num(v):
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)


def _fmt_header(n):
    return [f"x{i + 1}" for i in range(n)] + ["class"]


def build(wheel_dir, out_dir):
    from sklearn.datasets import load_iris, load_wine

    os.makedirs(out_dir, exist_ok=True)

    X, y = load_iris(return_X_y=True)
    _write(os.path.join(out_dir, "iris.csv"), _fmt_header(4), X, y + 1)
    X, y = load_wine(return_X_y=True)
    _write(os.path.join(out_dir, "wine.csv"), _fmt_header(13), X, y + 1)

    keel = _wheel(wheel_dir, "keel_ds")
    raw = "keel_ds/data/{}/raw/{}.dat"

    # new-thyroid2 keeps the UCI row order: 150 normal, 35 hyper, 30 hypo.
    rows = _keel_rows(keel.read(raw.format("imbalanced", "new-thyroid2")).decode())
    pos = [i for i, r in enumerate(rows) if r[-1] == "positive"]
    assert len(rows) == 215 and pos == list(range(150, 185)), "unexpected new-thyroid2 layout"
    # Both KEEL binarizations flag the same 35 hyper rows; the trailing 30
    # rows (high TSH) are the hypo class.
    other = _keel_rows(keel.read(raw.format("imbalanced", "new-thyroid1")).decode())
    hyper = sorted(tuple(map(float, r[:-1])) for r in other if r[-1] == "positive")
    assert hyper == sorted(tuple(map(float, r[:-1])) for r in rows[150:185]), "new-thyroid1/2 disagree"
    labels = [1] * 150 + [2] * 35 + [3] * 30
    _write(os.path.join(out_dir, "new_thyroid.csv"), _fmt_header(5),
           np.array([r[:-1] for r in rows], float), labels)

    rows = _keel_rows(keel.read(raw.format("imbalanced", "pima")).decode())
    assert len(rows) == 768
    _write(os.path.join(out_dir, "pima.csv"), _fmt_header(8),
           np.array([r[:-1] for r in rows], float),
           [2 if r[-1] == "positive" else 1 for r in rows])

    rows = _keel_rows(keel.read(raw.format("imbalanced", "haberman")).decode())
    assert len(rows) == 306
    # KEEL's "positive" is the minority outcome (died within 5 years, UCI class 2).
    _write(os.path.join(out_dir, "haberman.csv"), _fmt_header(3),
           np.array([r[:-1] for r in rows], float),
           [2 if r[-1] == "positive" else 1 for r in rows])

    # UCI's 210-row training split is not recoverable from the merged 2310 rows;
    # take the first 30 rows of each class in file order.
    rows = _keel_rows(keel.read(raw.format("balanced", "segment")).decode())
    taken = defaultdict(int)
    picked = []
    for r in rows:
        if taken[r[-1]] < 30:
            taken[r[-1]] += 1
            picked.append(r)
    assert len(picked) == 210
    _write(os.path.join(out_dir, "segmentation.csv"), _fmt_header(19),
           np.array([r[:-1] for r in picked], float), [r[-1] for r in picked])

    imb = _wheel(wheel_dir, "imbalanced_databases")
    text = imb.read("imbalanced_databases/data/glass/glass.data.txt").decode()
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    assert len(rows) == 214
    _write(os.path.join(out_dir, "glass.csv"), _fmt_header(9),
           np.array([r[1:-1] for r in rows], float), [r[-1] for r in rows])

    orange = _wheel(wheel_dir, "orange3")
    text = orange.read("Orange/tests/datasets/ionosphere.tab").decode()
    lines = text.splitlines()[3:]
    rows = [ln.split("\t") for ln in lines if ln.strip()]
    assert len(rows) == 351 and all(len(r) == 35 for r in rows)
    _write(os.path.join(out_dir, "ionosphere.csv"), _fmt_header(34),
           np.array([r[:-1] for r in rows], float), [r[-1] for r in rows])


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    build(sys.argv[1], sys.argv[2])
