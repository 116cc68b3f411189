import os

import numpy as np
import pytest

from kflann.dataset import Dataset, load_manifest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "data")
MANIFEST = os.path.join(DATA, "manifest.ini")


def load_named(name) -> Dataset:
    if not os.path.exists(MANIFEST):
        pytest.skip("dataset manifest not present")
    entries = load_manifest(MANIFEST)
    if name not in entries or not entries[name].exists():
        pytest.skip(f"{name} not available")
    return entries[name].load()


@pytest.fixture
def iris():
    return load_named("iris")


@pytest.fixture
def toy():
    X = np.array([[0.0, 0.0], [0.1, 0.2], [5.0, 5.0], [5.2, 4.9]])
    return Dataset(X, ["a", "a", "b", "b"], "toy")


ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(name, ok, detail)``."""
    def record(name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
        ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
