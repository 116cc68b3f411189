"""Compare the numba and numpy kernels on the bundled datasets.

Run from the repository root::

    python benchmarks/bench_backends.py [--repeat 5]

The numba timings exclude the first (compiling) call.
"""
import argparse
import time

import numpy as np

from kflann import _kernels
from kflann.experiment import default_manifest
from kflann.dataset import load_manifest
from kflann.network import KflannParams, fit
from kflann.preprocess import fit_stats
from kflann.synth import generate, preset
from kflann.tolerance import tolerance_maxmin

CASES = [("iris", "1"), ("new_thyroid", "1"), ("pima", "5/8"), ("segmentation", "18/19"),
         ("synthetic1", "1"), ("synthetic6", "1")]


def load(name):
    if name.startswith("synthetic"):
        return generate(preset(int(name[-1])))
    return load_manifest(default_manifest())[name].load()


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])
    print(f"{'dataset':14s} {'rho':>6s} " + " ".join(f"{b + ' ms':>10s}" for b in backends)
          + "  speedup  same")
    for name, rho in CASES:
        ds = load(name)
        params = KflannParams(rho, tolerance_maxmin(fit_stats(ds)))
        ms, results = {}, {}
        for b in backends:
            prev = _kernels.use_backend(b)
            try:
                results[b] = fit(ds, params)  # also triggers compilation
                ms[b] = 1e3 * best_of(lambda: fit(ds, params), args.repeat)
            finally:
                _kernels.use_backend(prev)
        same = all(np.array_equal(results[b].assignments, results["numpy"].assignments)
                   for b in backends)
        speed = ms["numpy"] / ms["numba"] if "numba" in ms else float("nan")
        print(f"{name:14s} {rho:>6s} " + " ".join(f"{ms[b]:10.2f}" for b in backends)
              + f"  {speed:6.1f}x  {same}")


if __name__ == "__main__":
    main()
