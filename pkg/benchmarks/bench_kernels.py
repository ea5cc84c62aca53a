#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy reference backend.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times the three hot paths (batched outcome probabilities, best-response
tables, polished best responses) on both backends and checks that they agree.
"""
import argparse
import math
import time

import numpy as np

from qbos.game import BosParams, bos_matrix
from qbos.kernels import reference

try:
    from qbos.kernels import _compiled
except ImportError:
    _compiled = None

HALF_PI = math.pi / 2


def timeit(fn, repeat):
    best = math.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    m = bos_matrix(BosParams(5, 3, 1))
    backends = [("reference", reference)]
    if _compiled is not None:
        backends.append(("compiled", _compiled))
    else:
        print("note: compiled backend not built; timing the reference backend only")

    a = rng.uniform(-math.pi, math.pi, (200_000, 3))
    b = rng.uniform(-math.pi, math.pi, (200_000, 3))
    opponents = rng.uniform(-math.pi, math.pi, (200, 3))
    br_opps = rng.uniform(-math.pi, math.pi, (200, 3))

    cases = {
        "probs_batch (200k pairs)":
            lambda be: be.probs_batch(HALF_PI, a, b),
        "br_table (200 opponents, 49^2 grid)":
            lambda be: be.br_table(HALF_PI, m.alice_array(), opponents, True, 2, 49),
        "best_response x200 (97^2 grid + polish)":
            lambda be: [be.best_response(HALF_PI, m.bob_array(), o, False, 2, 97, True, 200)
                        for o in br_opps],
    }

    print(f"{'case':45s}  " + "  ".join(f"{name:>12s}" for name, _ in backends)
          + ("  speedup" if len(backends) == 2 else ""))
    for label, fn in cases.items():
        times = []
        outputs = []
        for _, be in backends:
            t, out = timeit(lambda be=be: fn(be), args.repeat)
            times.append(t)
            outputs.append(out)
        line = f"{label:45s}  " + "  ".join(f"{t * 1e3:10.1f}ms" for t in times)
        if len(backends) == 2:
            line += f"  {times[0] / times[1]:6.1f}x"
        print(line)
        if len(outputs) == 2:
            if isinstance(outputs[0], list):
                worst = max(abs(v1 - v2) for (_, v1), (_, v2) in zip(outputs[0], outputs[1]))
            else:
                worst = float(np.abs(np.asarray(outputs[0]) - np.asarray(outputs[1])).max())
            print(f"{'':45s}  agreement: max |diff| = {worst:.3e}")


if __name__ == "__main__":
    main()
