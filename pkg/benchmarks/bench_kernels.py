"""Compiled vs numpy kernels on the exhaustive transposition scan.

Usage: python benchmarks/bench_kernels.py [--d 3] [--repeat 3]

Times each kernel over all partitions of the scan at catalyst dimension d
and checks that both backends return identical arrays.
"""
import argparse
import time

import numpy as np

from catalytic_otto import _kernels
from catalytic_otto.protocol import TRANSPOSITIONS, partition_images, partitions
from catalytic_otto.state import ThermalQubit, pair_weights


def run(d, hot, cold):
    timings = dict.fromkeys(("matching_images", "linear_data", "fixed_point_vertices"), 0.0)
    outputs = []
    weights = pair_weights(hot, cold)
    for key in partitions(d, TRANSPOSITIONS):
        t0 = time.perf_counter()
        images = partition_images(d, TRANSPOSITIONS, key)
        t1 = time.perf_counter()
        M, qh, qc = _kernels.linear_data(images, weights, d, hot.omega, cold.omega)
        t2 = time.perf_counter()
        counts, V = _kernels.fixed_point_vertices(M)
        t3 = time.perf_counter()
        timings["matching_images"] += t1 - t0
        timings["linear_data"] += t2 - t1
        timings["fixed_point_vertices"] += t3 - t2
        outputs.append((images, M, qh, qc, counts, V))
    return timings, outputs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    hot, cold = ThermalQubit(0.3, 1.0), ThermalQubit(3.0, 0.5)

    best, results = {}, {}
    previous = _kernels.backend_name()
    for name in _kernels.available_backends():
        _kernels.use_backend(name)
        runs = [run(args.d, hot, cold) for _ in range(args.repeat)]
        best[name] = {k: min(r[0][k] for r in runs) for k in runs[0][0]}
        results[name] = runs[0][1]
    _kernels.use_backend(previous)

    names = sorted(best)
    print(f"d={args.d}, {sum(len(o[0]) for o in results[names[0]])} protocols, best of {args.repeat}")
    print(f"{'kernel':<22}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for kernel in best[names[0]]:
        row = f"{kernel:<22}" + "".join(f"{best[n][kernel]:>11.4f}s" for n in names)
        if "compiled" in best and "python" in best:
            row += f"{best['python'][kernel] / best['compiled'][kernel]:>11.1f}x"
        print(row)

    if len(names) > 1:
        same = all(np.array_equal(a, b) for pa, pb in zip(results["compiled"], results["python"])
                   for a, b in zip(pa, pb))
        print("outputs identical:", same)


if __name__ == "__main__":
    main()
