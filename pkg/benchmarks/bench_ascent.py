#!/usr/bin/env python3
"""Benchmark the compiled ascent kernel against the numpy fallback.

Runs the same margin-constrained POVM ascent on a spread of instance sizes
and prints per-iteration timings plus the speedup.  The two kernels execute
the identical algorithm, so the reached values should agree to optimizer
precision.

    python3 benchmarks/bench_ascent.py [--iters 2000] [--repeats 3]
"""

import argparse
import time

import numpy as np

from margindisc._ascent import HAVE_COMPILED, get_kernel
from margindisc.catalog import color_coding, phase_shift, superdense
from margindisc.group_disc import process_set_from_rep
from margindisc.oracle import _initial_factors, _weighted_outputs
from margindisc.sampling import random_pure_state


def build_cases():
    from margindisc.core import ProcessSet

    u1, u2 = np.eye(2), np.diag([1.0, 1j])
    return [
        ("qubit pair (n=2, d=2)", ProcessSet((u1, u2), (0.5, 0.5)), 0.05),
        ("Z5 phase shift x2 (n=5, d=4)", process_set_from_rep(phase_shift(5, 2).rep), 0.3),
        ("superdense d=3 (n=9, d=3)", process_set_from_rep(superdense(3).rep), 1.0),
        ("color coding N=4 d=2 (n=24, d=16)", process_set_from_rep(color_coding(4, 2).rep), 1.0),
    ]


def bench(kernel_name, processes, margin, iters, repeats):
    rng = np.random.default_rng(1)
    phi = random_pure_state(rng, processes.dimension)
    weighted = _weighted_outputs(processes, np.outer(phi, phi.conj()))
    kernel = get_kernel(kernel_name)
    best_time, value = np.inf, None
    for _ in range(repeats):
        factors = _initial_factors(np.random.default_rng(2), len(processes), processes.dimension, False)
        started = time.perf_counter()
        po, _, _ = kernel(weighted, margin, factors, iters, 0.35, 0.01, 32.0, 1e7, 1e-9)
        best_time = min(best_time, time.perf_counter() - started)
        value = po
    return best_time, value


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iters", type=int, default=2000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if not HAVE_COMPILED:
        print("compiled kernel not available; benchmarking the fallback only")
    print(f"{'instance':<36} {'python':>12} {'compiled':>12} {'speedup':>8}  value drift")
    for label, processes, margin in build_cases():
        t_py, v_py = bench("python", processes, margin, args.iters, args.repeats)
        if HAVE_COMPILED:
            t_c, v_c = bench("compiled", processes, margin, args.iters, args.repeats)
            drift = abs(v_py - v_c)
            print(
                f"{label:<36} {t_py * 1e3:>10.1f}ms {t_c * 1e3:>10.1f}ms "
                f"{t_py / t_c:>7.1f}x  {drift:.1e}"
            )
        else:
            print(f"{label:<36} {t_py * 1e3:>10.1f}ms {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
