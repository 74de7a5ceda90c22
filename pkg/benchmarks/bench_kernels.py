#!/usr/bin/env python3
"""Benchmark the hot kernels on the compiled and interpreted paths.

Default: time the workloads in the current mode (numba unless
ZESCAT_NO_NUMBA=1). With --compare, re-run itself in a subprocess for each
mode and print the speedup table.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --compare
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _workloads():
    import numpy as np

    import zescat
    from zescat import PotentialParams, bessel_j, make_channel, solve_channel

    results = {"numba": zescat.NUMBA_ENABLED}

    # warm-up triggers JIT compilation so it is not measured
    bessel_j(2.5, np.linspace(0.1, 500.0, 64))
    solve_channel(make_channel(PotentialParams(d=2, mu=1.0, alpha=1.0), 0))

    s = np.geomspace(1e-3, 1e4, 20_000)
    t0 = time.perf_counter()
    bessel_j(7.5, s)
    bessel_j(0.5, s)
    bessel_j(33.0, s)
    results["bessel_60k_evals_s"] = time.perf_counter() - t0

    ch = make_channel(PotentialParams(d=3, mu=1.5, alpha=1.0), 4)
    t0 = time.perf_counter()
    sample, _ = solve_channel(ch)
    results["channel_nut20_s"] = time.perf_counter() - t0
    results["channel_nut20_steps"] = sample.n_steps

    ch = make_channel(PotentialParams(d=4, mu=1.9, alpha=1.0), 3)
    t0 = time.perf_counter()
    sample, _ = solve_channel(ch)
    results["channel_nut80_s"] = time.perf_counter() - t0
    results["channel_nut80_steps"] = sample.n_steps

    return results


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--compare", action="store_true",
                        help="run both paths in subprocesses and compare")
    parser.add_argument("--json", action="store_true",
                        help="emit raw results as JSON")
    args = parser.parse_args(argv)

    if not args.compare:
        results = _workloads()
        if args.json:
            print(json.dumps(results))
        else:
            mode = "numba" if results["numba"] else "pure numpy/python"
            print(f"mode: {mode}")
            for key, val in results.items():
                if key.endswith("_s"):
                    print(f"  {key:<24} {val:9.3f} s")
                elif key.endswith("_steps"):
                    print(f"  {key:<24} {val:9d}")
        return 0

    outputs = {}
    for label, flag in (("numba", "0"), ("fallback", "1")):
        env = dict(os.environ, ZESCAT_NO_NUMBA=flag)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--json"],
            env=env, capture_output=True, text=True, check=True,
        )
        outputs[label] = json.loads(proc.stdout)

    print(f"{'workload':<26} {'numba':>10} {'fallback':>10} {'speedup':>9}")
    for key in outputs["numba"]:
        if not key.endswith("_s"):
            continue
        a = outputs["numba"][key]
        b = outputs["fallback"][key]
        print(f"{key:<26} {a:9.3f}s {b:9.3f}s {b / a:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
