#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the NumPy fallback.

Times the three hot grid kernels on the workloads the envelope and
classification paths actually issue, plus one end-to-end inner-envelope
call per backend.

Usage:  python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import math
import time

import numpy as np

from dirty_region._kernels import available_backends


def _time(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    backends = available_backends()
    if "fast" not in backends:
        print("compiled backend not built; benchmarking pure only")

    p0, q = 5.0, 12.0
    half = math.sqrt(p0 / q)
    workloads = {
        "fg_grid 257x129": lambda mod: mod.fg_grid(
            p0, q, 2.5, np.linspace(-half, 2 + half, 257), np.linspace(-half, half, 129)
        ),
        "fg_grid 1025x513": lambda mod: mod.fg_grid(
            p0, q, 2.5, np.linspace(-half, 2 + half, 1025), np.linspace(-half, half, 513)
        ),
        "c_margin_grid 4096": lambda mod: mod.c_margin_grid(
            p0, q, 5.0, np.linspace(1 - half, 1 + half, 4096)
        ),
        "helper_rate_grid 1e6": lambda mod: mod.helper_rate_grid(
            p0, q, 5.0, np.linspace(-1, 1, 1_000_001)
        ),
    }

    print(f"{'workload':<24}" + "".join(f"{name:>12}" for name in backends)
          + ("   speedup" if len(backends) == 2 else ""))
    for label, work in workloads.items():
        times = {name: _time(lambda m=mod: work(m), args.repeats)
                 for name, mod in backends.items()}
        row = f"{label:<24}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in backends)
        if len(times) == 2:
            row += f"{times['pure'] / times['fast']:>9.2f}x"
        print(row)

    # end-to-end: one inner-envelope evaluation per backend
    import os
    import subprocess
    import sys

    for name in backends:
        env = dict(os.environ, DIRTY_REGION_BACKEND=name)
        code = (
            "import time; from dirty_region import mac_helper, channels\n"
            "p = channels.MacHelperParams(5.0, 2.5, 2.5, 12.0)\n"
            "t0 = time.perf_counter()\n"
            "mac_helper.inner_envelope(p)\n"
            "print(f'{time.perf_counter() - t0:.4f}')\n"
        )
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        print(f"inner_envelope ({name}): {float(out.stdout) * 1e3:.1f}ms")


if __name__ == "__main__":
    main()
