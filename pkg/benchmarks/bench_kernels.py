"""Timing comparison of the two root-finding kernel implementations.

Kernel-level workloads run both implementations in process on identical
inputs; the end-to-end row compares a full bounds run in subprocesses with
CAPAX_BACKEND set, so each backend pays its real dispatch cost.  Run as

    python3 benchmarks/bench_kernels.py [--repeat 5] [--nodes 4096]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from capax import _kernels
from capax.cli import example_map
from capax.ratmap import as_fraction


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def single_roots_workload(rng, degree, count):
    polys = [
        rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        for _ in range(count)
    ]
    polys = [np.ascontiguousarray(c / c[-1]) for c in polys]

    def run(roots_single):
        for c in polys:
            roots_single(c, 1e-12, 200)

    return run


def row_sweep_workload(nodes):
    R = example_map(6)
    P, Q = as_fraction(R)
    pc = np.zeros(R.n + 1, dtype=np.complex128)
    pc[: R.n] = P
    ws = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    roots_np, _ = _kernels.IMPLS["numpy"]
    warm, _ = roots_np(Q - pc / ws[0], 1e-12, 200)

    def run(solve_rows):
        solve_rows(pc, Q, ws, warm.copy(), 1e-12, 200)

    return run


def end_to_end(backend, nodes):
    code = (
        "import time; from capax import capacity, cli; "
        "from capax._kernels import warmup; warmup(); "
        "R = cli.example_map(6); "
        f"capacity.bounds_sequence(R, 7, N={nodes}); "  # warm run
        "t0 = time.perf_counter(); "
        f"capacity.bounds_sequence(R, 7, N={nodes}); "
        "print(time.perf_counter() - t0)"
    )
    env = dict(os.environ, CAPAX_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    if out.returncode != 0:
        raise RuntimeError(out.stderr)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--nodes", type=int, default=4096)
    args = ap.parse_args()

    if "numba" not in _kernels.IMPLS:
        print("numba backend unavailable; nothing to compare")
        return 1

    _kernels.warmup()
    rng = np.random.default_rng(0)
    rows = []

    for degree, count in ((4, 200), (8, 200), (16, 100)):
        run = single_roots_workload(rng, degree, count)
        t = {
            name: best_of(args.repeat, lambda fn=impl[0]: run(fn))
            for name, impl in _kernels.IMPLS.items()
        }
        rows.append((f"single roots deg={degree} x{count}", t))

    for nodes in (args.nodes // 4, args.nodes):
        run = row_sweep_workload(nodes)
        t = {
            name: best_of(args.repeat, lambda fn=impl[1]: run(fn))
            for name, impl in _kernels.IMPLS.items()
        }
        rows.append((f"row sweep deg=3 N={nodes}", t))

    t = {name: end_to_end(name, args.nodes) for name in ("numba", "numpy")}
    rows.append((f"bounds k=7 N={args.nodes} (subprocess)", t))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'numba (ms)':>11}  {'numpy (ms)':>11}  {'numpy/numba':>11}")
    for name, t in rows:
        ratio = t["numpy"] / t["numba"]
        print(
            f"{name:<{width}}  {1e3 * t['numba']:>11.3f}  {1e3 * t['numpy']:>11.3f}  {ratio:>11.2f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
