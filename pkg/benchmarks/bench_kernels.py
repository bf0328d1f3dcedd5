"""Time the compiled and numpy ball-average kernels on identical inputs.

    python benchmarks/bench_kernels.py [--k-samples N] [--repeat R]

Both backends see the same sample set, so the printed values also serve as
a cross-check: they must agree to rounding.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from quathyp import group as G
from quathyp import kernels
from quathyp import poisson as P
from quathyp.numerics import MCConfig


def _time(fn, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-samples", type=int, default=50_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--nu", type=int, default=1)
    ap.add_argument("--lam", type=float, default=1.0)
    args = ap.parse_args(argv)

    ctx = G.GroupContext(1)
    rng = np.random.default_rng(0)
    g = G.element_with_origin_radius(ctx, 0.5, rng)
    v = np.zeros(args.nu + 1, dtype=complex)
    v[0] = 1.0
    mc = MCConfig(seed=42, k_samples=args.k_samples)
    sections = {
        "ball_norm": P.poisson_generator(ctx, args.nu, args.lam, g, v),
        "key_lemma": P.key_lemma_section(ctx, args.nu, args.lam, g, v),
    }
    impls = kernels.backends()
    print(f"k_samples={args.k_samples} repeat={args.repeat} backends={sorted(impls)}")
    print(f"{'kernel':<10s} {'backend':<8s} {'seconds':>9s} {'speedup':>8s}  value at R=40")
    for name, F in sections.items():
        base = None
        ref = None
        for backend in ("numpy", "cython"):
            if backend not in impls:
                print(f"{name:<10s} {backend:<8s} {'n/a':>9s}")
                continue
            sec, rep = _time(lambda: P.ball_average(ctx, F, mc=mc, backend=impls[backend]), args.repeat)
            base = base or sec
            val = rep.extrapolated_limit
            ref = val if ref is None else ref
            print(f"{name:<10s} {backend:<8s} {sec:9.3f} {base / sec:8.2f}x  {val:.12g}")
        if ref is not None and abs(val - ref) > 1e-9 * max(1.0, abs(ref)):
            raise SystemExit(f"{name}: backends disagree ({ref} vs {val})")


if __name__ == "__main__":
    main()
