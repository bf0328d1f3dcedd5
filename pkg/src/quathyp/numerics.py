"""Quadrature panels, counter-based random streams, Haar samplers, summation."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quat import gram_schmidt_columns

_MASK64 = (1 << 64) - 1
BLOCK = 4096  # samples per counter block


@dataclass(frozen=True)
class MCConfig:
    """Monte-Carlo and panel settings shared by the K- and ball integrals."""

    seed: int = 42
    k_samples: int = 200_000
    panel_points: int = 64
    t_panel_width: float = 1.0

    def __post_init__(self):
        if self.k_samples < 1 or self.panel_points < 2 or self.t_panel_width <= 0:
            raise ValueError("invalid MCConfig")

    def as_dict(self) -> dict:
        return {
            "seed": int(self.seed),
            "k_samples": int(self.k_samples),
            "panel_points": int(self.panel_points),
            "t_panel_width": float(self.t_panel_width),
        }


# ------------------------------------------------------------ quadrature


@lru_cache(maxsize=64)
def _legendre(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_panel(a: float, b: float, m: int):
    """Gauss-Legendre nodes and weights on [a, b]."""
    if not a < b or m < 2:
        raise ValueError("need a < b and m >= 2")
    x, w = _legendre(m)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def panel_rule(a: float, b: float, m: int, width: float):
    """Composite Gauss rule with panels of at most ``width``.

    Returns nodes, weights and the panel index of each node.
    """
    npan = max(1, int(np.ceil((b - a) / width - 1e-12)))
    edges = np.linspace(a, b, npan + 1)
    xs, ws, ids = [], [], []
    for p in range(npan):
        x, w = gauss_panel(edges[p], edges[p + 1], m)
        xs.append(x)
        ws.append(w)
        ids.append(np.full(m, p))
    return np.concatenate(xs), np.concatenate(ws), np.concatenate(ids)


def radial_rule(radii, m: int = 64, width: float = 1.0):
    """Panels on [0, max(radii)] whose edges include every radius.

    Returns (nodes, weights, cut) where ``cut[r]`` is the number of nodes
    lying below ``radii[r]``.
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(np.diff(radii) <= 0) or radii[0] <= 0:
        raise ValueError("radii must be positive and increasing")
    xs, ws, cut = [], [], []
    lo = 0.0
    count = 0
    for r in radii:
        x, w, _ = panel_rule(lo, float(r), m, width)
        xs.append(x)
        ws.append(w)
        count += x.size
        cut.append(count)
        lo = float(r)
    return np.concatenate(xs), np.concatenate(ws), np.array(cut)


# ----------------------------------------------------------- summation


def pairwise_sum(x, axis: int = 0):
    """Pairwise (cascade) summation along ``axis`` with a fixed tree.

    The tree depends only on the length, so the result does not depend on
    how the array was produced or chunked.
    """
    x = np.moveaxis(np.asarray(x), axis, 0)
    while x.shape[0] > 1:
        if x.shape[0] % 2:
            x = np.concatenate([x, np.zeros_like(x[:1])], axis=0)
        x = x[0::2] + x[1::2]
    return x[0] if x.shape[0] else np.zeros(x.shape[1:], dtype=x.dtype)


def mean_and_stderr(samples, axis: int = 0):
    """Sample mean and standard error with pairwise sums."""
    samples = np.asarray(samples)
    n = samples.shape[axis]
    mean = pairwise_sum(samples, axis) / n
    dev = np.moveaxis(samples, axis, 0) - mean
    var = pairwise_sum(np.abs(dev) ** 2, 0) / max(n - 1, 1)
    return mean, np.sqrt(var / n)


# -------------------------------------------------------- random streams


def _key(seed: int, stream: int, block: int) -> int:
    mixed = (int(seed) * 0x9E3779B97F4A7C15 + int(stream) * 0xBF58476D1CE4E5B9) & _MASK64
    return (mixed << 64) | (int(block) & _MASK64)


def normals(seed: int, stream: int, start: int, stop: int, dim: int) -> np.ndarray:
    """Standard normals for sample indices ``start <= i < stop``.

    Row i depends only on (seed, stream, i): samples are grouped in fixed
    blocks and each block has its own Philox key, so any partition of the
    index range reproduces the same numbers.
    """
    if stop <= start:
        return np.empty((0, dim))
    out = np.empty((stop - start, dim))
    b0, b1 = start // BLOCK, (stop - 1) // BLOCK
    for b in range(b0, b1 + 1):
        gen = np.random.Generator(np.random.Philox(key=_key(seed, stream, b)))
        block = gen.standard_normal((BLOCK, dim))
        lo = max(start, b * BLOCK)
        hi = min(stop, (b + 1) * BLOCK)
        out[lo - start : hi - start] = block[lo - b * BLOCK : hi - b * BLOCK]
    return out


# ---------------------------------------------------------- Haar samplers

STREAM_SP1 = 1
STREAM_SPN = 2


def haar_sp1(seed: int, start: int, stop: int, stream: int = STREAM_SP1) -> np.ndarray:
    """Haar-distributed unit quaternions, shape (stop-start, 4)."""
    g = normals(seed, stream, start, stop, 4)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def haar_spn(n: int, seed: int, start: int, stop: int, stream: int = STREAM_SPN) -> np.ndarray:
    """Haar samples of Sp(n): quaternionic Ginibre matrices orthonormalised.

    Shape (stop-start, n, n, 4).  The first column is the normalised first
    Ginibre column, hence uniform on the unit sphere of H^n.
    """
    g = normals(seed, stream, start, stop, 4 * n * n).reshape(-1, n, n, 4)
    return gram_schmidt_columns(g)


def haar_first_column(n: int, seed: int, start: int, stop: int, stream: int = STREAM_SPN) -> np.ndarray:
    """First columns of :func:`haar_spn` samples without the completion."""
    g = normals(seed, stream, start, stop, 4 * n * n).reshape(-1, n, n, 4)[:, :, 0, :]
    return g / np.sqrt(np.sum(g * g, axis=(1, 2)))[:, None, None]


def haar_sp(n: int, seed: int, start: int, stop: int):
    """Samples of K = Sp(n) x Sp(1) as (u, q) arrays."""
    return haar_spn(n, seed, start, stop), haar_sp1(seed, start, stop)


def chunks(total: int, size: int):
    """Fixed chunk boundaries aligned to the counter blocks."""
    size = max(BLOCK, (size // BLOCK) * BLOCK)
    for lo in range(0, total, size):
        yield lo, min(total, lo + size)
