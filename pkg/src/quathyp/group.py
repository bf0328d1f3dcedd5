"""Matrix model of G = Sp(n,1) acting on the quaternionic unit ball.

A group element is an (n+1)x(n+1) quaternionic matrix m with
m* J m = J, J = diag(I_n, -1), written in blocks (a, b; c, d) with
a n x n, b a column, c a row and d a scalar.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import quat as Q
from .errors import DegenerateRadius, DimensionMismatch, NotInGroup
from .quat import QMatrix, Quaternion

T_MIN = 1e-6
FORM_TOL = 1e-9


@dataclass(frozen=True)
class GroupContext:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")

    @property
    def rho(self) -> float:
        return 2.0 * self.n + 1.0

    @property
    def J(self) -> np.ndarray:
        j = np.zeros((self.n + 1, self.n + 1, 4))
        j[np.arange(self.n + 1), np.arange(self.n + 1), 0] = 1.0
        j[self.n, self.n, 0] = -1.0
        return j


def form_residual(m) -> float:
    """max-entry norm of m* J m - J."""
    m = np.asarray(m, dtype=float)
    n1 = m.shape[-3]
    j = GroupContext(n1 - 1).J
    r = Q.qmatmul(Q.qmatmul(Q.qmat_adjoint(m), j), m) - j
    return float(np.max(np.abs(r)))


class GroupElement:
    """Element of Sp(n,1); validated against the form at construction."""

    __slots__ = ("ctx", "m")

    def __init__(self, ctx: GroupContext, m, tol: Optional[float] = FORM_TOL):
        mat = m if isinstance(m, QMatrix) else QMatrix(m)
        if mat.rows != ctx.n + 1 or mat.cols != ctx.n + 1:
            raise DimensionMismatch(f"expected {(ctx.n + 1,) * 2}, got {(mat.rows, mat.cols)}")
        if tol is not None:
            res = form_residual(mat.array)
            if res > tol:
                raise NotInGroup(f"form residual {res:.3e} exceeds {tol:.1e}")
        self.ctx = ctx
        self.m = mat

    # blocks
    @property
    def array(self) -> np.ndarray:
        return self.m.array

    @property
    def a(self) -> np.ndarray:
        return self.array[: self.ctx.n, : self.ctx.n]

    @property
    def b(self) -> np.ndarray:
        return self.array[: self.ctx.n, self.ctx.n]

    @property
    def c(self) -> np.ndarray:
        return self.array[self.ctx.n, : self.ctx.n]

    @property
    def d(self) -> np.ndarray:
        return self.array[self.ctx.n, self.ctx.n]

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.ctx, Q.qmatmul(self.array, other.array), tol=None)

    def inverse(self) -> "GroupElement":
        j = self.ctx.J
        inv = Q.qmatmul(Q.qmatmul(j, Q.qmat_adjoint(self.array)), j)
        return GroupElement(self.ctx, inv, tol=None)

    def form_residual(self) -> float:
        return form_residual(self.array)

    def origin_image(self) -> np.ndarray:
        """g.0 = b d^{-1} as an (n, 4) array."""
        return Q.qmul(self.b, Q.qinv(self.d))

    def __repr__(self) -> str:
        return f"GroupElement(n={self.ctx.n})"


def identity(ctx: GroupContext) -> GroupElement:
    return GroupElement(ctx, QMatrix.identity(ctx.n + 1).array, tol=None)


@dataclass(frozen=True)
class KElement:
    """k = (u, q) in Sp(n) x Sp(1)."""

    u: np.ndarray  # (n, n, 4)
    q: np.ndarray  # (4,)

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        q = np.array(self.q, dtype=float)
        if u.ndim != 3 or u.shape[0] != u.shape[1] or q.shape != (4,):
            raise DimensionMismatch("KElement needs u (n,n,4) and q (4,)")
        u.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.u.shape[0]

    def embed(self, ctx: Optional[GroupContext] = None) -> GroupElement:
        ctx = ctx or GroupContext(self.n)
        m = np.zeros((self.n + 1, self.n + 1, 4))
        m[: self.n, : self.n] = self.u
        m[self.n, self.n] = self.q
        return GroupElement(ctx, m, tol=None)

    def __mul__(self, other: "KElement") -> "KElement":
        return KElement(Q.qmatmul(self.u, other.u), Q.qmul(self.q, other.q))

    def inverse(self) -> "KElement":
        return KElement(Q.qmat_adjoint(self.u), Q.qconj(self.q))

    @classmethod
    def identity(cls, n: int) -> "KElement":
        return cls(QMatrix.identity(n).array, Q.qone())


def embed_k(ctx: GroupContext, k: KElement) -> GroupElement:
    return k.embed(ctx)


def make_at(ctx: GroupContext, t: float) -> GroupElement:
    """The A-flow a_t."""
    n = ctx.n
    m = np.zeros((n + 1, n + 1, 4))
    m[np.arange(n + 1), np.arange(n + 1), 0] = 1.0
    ch, sh = np.cosh(t), np.sinh(t)
    m[0, 0, 0] = ch
    m[n, n, 0] = ch
    m[0, n, 0] = sh
    m[n, 0, 0] = sh
    return GroupElement(ctx, m, tol=None)


# -------------------------------------------------------------- Iwasawa


@dataclass(frozen=True)
class IwasawaData:
    H: float
    vkappa: Quaternion


def iwasawa_arrays(c1, d):
    """Batched H and Sp(1)-part of kappa from c e_1 and d, shapes (..., 4)."""
    s = np.asarray(c1, dtype=float) + np.asarray(d, dtype=float)
    r = Q.qabs(s)
    return np.log(r), s / r[..., None]


def iwasawa(g: GroupElement) -> IwasawaData:
    """H(g) = log|c e_1 + d| and vkappa = (c e_1 + d)/|c e_1 + d|."""
    h, vk = iwasawa_arrays(g.c[0], g.d)
    return IwasawaData(float(h), Quaternion.from_array(vk))


# --------------------------------------------------------------- Cartan


@dataclass(frozen=True)
class CartanData:
    t: float
    w: Quaternion
    k1: Optional[KElement] = None
    k2: Optional[KElement] = None

    def require_components(self):
        if self.k1 is None or self.k2 is None:
            raise DegenerateRadius(f"Cartan radius {self.t:.3e} below t_min={T_MIN}")
        return self.k1, self.k2


def cartan_radius(d) -> np.ndarray:
    """arccosh|d|, clipped at 0 for rounding below 1."""
    return np.arccosh(np.maximum(Q.qabs(d), 1.0))


def _complete_unitary(col: np.ndarray) -> np.ndarray:
    """Sp(n) matrix whose first column is the unit vector ``col`` (n, 4)."""
    n = col.shape[0]
    v = np.zeros((n, n, 4))
    v[:, 0] = col
    # fill with the standard basis vectors least aligned with col
    order = np.argsort(-Q.qabs(col), kind="stable")
    fill = sorted(order[1:].tolist())
    for j, e in enumerate(fill, start=1):
        v[e, j, 0] = 1.0
    return Q.gram_schmidt_columns(v)


def cartan(g: GroupElement, t_min: float = T_MIN) -> CartanData:
    """Cartan radius, Sp(1)-part w = d/|d|, and gauge-fixed components.

    Gauge: k2.q = 1 and k1.q = w.  k1's first column is b/sinh t, the rest
    comes from Gram-Schmidt, and u2 is solved from the top-left block.
    """
    ctx = g.ctx
    n = ctx.n
    dabs = float(Q.qabs(g.d))
    t = float(cartan_radius(g.d))
    w = g.d / dabs
    if t < t_min:
        return CartanData(t, Quaternion.from_array(w))
    sh, ch = np.sinh(t), np.cosh(t)
    col = g.b / sh
    col = col / np.sqrt(np.sum(col * col))
    u1 = _complete_unitary(col)
    k1 = KElement(u1, w)
    ainv = np.ones(n)
    ainv[0] = 1.0 / ch
    u2 = ainv[:, None, None] * Q.qmatmul(Q.qmat_adjoint(u1), g.a)
    if n == 1:
        # first row of u2 also follows from c; average the two for symmetry
        alt = Q.qmul(Q.qconj(w), g.c) / sh
        u2 = 0.5 * (u2 + alt[None, :, :])
    u2 = Q.gram_schmidt_columns(u2)
    k2 = KElement(u2, Q.qone())
    return CartanData(t, Quaternion.from_array(w), k1, k2)


def reassemble(ctx: GroupContext, data: CartanData) -> GroupElement:
    k1, k2 = data.require_components()
    return k1.embed(ctx) @ make_at(ctx, data.t) @ k2.embed(ctx)


# --------------------------------------------------------- ball and measure


def ball_action(g: GroupElement, x) -> np.ndarray:
    """(a x + b)(c x + d)^{-1} for x of shape (n, 4) with |x| < 1."""
    x = np.asarray(x, dtype=float)
    if np.sqrt(np.sum(x * x)) >= 1.0:
        raise ValueError("point must lie in the open unit ball")
    num = np.sum(Q.qmul(g.a, x[None, :, :]), axis=1) + g.b
    den = np.sum(Q.qmul(g.c, x), axis=0) + g.d
    return Q.qmul(num, Q.qinv(den)[None, :])


def density(ctx: GroupContext, t):
    """Radial density (2 sinh t)^{4n-1} (2 cosh t)^3 of the polar formula."""
    t = np.asarray(t, dtype=float)
    return (2.0 * np.sinh(t)) ** (4 * ctx.n - 1) * (2.0 * np.cosh(t)) ** 3


def scaled_density(ctx: GroupContext, t):
    """e^{-2 rho t} times the density, computed without overflow."""
    t = np.asarray(t, dtype=float)
    x = np.exp(-2.0 * t)
    return (1.0 - x) ** (4 * ctx.n - 1) * (1.0 + x) ** 3


# ------------------------------------------------------------------ gap


def gap_bound(g: GroupElement, t) -> np.ndarray:
    r = float(np.sqrt(np.sum(g.origin_image() ** 2)))
    return (1.0 + r) / (1.0 - r) * np.exp(-2.0 * np.asarray(t, dtype=float))


def gap(g: GroupElement, k: KElement, t: float) -> float:
    """A+(y) - H(y) for y = g^{-1} k a_t.

    Computed as one logarithm of a ratio so the small difference does not
    suffer cancellation at large t.
    """
    y = g.inverse() @ k.embed(g.ctx) @ make_at(g.ctx, t)
    dabs = float(Q.qabs(y.d))
    s = float(Q.qabs(y.c[0] + y.d))
    top = dabs + np.sqrt(max(dabs * dabs - 1.0, 0.0))
    return float(np.log(top / s))


# ------------------------------------------------------------- sampling


def random_k(n: int, rng: np.random.Generator) -> KElement:
    g = rng.standard_normal((n, n, 4))
    q = rng.standard_normal(4)
    return KElement(Q.gram_schmidt_columns(g), q / np.linalg.norm(q))


def random_element(ctx: GroupContext, rng: np.random.Generator, t_max: float = 2.0) -> GroupElement:
    """k a_t k' with Haar-random k, k' and t uniform on [0, t_max]."""
    k1 = random_k(ctx.n, rng)
    k2 = random_k(ctx.n, rng)
    t = rng.uniform(0.0, t_max)
    return k1.embed(ctx) @ make_at(ctx, t) @ k2.embed(ctx)


def element_with_origin_radius(ctx: GroupContext, r: float, rng: np.random.Generator) -> GroupElement:
    """Random element with |g.0| = r (0 <= r < 1)."""
    t = np.arctanh(r)
    return random_k(ctx.n, rng).embed(ctx) @ make_at(ctx, t) @ random_k(ctx.n, rng).embed(ctx)
