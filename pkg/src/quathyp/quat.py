"""Quaternion scalars, vectors and matrices.

Quaternions are stored as float arrays with a trailing axis of length 4
holding the coefficients of 1, i, j, k.  Matrices are arrays of shape
``(rows, cols, 4)``.  The column space H^m is a *right* H-module, so a
scalar multiplies a vector from the right: ``v * q`` means ``v_i q``.

Matrix products go through the complex 2x2 realisation
``q -> [[w + x i, y + z i], [-y + z i, w - x i]]``, which is an injective
ring homomorphism, so one complex matmul replaces the quaternion loops.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, RankDeficient

# ---------------------------------------------------------------- arrays


def qmul(p, q):
    """Hamilton product of broadcastable quaternion arrays."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pw, px, py, pz = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    qw, qx, qy, qz = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


def qconj(q):
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qabs(q):
    return np.linalg.norm(np.asarray(q, dtype=float), axis=-1)


def qinv(q):
    q = np.asarray(q, dtype=float)
    return qconj(q) / np.sum(q * q, axis=-1, keepdims=True)


def qnormalize(q):
    q = np.asarray(q, dtype=float)
    return q / qabs(q)[..., None]


def qone(shape=()):
    out = np.zeros(tuple(shape) + (4,))
    out[..., 0] = 1.0
    return out


def to_complex(q):
    """Complex 2x2 image of quaternion arrays, shape (..., 2, 2)."""
    q = np.asarray(q, dtype=float)
    a = q[..., 0] + 1j * q[..., 1]
    b = q[..., 2] + 1j * q[..., 3]
    out = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = a
    out[..., 0, 1] = b
    out[..., 1, 0] = -b.conj()
    out[..., 1, 1] = a.conj()
    return out


def qmat_to_complex(m):
    """(..., r, c, 4) quaternion matrices -> (..., 2r, 2c) complex."""
    m = np.asarray(m, dtype=float)
    blocks = to_complex(m)  # (..., r, c, 2, 2)
    r, c = m.shape[-3], m.shape[-2]
    blocks = np.swapaxes(blocks, -3, -2)  # (..., r, 2, c, 2)
    return blocks.reshape(m.shape[:-3] + (2 * r, 2 * c))


def complex_to_qmat(mc):
    """Inverse of :func:`qmat_to_complex` (reads the even-row blocks)."""
    mc = np.asarray(mc)
    a = mc[..., 0::2, 0::2]
    b = mc[..., 0::2, 1::2]
    return np.stack([a.real, a.imag, b.real, b.imag], axis=-1)


def qmatmul(a, b):
    """Batched quaternion matrix product, shapes (..., r, k, 4) x (..., k, c, 4)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-2] != b.shape[-3]:
        raise DimensionMismatch(f"cannot multiply {a.shape[-3:-1]} by {b.shape[-3:-1]}")
    return complex_to_qmat(qmat_to_complex(a) @ qmat_to_complex(b))


def qmat_adjoint(m):
    """Conjugate transpose of (..., r, c, 4) arrays."""
    return qconj(np.swapaxes(np.asarray(m, dtype=float), -3, -2))


def qinner(u, v):
    """Right-module inner product sum_i conj(u_i) v_i over axis -2."""
    return np.sum(qmul(qconj(u), v), axis=-2)


def gram_schmidt_columns(v, pivot_tol: float = 1e-13):
    """Batched Gram-Schmidt on columns of (..., m, m, 4) arrays.

    Projections subtract ``u <u, v>`` with the scalar on the right.
    """
    v = np.array(v, dtype=float, copy=True)
    m = v.shape[-2]
    out = np.empty_like(v)
    for j in range(m):
        col = v[..., :, j, :]
        # two passes of classical Gram-Schmidt keep the residual near eps
        for _ in range(2):
            for i in range(j):
                u = out[..., :, i, :]
                coef = qinner(u, col)
                col = col - qmul(u, coef[..., None, :])
        nrm = np.sqrt(np.sum(col * col, axis=(-2, -1)))
        if np.any(nrm < pivot_tol):
            raise RankDeficient(f"pivot norm {np.min(nrm):.3e} in column {j}")
        out[..., :, j, :] = col / nrm[..., None, None]
    return out


# ------------------------------------------------------------ value types


@dataclass(frozen=True)
class Quaternion:
    """w + x i + y j + z k."""

    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return float(np.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2))

    def inverse(self) -> "Quaternion":
        return Quaternion.from_array(qinv(self.as_array()))

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        return Quaternion.from_array(self.as_array() * float(other))

    def __rmul__(self, other):
        return Quaternion.from_array(self.as_array() * float(other))

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.as_array() - other.as_array())

    def __neg__(self) -> "Quaternion":
        return Quaternion.from_array(-self.as_array())


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product p q."""
    return Quaternion.from_array(qmul(p.as_array(), q.as_array()))


class QMatrix:
    """Quaternionic matrix backed by an array of shape (rows, cols, 4)."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 3 or a.shape[-1] != 4 or a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionMismatch(f"expected (rows, cols, 4), got {a.shape}")
        a.setflags(write=False)
        self._a = a

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        a = np.zeros((n, n, 4))
        a[np.arange(n), np.arange(n), 0] = 1.0
        return cls(a)

    @classmethod
    def from_quaternions(cls, rows) -> "QMatrix":
        return cls([[q.as_array() for q in row] for row in rows])

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    def __getitem__(self, idx) -> Quaternion:
        i, j = idx
        return Quaternion.from_array(self._a[i, j])

    def adjoint(self) -> "QMatrix":
        return QMatrix(qmat_adjoint(self._a))

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        return qmat_mul(self, other)

    def max_abs_diff(self, other: "QMatrix") -> float:
        return float(np.max(np.abs(self._a - other._a)))

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"


def qmat_mul(a: QMatrix, b: QMatrix) -> QMatrix:
    """Matrix product with quaternionic entry products in order."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"{a.rows}x{a.cols} times {b.rows}x{b.cols}")
    return QMatrix(qmatmul(a.array, b.array))


def gram_schmidt_sp(v: QMatrix, pivot_tol: float = 1e-13) -> QMatrix:
    """Orthonormalise the columns of a square matrix over H.

    The first column of the result is a positive multiple of the first
    column of ``v``.
    """
    if v.rows != v.cols:
        raise DimensionMismatch("gram_schmidt_sp needs a square matrix")
    return QMatrix(gram_schmidt_columns(v.array, pivot_tol))
