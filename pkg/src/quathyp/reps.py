"""The (nu+1)-dimensional irreducible representations tau_nu of Sp(1).

tau_nu is the nu-th symmetric power of q -> [[w + x i, y + z i],
[-y + z i, w - x i]] in the orthonormal monomial basis
e_j = sqrt(C(nu, j)) x1^(nu-j) x2^j.  Elements of K = Sp(n) x Sp(1) act
through their Sp(1) factor only.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import quat as Q
from .errors import NonUnitQuaternion

UNIT_TOL = 1e-10


@dataclass(frozen=True)
class BundleWeight:
    nu: int

    def __post_init__(self):
        if int(self.nu) != self.nu or self.nu < 0:
            raise ValueError("nu must be a nonnegative integer")

    @property
    def dim(self) -> int:
        return self.nu + 1


def as_weight(nu) -> BundleWeight:
    return nu if isinstance(nu, BundleWeight) else BundleWeight(int(nu))


@dataclass(frozen=True)
class RepVector:
    nu: BundleWeight
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=complex).reshape(-1)
        if c.size != self.nu.dim:
            raise ValueError(f"need {self.nu.dim} coordinates, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))


@dataclass(frozen=True)
class RepMatrix:
    nu: BundleWeight
    entries: np.ndarray

    def __matmul__(self, other):
        if isinstance(other, RepMatrix):
            return RepMatrix(self.nu, self.entries @ other.entries)
        if isinstance(other, RepVector):
            return RepVector(self.nu, self.entries @ other.coords)
        return self.entries @ other

    def adjoint(self) -> "RepMatrix":
        return RepMatrix(self.nu, self.entries.conj().T)


def _check_unit(q):
    dev = np.abs(Q.qabs(q) - 1.0)
    if np.any(dev > UNIT_TOL):
        raise NonUnitQuaternion(f"|q| deviates from 1 by {np.max(dev):.3e}")


def _poly_powers(a, c, m):
    """Coefficients of (a + c y)^k for k = 0..m, each of shape (..., k+1)."""
    out = [np.ones(a.shape + (1,), dtype=complex)]
    for _ in range(m):
        prev = out[-1]
        nxt = np.zeros(a.shape + (prev.shape[-1] + 1,), dtype=complex)
        nxt[..., :-1] += a[..., None] * prev
        nxt[..., 1:] += c[..., None] * prev
        out.append(nxt)
    return out


def tau_array(q, nu: int, check: bool = True) -> np.ndarray:
    """Batched tau_nu(q) for q of shape (..., 4); returns (..., nu+1, nu+1)."""
    q = np.asarray(q, dtype=float)
    if check:
        _check_unit(q)
    u = Q.to_complex(q)
    a, b, c, d = u[..., 0, 0], u[..., 0, 1], u[..., 1, 0], u[..., 1, 1]
    pa = _poly_powers(a, c, nu)
    pb = _poly_powers(b, d, nu)
    out = np.zeros(q.shape[:-1] + (nu + 1, nu + 1), dtype=complex)
    for k in range(nu + 1):
        left, right = pa[nu - k], pb[k]
        col = np.zeros(q.shape[:-1] + (nu + 1,), dtype=complex)
        for i in range(left.shape[-1]):
            col[..., i : i + right.shape[-1]] += left[..., i : i + 1] * right
        out[..., :, k] = col
    binom = np.array([comb(nu, j) for j in range(nu + 1)], dtype=float)
    scale = np.sqrt(binom[None, :] / binom[:, None])
    return out * scale


def tau_inv_apply(q, v, nu: int) -> np.ndarray:
    """tau_nu(q)^{-1} v for batches of unit quaternions (..., 4) and v (..., nu+1)."""
    t = tau_array(Q.qconj(q), nu, check=False)
    return np.einsum("...ij,...j->...i", t, np.asarray(v, dtype=complex))


def tau_matrix(nu, q) -> RepMatrix:
    """tau_nu(q) as a unitary (nu+1)x(nu+1) matrix."""
    w = as_weight(nu)
    arr = q.as_array() if isinstance(q, Q.Quaternion) else np.asarray(q, dtype=float)
    return RepMatrix(w, tau_array(arr, w.nu))


def monomial_exponents(deg: int) -> np.ndarray:
    """Exponent rows (e0, e1, e2, e3) of the degree-``deg`` monomials in 4 variables."""
    rows = [
        (a, b, c, deg - a - b - c)
        for a in range(deg, -1, -1)
        for b in range(deg - a, -1, -1)
        for c in range(deg - a - b, -1, -1)
    ]
    return np.array(rows, dtype=np.int64).reshape(-1, 4)


def matrix_coefficient_poly(v, nu: int, seed: int = 0):
    """<tau_nu(p) v, v> as a homogeneous polynomial in the components of p.

    Entries of tau_nu(p) are homogeneous of degree nu in (w, x, y, z), and
    such polynomials are determined by their values anywhere, so the
    coefficients follow from a least-squares fit on random points.
    Returns (exponents, coefficients).
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    exps = monomial_exponents(nu)
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((4 * len(exps) + 8, 4))
    vals = np.einsum("i,...ij,j->...", v.conj(), tau_array(pts, nu, check=False), v)
    design = np.prod(pts[:, None, :] ** exps[None, :, :], axis=-1)
    coefs, *_ = np.linalg.lstsq(design.astype(complex), vals, rcond=None)
    return exps, coefs


def character(nu, q) -> float:
    """chi_nu(q) = trace tau_nu(q); real and depends only on Re q."""
    m = tau_matrix(nu, q).entries
    return float(np.real(np.trace(m)))


def character_array(q, nu: int) -> np.ndarray:
    return np.real(np.trace(tau_array(q, nu), axis1=-2, axis2=-1))
