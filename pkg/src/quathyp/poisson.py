"""Spherical functions as operators, Poisson transforms and ball averages.

Sections of the bundle are V_nu-valued functions on G with
F(gk) = tau_nu(k)^{-1} F(g); boundary sections are functions on K with the
matching M-covariance.  Ball averages

    (1/R) int_{B(R)} ||F||^2 = (1/R) int_K int_0^R ||F(k a_t)||^2 Delta(t) dt dk

use Gauss panels in t and Haar samples in K.  For the two integrands that
matter (Poisson transforms of generators and their difference with the
asymptotic profile) the K-integral reduces to a uniform point on the
sphere of H^n and runs through the compiled kernels.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import kernels
from . import quat as Q
from .errors import DegenerateRadius, DimensionMismatch
from .group import (
    T_MIN,
    GroupContext,
    GroupElement,
    KElement,
    cartan,
    cartan_radius,
    iwasawa_arrays,
    make_at,
    scaled_density,
)
from .numerics import (
    MCConfig,
    chunks,
    haar_first_column,
    haar_sp,
    mean_and_stderr,
    radial_rule,
)
from .reps import BundleWeight, RepVector, as_weight, matrix_coefficient_poly, tau_array, tau_inv_apply
from .specfun import c_nu, phi_nu, phi_nu_scaled

TABLE_STEP = 0.01
DEFAULT_RADII = (5.0, 10.0, 20.0, 40.0)


def _vec(nu: BundleWeight, v) -> np.ndarray:
    c = v.coords if isinstance(v, RepVector) else np.asarray(v, dtype=complex).reshape(-1)
    if c.size != nu.dim:
        raise DimensionMismatch(f"vector of length {c.size} for nu={nu.nu}")
    return np.asarray(c, dtype=complex)


def _inverse_bottom_row(g: GroupElement):
    """(c', d') of g^{-1}: shapes (n, 4) and (4,)."""
    gi = g.inverse()
    return np.array(gi.c), np.array(gi.d)


def _row_times_column(row, col):
    """sum_i row_i col_i for row (n, 4) and batched columns (..., n, 4)."""
    return np.sum(Q.qmul(row, col), axis=-2)


# -------------------------------------------------------- spherical function


def spherical_apply_batch(ctx: GroupContext, nu, lam, mats, v) -> np.ndarray:
    """Phi_{nu,l}(y) v for a batch of group matrices (..., n+1, n+1, 4)."""
    w = as_weight(nu)
    mats = np.asarray(mats, dtype=float)
    d = mats[..., ctx.n, ctx.n, :]
    t = cartan_radius(d)
    unit = d / Q.qabs(d)[..., None]
    phi = np.asarray(phi_nu(ctx, w.nu, lam, t))
    vv = np.broadcast_to(_vec(w, v), d.shape[:-1] + (w.dim,))
    return phi[..., None] * tau_inv_apply(unit, vv, w.nu)


def spherical_apply(ctx: GroupContext, nu, lam, y: GroupElement, v) -> RepVector:
    """Phi_{nu,l}(y) v = phi_{nu,l}(A+(y)) tau_nu(w(y))^{-1} v with w(y) = d/|d|."""
    w = as_weight(nu)
    return RepVector(w, spherical_apply_batch(ctx, w, lam, y.array, v))


# --------------------------------------------------------- boundary data


@dataclass(frozen=True)
class BoundarySection:
    """M-covariant V_nu-valued function on K.

    ``batch`` maps arrays u (N, n, n, 4), q (N, 4) to values (N, nu+1).
    ``terms`` lists (coefficient, g, lambda, v) when the section is a finite
    combination of generators, which is what the intertwiner acts on.
    """

    ctx: GroupContext
    nu: BundleWeight
    batch: Callable
    description: str = "section"
    terms: tuple = ()

    def __call__(self, k: KElement) -> RepVector:
        return RepVector(self.nu, self.batch(k.u[None], k.q[None])[0])

    def __add__(self, other: "BoundarySection") -> "BoundarySection":
        return _combine([(1.0, self), (1.0, other)])

    def scale(self, a: complex) -> "BoundarySection":
        return _combine([(a, self)])


def _combine(parts) -> BoundarySection:
    first = parts[0][1]

    def batch(u, q):
        return sum(a * s.batch(u, q) for a, s in parts)

    terms = tuple((a * c, g, lam, v) for a, s in parts for c, g, lam, v in s.terms)
    if any(not s.terms for _, s in parts):
        terms = ()
    return BoundarySection(first.ctx, first.nu, batch, "finite combination", terms)


def _generator_batch(ctx, nu, lam, g, v):
    cp, dp = _inverse_bottom_row(g)
    rho = ctx.rho
    vec = _vec(nu, v)

    def batch(u, q):
        u = np.asarray(u, dtype=float)
        q = np.asarray(q, dtype=float)
        c1 = _row_times_column(cp, u[..., :, 0, :])
        d = Q.qmul(dp, q)
        h, vk = iwasawa_arrays(c1, d)
        vals = tau_inv_apply(vk, np.broadcast_to(vec, vk.shape[:-1] + (nu.dim,)), nu.nu)
        return np.exp((1j * lam - rho) * h)[..., None] * vals

    return batch


def boundary_generator(ctx: GroupContext, nu, lam, g: GroupElement, v) -> BoundarySection:
    """f(k) = e^{(i l - rho) H(g^{-1} k)} tau_nu(kappa(g^{-1} k))^{-1} v."""
    w = as_weight(nu)
    vec = _vec(w, v)
    return BoundarySection(
        ctx, w, _generator_batch(ctx, w, lam, g, vec), f"generator(lambda={lam})", ((1.0, g, lam, vec),)
    )


def intertwiner(f: BoundarySection) -> BoundarySection:
    """U_l on generators and their combinations: generator(g, l, v) -> generator(g, -l, v)."""
    if not f.terms:
        raise ValueError("the intertwiner is only available on combinations of generators")
    parts = [(c, boundary_generator(f.ctx, f.nu, -lam, g, v)) for c, g, lam, v in f.terms]
    return _combine(parts)


def random_m(n: int, rng: np.random.Generator) -> KElement:
    """Random element of M, the centraliser of A in K: u = diag(q, u'), Sp(1) part q."""
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    u = np.zeros((n, n, 4))
    u[0, 0] = q
    if n > 1:
        u[1:, 1:] = Q.gram_schmidt_columns(rng.standard_normal((n - 1, n - 1, 4)))
    return KElement(u, q)


def l2_norm_sq(f: BoundarySection, mc: MCConfig = MCConfig()):
    """int_K ||f(k)||^2 dk by Haar Monte Carlo; returns (mean, stderr)."""
    vals = []
    for lo, hi in chunks(mc.k_samples, 1 << 15):
        u, q = haar_sp(f.ctx.n, mc.seed, lo, hi)
        vals.append(np.sum(np.abs(f.batch(u, q)) ** 2, axis=-1))
    m, se = mean_and_stderr(np.concatenate(vals))
    return float(m), float(se)


# -------------------------------------------------------------- sections


@dataclass(frozen=True)
class Section:
    """Right-K-covariant V_nu-valued function on G.

    ``batch`` evaluates on an array of group matrices (..., n+1, n+1, 4).
    ``kernel`` optionally describes the section to the compiled ball
    averages.
    """

    ctx: GroupContext
    nu: BundleWeight
    batch: Callable
    kernel: Optional[tuple] = None
    description: str = "section"

    def __call__(self, x: GroupElement) -> RepVector:
        return RepVector(self.nu, self.batch(x.array))


def poisson_generator(ctx: GroupContext, nu, lam, g: GroupElement, v) -> Section:
    """x -> Phi_{nu,l}(g^{-1} x) v, the Poisson transform of generator(g, l, v)."""
    w = as_weight(nu)
    vec = _vec(w, v)
    gi = g.inverse().array

    def batch(mats):
        return spherical_apply_batch(ctx, w, lam, Q.qmatmul(gi, np.asarray(mats, dtype=float)), vec)

    return Section(ctx, w, batch, ("spherical", g, lam, vec), f"poisson_generator(lambda={lam})")


def radial_section(ctx: GroupContext, nu, v, rate: Optional[float] = None) -> Section:
    """x -> e^{-rate A+(x)} tau_nu(w(x))^{-1} v; rate defaults to rho."""
    w = as_weight(nu)
    vec = _vec(w, v)
    rate = ctx.rho if rate is None else rate

    def batch(mats):
        d = np.asarray(mats, dtype=float)[..., ctx.n, ctx.n, :]
        unit = d / Q.qabs(d)[..., None]
        vals = tau_inv_apply(unit, np.broadcast_to(vec, d.shape[:-1] + (w.dim,)), w.nu)
        return np.exp(-rate * cartan_radius(d))[..., None] * vals

    return Section(ctx, w, batch, None, "radial")


def zero_section(ctx: GroupContext, nu) -> Section:
    w = as_weight(nu)
    return Section(ctx, w, lambda m: np.zeros(np.asarray(m).shape[:-3] + (w.dim,), dtype=complex), None, "zero")


def poisson_quadrature(ctx: GroupContext, nu, lam, f: BoundarySection, g: GroupElement, mc: MCConfig = MCConfig()):
    """Monte-Carlo Poisson transform int_K e^{-(i l + rho) H(g^{-1}k)} tau(kappa(g^{-1}k)) f(k) dk.

    Returns (RepVector, stderr array per component).
    """
    w = as_weight(nu)
    cp, dp = _inverse_bottom_row(g)
    vals = []
    for lo, hi in chunks(mc.k_samples, 1 << 15):
        u, q = haar_sp(ctx.n, mc.seed, lo, hi)
        h, vk = iwasawa_arrays(_row_times_column(cp, u[..., :, 0, :]), Q.qmul(dp, q))
        fk = f.batch(u, q)
        tk = np.einsum("...ij,...j->...i", tau_array(vk, w.nu, check=False), fk)
        vals.append(np.exp(-(1j * lam + ctx.rho) * h)[:, None] * tk)
    mean, se = mean_and_stderr(np.concatenate(vals))
    return RepVector(w, mean), np.asarray(se)


def translated_spherical_quadrature(ctx: GroupContext, nu, lam, x: GroupElement, y: GroupElement, v, mc: MCConfig = MCConfig()):
    """Right side of Phi(x^{-1} y) v = int_K e^{-(il+rho)H(y^{-1}k)} e^{(il-rho)H(x^{-1}k)} tau(kappa(y^{-1}k)) tau(kappa(x^{-1}k))^{-1} v dk."""
    return poisson_quadrature(ctx, nu, lam, boundary_generator(ctx, nu, lam, x, v), y, mc)


# ------------------------------------------------------- asymptotic profile


def asymptotic_profile(
    ctx: GroupContext,
    nu,
    lam,
    f: BoundarySection,
    Uf: BoundarySection,
    x: GroupElement,
    m: Optional[KElement] = None,
) -> RepVector:
    """tau(k2)^{-1}[c(l) e^{(il-rho)t} f(k1) + c(-l) e^{(-il-rho)t} Uf(k1)] with x = k1 a_t k2.

    ``m`` in M replaces the gauge-fixed (k1, k2) by (k1 m, m^{-1} k2); the
    value does not depend on it.
    """
    w = as_weight(nu)
    data = cartan(x)
    if data.t < T_MIN:
        raise DegenerateRadius(f"Cartan radius {data.t:.3e} below t_min={T_MIN}")
    k1, k2 = data.require_components()
    if m is not None:
        k1, k2 = k1 * m, m.inverse() * k2
    t = data.t
    val = c_nu(ctx, w.nu, lam) * np.exp((1j * lam - ctx.rho) * t) * f(k1).coords
    val = val + c_nu(ctx, w.nu, -lam) * np.exp((-1j * lam - ctx.rho) * t) * Uf(k1).coords
    return RepVector(w, tau_inv_apply(k2.q, val, w.nu))


def key_lemma_section(ctx: GroupContext, nu, lam, g: GroupElement, v) -> Section:
    """x -> Phi(g^{-1} x) v - S_l f(x) for f = generator(g, l, v)."""
    w = as_weight(nu)
    vec = _vec(w, v)
    P = poisson_generator(ctx, w, lam, g, vec)
    f = boundary_generator(ctx, w, lam, g, vec)
    Uf = intertwiner(f)

    def batch(mats):
        mats = np.asarray(mats, dtype=float)
        flat = mats.reshape((-1,) + mats.shape[-3:])
        out = np.empty((flat.shape[0], w.dim), dtype=complex)
        for i, mm in enumerate(flat):
            x = GroupElement(ctx, mm, tol=None)
            out[i] = P.batch(mm) - asymptotic_profile(ctx, w, lam, f, Uf, x).coords
        return out.reshape(mats.shape[:-3] + (w.dim,))

    return Section(ctx, w, batch, ("keylemma", g, lam, vec), f"key_lemma(lambda={lam})")


# ----------------------------------------------------------- ball averages


@dataclass(frozen=True)
class BallAverageReport:
    radii: np.ndarray
    values: np.ndarray
    stderrs: np.ndarray
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if np.any(np.diff(r) <= 0):
            raise ValueError("radii must increase")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite ball average")

    @property
    def extrapolated_limit(self) -> float:
        """Value at the largest radius; no extrapolation is attempted."""
        return float(self.values[-1])

    @property
    def stderr(self) -> float:
        return float(self.stderrs[-1])

    @property
    def sup_value(self) -> float:
        return float(np.max(self.values))

    def to_csv(self, fh=None) -> Optional[str]:
        buf = fh if fh is not None else io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["R", "value", "stderr"])
        for r, v, s in zip(self.radii, self.values, self.stderrs):
            w.writerow([repr(float(r)), repr(float(v)), repr(float(s))])
        return None if fh is not None else buf.getvalue()


def phi_table(ctx: GroupContext, nu, lam, s_max: float, step: float = TABLE_STEP):
    """e^{rho s} phi_{nu,l}(s) and its derivative on a uniform grid [0, s_max]."""
    npts = int(np.ceil(s_max / step)) + 2
    s = step * np.arange(npts)
    vals = np.asarray(phi_nu_scaled(ctx, as_weight(nu).nu, lam, s), dtype=complex)
    der = CubicSpline(s, vals)(s, 1)
    return np.ascontiguousarray(vals), np.ascontiguousarray(der, dtype=complex), step


def _sample_alpha(ctx, cp, mc, lo, hi):
    xi = haar_first_column(ctx.n, mc.seed, lo, hi)
    return np.ascontiguousarray(_row_times_column(cp, xi))


def _kernel_average(ctx, F: Section, radii, mc: MCConfig, backend=None):
    kind, g, lam, vec = F.kernel
    impl = backend or kernels
    cp, dp = _inverse_bottom_row(g)
    t, w, cut = radial_rule(radii, mc.panel_points, mc.t_panel_width)
    wt = np.ascontiguousarray(w * scaled_density(ctx, t))
    reach = float(cartan_radius(g.d))
    tab, dtab, h = phi_table(ctx, F.nu, lam, float(radii[-1]) + reach + 0.1)
    cut = np.ascontiguousarray(cut, dtype=np.int64)
    extra = ()
    if kind == "keylemma":
        nu = F.nu.nu
        exps, coefs = matrix_coefficient_poly(vec, nu)
        vv = float(np.sum(np.abs(vec) ** 2))
        extra = (float(lam), c_nu(ctx, nu, lam), c_nu(ctx, nu, -lam), vv, nu, exps, np.ascontiguousarray(coefs))
    # a K-invariant integrand (c' = 0) needs a single sample
    total = 1 if np.all(cp == 0) else mc.k_samples
    per = []
    for lo, hi in chunks(total, 1 << 14):
        alpha = _sample_alpha(ctx, cp, mc, lo, hi)
        if kind == "spherical":
            out = impl.ball_norm(alpha, dp, t, wt, tab, dtab, h, ctx.rho, cut)
            out = out * float(np.sum(np.abs(vec) ** 2))
        else:
            out = impl.key_lemma(alpha, dp, t, wt, tab, dtab, h, ctx.rho, cut, *extra)
        per.append(out)
    per = np.concatenate(per)
    mean, se = mean_and_stderr(per)
    if total == 1:
        se = np.zeros_like(mean)
    return mean, se


def _generic_average(ctx, F: Section, radii, mc: MCConfig):
    t, w, cut = radial_rule(radii, mc.panel_points, mc.t_panel_width)
    wt = w * scaled_density(ctx, t)
    at = np.stack([make_at(ctx, s).array for s in t])
    per = []
    for lo, hi in chunks(mc.k_samples, 256):
        u, q = haar_sp(ctx.n, mc.seed, lo, hi)
        k = np.zeros((hi - lo, ctx.n + 1, ctx.n + 1, 4))
        k[:, : ctx.n, : ctx.n] = u
        k[:, ctx.n, ctx.n] = q
        x = Q.qmatmul(k[:, None], at[None, :])
        vals = np.sum(np.abs(F.batch(x)) ** 2, axis=-1) * np.exp(2.0 * ctx.rho * t)[None, :] * wt[None, :]
        per.append(np.cumsum(vals, axis=1)[:, cut - 1])
    return mean_and_stderr(np.concatenate(per))


def ball_average(ctx: GroupContext, F: Section, radii: Sequence[float] = DEFAULT_RADII, mc: MCConfig = MCConfig(), backend=None) -> BallAverageReport:
    """(1/R) int_{B(R)} ||F||^2 for each R, with Monte-Carlo standard errors."""
    radii = np.asarray(radii, dtype=float)
    if F.kernel is not None:
        mean, se = _kernel_average(ctx, F, radii, mc, backend)
    else:
        mean, se = _generic_average(ctx, F, radii, mc)
    cfg = {"n": ctx.n, "nu": F.nu.nu, "section": F.description, **mc.as_dict()}
    return BallAverageReport(radii, np.asarray(mean) / radii, np.asarray(se) / radii, cfg)


def key_lemma_defect(ctx: GroupContext, nu, lam, g: GroupElement, v, radii: Sequence[float] = DEFAULT_RADII, mc: MCConfig = MCConfig()) -> BallAverageReport:
    """Ball average of Phi(g^{-1} x) v minus the asymptotic profile of generator(g, l, v)."""
    return ball_average(ctx, key_lemma_section(ctx, nu, lam, g, v), radii, mc)


def poisson_norm_limit(ctx: GroupContext, nu, lam, v) -> float:
    """2 |c_nu(l)|^2 ||v||^2, the large-R limit of the ball average of a generator's transform."""
    w = as_weight(nu)
    return 2.0 * abs(c_nu(ctx, w.nu, lam)) ** 2 * float(np.sum(np.abs(_vec(w, v)) ** 2))


def remainder_exponent(ctx: GroupContext, nu, lam, t_lo: float = 1.0, t_hi: float = 10.0, points: int = 200):
    """Fit |phi_nu - sum_s c(sl) e^{(isl - rho)t}| <= C e^{-beta t} over [t_lo, t_hi].

    The remainder oscillates, so the fit uses the running envelope: the log
    of the maximum over each unit window, regressed against the window
    centre.  Returns (beta, C).
    """
    w = as_weight(nu)
    edges = np.arange(t_lo, t_hi + 1e-9, 1.0)
    centres, logs = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        t = np.linspace(a, b, points)
        scaled = np.asarray(phi_nu_scaled(ctx, w.nu, lam, t))
        asym = c_nu(ctx, w.nu, lam) * np.exp(1j * lam * t) + c_nu(ctx, w.nu, -lam) * np.exp(-1j * lam * t)
        rem = np.abs(scaled - asym) * np.exp(-ctx.rho * t)
        i = int(np.argmax(rem))
        centres.append(t[i])
        logs.append(np.log(rem[i]))
    slope, icpt = np.polyfit(centres, logs, 1)
    return float(-slope), float(np.exp(icpt))
