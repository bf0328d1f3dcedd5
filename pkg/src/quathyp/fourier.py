"""Helgason-Fourier transform of compactly supported sections.

All G-integrals are written in polar form

    int_G h(x) dx = int_K int_0^R h(k' a_t) Delta(t) dt dk'

with Gauss panels in t and Haar samples k' = (u', q').  The integrands only
need the bottom row of x^{-1} = a_{-t} k'^{-1}, which is
(-sinh t conj(u'_{i1}), cosh t conj(q')), so no group matrices are formed
unless the section itself needs them.

For tau-radial sections F(k1 a_t k2) = f(t) tau(k2)^{-1} tau(k1)^{-1} v the
transform collapses to the scalar transform H_nu f, which gives closed forms
for slices, spectral projections, Plancherel and inversion.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import quat as Q
from .errors import SpectralPole
from .group import GroupContext, GroupElement, KElement, cartan_radius, density, identity, iwasawa_arrays
from .jacobi import (
    RadialProfile,
    discrete_Dnu,
    h_nu,
    jacobi_inverse,
    lambda_rule,
    plancherel_density,
    t_rule,
)
from .numerics import MCConfig, chunks, haar_sp, mean_and_stderr, pairwise_sum, panel_rule
from .poisson import Section, _vec, ball_average, poisson_generator
from .reps import BundleWeight, RepVector, as_weight, tau_inv_apply
from .specfun import c_nu, nu_params, phi_nu

SUB_CHUNK = 1024  # Haar samples per vectorised block
STREAM_OUTER = 7  # random stream for the K-points of restriction integrals
CANDIDATE_CONSTANTS = {"1/(2pi)": 1.0 / (2.0 * np.pi), "1/pi": 1.0 / np.pi}


# ------------------------------------------------------------ sections


@dataclass(frozen=True)
class CompactSection:
    """Section vanishing outside the ball of radius ``support_radius``.

    ``profile`` and ``vector`` are set for tau-radial sections
    x -> f(A+(x)) tau(w(x))^{-1} v and enable the closed forms.
    """

    base: Section
    support_radius: float
    profile: Optional[RadialProfile] = None
    vector: Optional[np.ndarray] = None

    @property
    def ctx(self) -> GroupContext:
        return self.base.ctx

    @property
    def nu(self) -> BundleWeight:
        return self.base.nu

    @property
    def is_radial(self) -> bool:
        return self.profile is not None

    def __call__(self, x: GroupElement) -> RepVector:
        return self.base(x)

    def scale(self, a: complex) -> "CompactSection":
        base = Section(self.ctx, self.nu, lambda m: a * self.base.batch(m), None, f"{a}*{self.base.description}")
        vec = None if self.vector is None else a * self.vector
        return CompactSection(base, self.support_radius, self.profile, vec)

    def __add__(self, other: "CompactSection") -> "CompactSection":
        base = Section(
            self.ctx, self.nu, lambda m: self.base.batch(m) + other.base.batch(m), None, "sum"
        )
        radius = max(self.support_radius, other.support_radius)
        if self.profile is not None and self.profile is other.profile:
            return CompactSection(base, radius, self.profile, self.vector + other.vector)
        return CompactSection(base, radius)


def spherical_bump_section(ctx: GroupContext, nu, profile: RadialProfile, v) -> CompactSection:
    """tau-radial section x -> f(A+(x)) tau(w(x))^{-1} v with w(x) = d/|d|."""
    w = as_weight(nu)
    vec = _vec(w, v)

    def batch(mats):
        d = np.asarray(mats, dtype=float)[..., ctx.n, ctx.n, :]
        unit = d / Q.qabs(d)[..., None]
        vals = tau_inv_apply(unit, np.broadcast_to(vec, d.shape[:-1] + (w.dim,)), w.nu)
        return profile(cartan_radius(d))[..., None] * vals

    base = Section(ctx, w, batch, None, "spherical_bump")
    return CompactSection(base, float(profile.support_radius), profile, vec)


def zero_compact_section(ctx: GroupContext, nu, support_radius: float = 1.0) -> CompactSection:
    w = as_weight(nu)
    base = Section(ctx, w, lambda m: np.zeros(np.asarray(m).shape[:-3] + (w.dim,), dtype=complex), None, "zero")
    return CompactSection(base, support_radius, RadialProfile(support_radius, func=np.zeros_like), np.zeros(w.dim, complex))


# ------------------------------------------------------- polar sampling


def _polar_rule(ctx: GroupContext, F: CompactSection, mc: MCConfig):
    t, w, _ = panel_rule(0.0, F.support_radius, mc.panel_points, mc.t_panel_width)
    return t, w * density(ctx, t)


def _k_at(ctx: GroupContext, u, q, t):
    """Group matrices k' a_t for samples (u, q) and nodes t: (N, T, n+1, n+1, 4)."""
    n = ctx.n
    ch, sh = np.cosh(t)[None, :, None], np.sinh(t)[None, :, None]
    m = np.zeros((u.shape[0], t.size, n + 1, n + 1, 4))
    m[:, :, :n, :n] = u[:, None]
    m[:, :, :n, 0] = u[:, None, :, 0] * ch[..., None]
    m[:, :, :n, n] = u[:, None, :, 0] * sh[..., None]
    m[:, :, n, 0] = q[:, None] * sh
    m[:, :, n, n] = q[:, None] * ch
    return m


def _section_values(F: CompactSection, u, q, t):
    """F(k' a_t) on the sample-by-node grid, shape (N, T, nu+1)."""
    if F.is_radial:
        base = tau_inv_apply(q, np.broadcast_to(F.vector, q.shape[:-1] + (F.nu.dim,)), F.nu.nu)
        return F.profile(t)[None, :, None] * base[:, None, :]
    return F.base.batch(_k_at(F.ctx, u, q, t))


def _polar_blocks(F: CompactSection, mc: MCConfig):
    """Yield (first columns conj'd, conj(q'), F values, t, weights) per sample block."""
    t, wt = _polar_rule(F.ctx, F, mc)
    for lo, hi in chunks(mc.k_samples, 1 << 14):
        u_all, q_all = haar_sp(F.ctx.n, mc.seed, lo, hi)
        for s in range(0, hi - lo, SUB_CHUNK):
            u, q = u_all[s : s + SUB_CHUNK], q_all[s : s + SUB_CHUNK]
            yield Q.qconj(u[:, :, 0, :]), Q.qconj(q), _section_values(F, u, q, t), t, wt


def _bottom_row_product(col_conj, q_conj, t, column, corner):
    """Bottom-right-type entry of x^{-1} y for x = k' a_t.

    ``column`` (n, 4) and ``corner`` (4,) are the first n entries and the
    last entry of the relevant column of y.  Returns (c-part, d-part), each
    of shape (N, T, 4).
    """
    r1 = np.sum(Q.qmul(col_conj, column[None]), axis=1)
    r2 = Q.qmul(q_conj, corner[None])
    return -np.sinh(t)[None, :, None] * r1[:, None, :], np.cosh(t)[None, :, None] * r2[:, None, :]


# ---------------------------------------------------- Fourier transform


def fourier_slices(ctx: GroupContext, nu, F: CompactSection, lam, ks: Sequence[KElement], mc: MCConfig = MCConfig()):
    """Monte-Carlo F_nu F(l, k) for several k sharing the Haar samples.

    Integrand e^{(il - rho) H(x^{-1} k)} tau(kappa(x^{-1} k))^{-1} F(x) over
    x in B(R).  Returns (values, stderrs), both of shape (len(ks), nu+1).
    """
    w = as_weight(nu)
    lam = complex(lam)
    per = []
    for col_conj, q_conj, fv, t, wt in _polar_blocks(F, mc):
        block = np.empty((col_conj.shape[0], len(ks), w.dim), dtype=complex)
        for j, k in enumerate(ks):
            c1, d = _bottom_row_product(col_conj, q_conj, t, k.u[:, 0, :], k.q)
            h, vk = iwasawa_arrays(c1, d)
            vals = tau_inv_apply(vk, fv, w.nu) * np.exp((1j * lam - ctx.rho) * h)[..., None]
            block[:, j] = np.einsum("ntc,t->nc", vals, wt)
        per.append(block)
    mean, se = mean_and_stderr(np.concatenate(per))
    return mean, np.asarray(se)


def helgason_fourier(ctx: GroupContext, nu, F: CompactSection, lam, k: KElement, mc: MCConfig = MCConfig()):
    """F_nu F(l, k) by polar quadrature; returns (RepVector, stderr per component)."""
    vals, se = fourier_slices(ctx, nu, F, lam, [k], mc)
    return RepVector(as_weight(nu), vals[0]), se[0]


def radial_transform(ctx: GroupContext, nu, F: CompactSection, lam):
    """H_nu f(l) for the profile of a tau-radial section."""
    if not F.is_radial:
        raise ValueError("section has no radial profile")
    return h_nu(ctx, nu, F.profile, lam)


def radial_slice(ctx: GroupContext, nu, F: CompactSection, lam, k: KElement) -> RepVector:
    """Closed form F_nu F(l, k) = H_nu f(l) tau(q_k)^{-1} v for tau-radial F."""
    w = as_weight(nu)
    return RepVector(w, radial_transform(ctx, w, F, lam) * tau_inv_apply(k.q, F.vector, w.nu))


@dataclass(frozen=True)
class FourierSlice:
    """k -> F_nu F(l, k) at fixed l, evaluated on demand."""

    ctx: GroupContext
    nu: BundleWeight
    lam: complex
    evaluator: Callable

    def __call__(self, k: KElement) -> RepVector:
        return self.evaluator(k)


def fourier_slice(ctx: GroupContext, nu, F: CompactSection, lam, mc: MCConfig = MCConfig(), exact: bool = False) -> FourierSlice:
    """Slice of the transform at ``lam``; ``exact`` uses the tau-radial closed form."""
    w = as_weight(nu)
    if exact:
        return FourierSlice(ctx, w, lam, lambda k: radial_slice(ctx, w, F, lam, k))
    return FourierSlice(ctx, w, lam, lambda k: helgason_fourier(ctx, w, F, lam, k, mc)[0])


def write_slices_csv(fh, meta_fh, lams, ks: Sequence[KElement], values, mc: MCConfig, extra: Optional[dict] = None) -> None:
    """CSV ``lambda,k_index,comp_index,re,im`` plus a JSON sidecar with the K-points and seed.

    ``values`` has shape (len(lams), len(ks), nu+1).
    """
    values = np.asarray(values, dtype=complex)
    wr = csv.writer(fh, lineterminator="\n")
    wr.writerow(["lambda", "k_index", "comp_index", "re", "im"])
    for i, lam in enumerate(lams):
        for j in range(len(ks)):
            for c in range(values.shape[2]):
                z = values[i, j, c]
                wr.writerow([repr(float(lam)), j, c, repr(float(z.real)), repr(float(z.imag))])
    meta = {
        "k_points": [{"u": k.u.tolist(), "q": k.q.tolist()} for k in ks],
        "mc": mc.as_dict(),
        **(extra or {}),
    }
    json.dump(meta, meta_fh, indent=2, sort_keys=True)


# ------------------------------------------------------------ convolution


def convolve_radial(ctx: GroupContext, nu, profile, F: CompactSection, g: GroupElement, mc: MCConfig = MCConfig()):
    """(Phi * F)(g) = int_G Phi(x^{-1} g) F(x) dx for the tau-radial kernel with scalar ``profile``.

    Phi(y) = profile(A+(y)) tau(w(y))^{-1}.  ``profile`` is a RadialProfile
    or any callable on arrays of radii.  Returns (RepVector, stderr).
    """
    w = as_weight(nu)
    column, corner = np.array(g.b), np.array(g.d)
    per = []
    for col_conj, q_conj, fv, t, wt in _polar_blocks(F, mc):
        c_part, d_part = _bottom_row_product(col_conj, q_conj, t, column, corner)
        d = c_part + d_part
        unit = d / Q.qabs(d)[..., None]
        kern = np.asarray(profile(cartan_radius(d)))
        vals = kern[..., None] * tau_inv_apply(unit, fv, w.nu)
        per.append(np.einsum("ntc,t->nc", vals, wt))
    mean, se = mean_and_stderr(np.concatenate(per))
    return RepVector(w, mean), np.asarray(se)


def spherical_kernel(ctx: GroupContext, nu, lam) -> Callable:
    """Scalar component t -> phi_{nu,l}(t) of the tau-spherical function."""
    nu_i = as_weight(nu).nu
    return lambda t: np.asarray(phi_nu(ctx, nu_i, lam, np.asarray(t, dtype=float)))


# ------------------------------------------------- spectral projections


def _require_nonzero(lam):
    if lam == 0:
        raise SpectralPole("spectral projection needs lambda != 0")


def spectral_projection(
    ctx: GroupContext, nu, F: CompactSection, lam: float, g: GroupElement, mc: MCConfig = MCConfig(), method: str = "auto"
):
    """Q_l F(g) = |c_nu(l)|^{-2} P_l[F_nu F(l, .)](g); returns (RepVector, stderr).

    ``method``: "radial" uses H_nu f(l) Phi_l(g) v (tau-radial F only),
    "quadrature" evaluates |c|^{-2} (Phi_l * F)(g) by polar quadrature, which
    is the same Poisson integral with the K-integration done inside the
    spherical function.  "auto" picks "radial" when available.
    """
    _require_nonzero(lam)
    w = as_weight(nu)
    scale = abs(c_nu(ctx, w.nu, lam)) ** -2
    if method == "auto":
        method = "radial" if F.is_radial else "quadrature"
    if method == "radial":
        Hf = radial_transform(ctx, w, F, lam)
        val = poisson_generator(ctx, w, lam, identity(ctx), F.vector)(g)
        return RepVector(w, scale * Hf * val.coords), np.zeros(w.dim)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    val, se = convolve_radial(ctx, w, spherical_kernel(ctx, w, lam), F, g, mc)
    return RepVector(w, scale * val.coords), scale * se


# ------------------------------------------------------ restriction ratio


def l2_norm_sq(ctx: GroupContext, F: CompactSection, mc: MCConfig = MCConfig()) -> float:
    """int_G ||F||^2, by a 1D quadrature for tau-radial F and polar MC otherwise."""
    if F.is_radial:
        t, w = t_rule(F.support_radius, 0.05, 24)
        radial = float(pairwise_sum(np.abs(F.profile(t)) ** 2 * density(ctx, t) * w))
        return radial * float(np.sum(np.abs(F.vector) ** 2))
    rep = ball_average(ctx, F.base, [F.support_radius], mc)
    return float(rep.values[0] * F.support_radius)


def restriction_ratio(ctx: GroupContext, nu, F: CompactSection, lam: float, mc: MCConfig = MCConfig(), k_points: int = 64) -> float:
    """(int_K ||F_nu F(l, k)||^2 dk)^{1/2} / (|c_nu(l)| R^{1/2} ||F||_2).

    tau-radial F use ||F_nu F(l, k)|| = |H_nu f(l)| ||v||; otherwise the
    K-integral averages ``k_points`` Haar points of Monte-Carlo slices.
    """
    _require_nonzero(lam)
    w = as_weight(nu)
    norm_sq = l2_norm_sq(ctx, F, mc)
    if norm_sq == 0.0:
        return 0.0
    if F.is_radial:
        top_sq = abs(radial_transform(ctx, w, F, lam)) ** 2 * float(np.sum(np.abs(F.vector) ** 2))
    else:
        u, q = haar_sp(ctx.n, mc.seed + STREAM_OUTER, 0, k_points)
        ks = [KElement(u[i], q[i]) for i in range(k_points)]
        vals, _ = fourier_slices(ctx, w, F, lam, ks, mc)
        top_sq = float(np.mean(np.sum(np.abs(vals) ** 2, axis=-1)))
    denom = abs(c_nu(ctx, w.nu, lam)) * np.sqrt(F.support_radius * norm_sq)
    return float(np.sqrt(top_sq) / denom)


# --------------------------------------- Plancherel and inversion (radial)


def _density_nu(ctx: GroupContext, nu: int, lams):
    """|c_nu(l)|^{-2} = 4^nu |c_{a,b}(l)|^{-2}."""
    return 4.0**nu * plancherel_density(nu_params(ctx, nu), lams)


@dataclass(frozen=True)
class PlancherelReport:
    """Both sides of the Plancherel identity for a tau-radial section.

    ``continuous_integral`` is int_0^lmax ||F_nu F(l,.)||^2 |c_nu|^{-2} dl
    without the constant; ``discrete`` already carries its weights.
    """

    norm_sq: float
    continuous_integral: float
    discrete: float
    config: dict = field(default_factory=dict)

    def rhs(self, constant: float = 1.0 / (2.0 * np.pi)) -> float:
        return constant * self.continuous_integral + self.discrete

    def defect(self, constant: float = 1.0 / (2.0 * np.pi)) -> float:
        return abs(self.norm_sq - self.rhs(constant)) / self.norm_sq

    @property
    def measured_constant(self) -> float:
        """Constant that makes the identity exact."""
        return (self.norm_sq - self.discrete) / self.continuous_integral

    def classify(self, rel_tol: float = 0.1):
        """Name of the unique candidate constant within ``rel_tol``, else None, plus all deviations."""
        dev = {k: abs(self.measured_constant / v - 1.0) for k, v in CANDIDATE_CONSTANTS.items()}
        hits = [k for k, d in dev.items() if d <= rel_tol]
        return (hits[0] if len(hits) == 1 else None), dev


def plancherel_report(ctx: GroupContext, nu, F: CompactSection, lambda_max: float = 40.0, m: int = 32) -> PlancherelReport:
    """int_G ||F||^2 against the spectral side for tau-radial F.

    ||F_nu F(l, k)||^2 = |H_nu f(l)|^2 ||v||^2 for every k, so the K-integral
    is trivial; the discrete terms use <F(l_j), F(-l_j)> = |H_nu f(l_j)|^2.
    Multiplying both sides by nu+1 gives the Hilbert-Schmidt form for the
    End(V)-valued function with the same profile.
    """
    w = as_weight(nu)
    vv = float(np.sum(np.abs(F.vector) ** 2))
    lhs = l2_norm_sq(ctx, F)
    lams, wl = lambda_rule(lambda_max, m)
    spec = radial_transform(ctx, w, F, lams)
    cont = float(pairwise_sum(np.abs(spec) ** 2 * _density_nu(ctx, w.nu, lams) * wl)) * vv
    ds = discrete_Dnu(ctx, w.nu)
    disc = 0.0
    if len(ds):
        fk = radial_transform(ctx, w, F, ds.lambdas)
        disc = float(np.sum(4.0**w.nu * ds.inversion_weights * np.abs(fk) ** 2)) * vv
    cfg = {"n": ctx.n, "nu": w.nu, "lambda_max": lambda_max, "m": m, "discrete": [complex(x).imag for x in ds.lambdas]}
    return PlancherelReport(lhs, cont, disc, cfg)


def section_inverse(ctx: GroupContext, nu, F: CompactSection, ts, lambda_max: float = 40.0, m: int = 32) -> np.ndarray:
    """Rebuild F(a_t) from its slices F_nu F(l, e) = H_nu f(l) v.

    F(a_t) = [(1/2pi) int H_nu f(l) phi_{nu,l}(t) |c_nu(l)|^{-2} dl
              + sum_j d_j H_nu f(l_j) phi_{nu,l_j}(t)] v,
    with the discrete terms present when discrete_Dnu is nonempty.
    Returns an array (len(ts), nu+1).
    """
    w = as_weight(nu)
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    p = nu_params(ctx, w.nu)
    ds = discrete_Dnu(ctx, w.nu)
    coef = jacobi_inverse(p, lambda l: radial_transform(ctx, w, F, l), ds, ts, lambda_max, m)
    coef = np.asarray(coef) * (4.0 * np.cosh(ts)) ** w.nu
    return coef[:, None] * F.vector[None, :]


# ------------------------------------- averaged spectral projections


@dataclass(frozen=True)
class SpectralAverageReport:
    """(1/2pi) int_0^lmax (1/R) int_{B(R)} ||Q_l F||^2 dl for each R, against ||F||^2."""

    radii: np.ndarray
    values: np.ndarray
    norm_sq: float
    config: dict = field(default_factory=dict)

    @property
    def ratios(self) -> np.ndarray:
        return self.values / self.norm_sq

    @property
    def limit_ratio(self) -> float:
        """Ratio at the largest radius, to compare with 2."""
        return float(self.ratios[-1])

    @property
    def sup_norm_ratio(self) -> float:
        """sup_R of the aggregate, as a ratio of norms (square root)."""
        return float(np.sqrt(np.max(self.ratios)))


def spectral_average(
    ctx: GroupContext,
    nu,
    F: CompactSection,
    radii: Sequence[float] = (5.0, 10.0, 20.0, 40.0),
    lambda_max: float = 20.0,
    m: int = 16,
    mc: MCConfig = MCConfig(),
) -> SpectralAverageReport:
    """Ball averages of Q_l F integrated over l against (1/2pi) dl, tau-radial F.

    ||Q_l F(k a_t)|| = |c_nu(l)|^{-2} |H_nu f(l)| |phi_{nu,l}(t)| ||v||, so the
    inner ball average is that of the Poisson transform of generator(e, l, v),
    which the compiled kernels evaluate exactly (one K-sample).
    """
    w = as_weight(nu)
    radii = np.asarray(radii, dtype=float)
    lams, wl = lambda_rule(lambda_max, m)
    spec = radial_transform(ctx, w, F, lams)
    e = identity(ctx)
    inner = np.empty((lams.size, radii.size))
    for i, lam in enumerate(lams):
        inner[i] = ball_average(ctx, poisson_generator(ctx, w, float(lam), e, F.vector), radii, mc).values
    weight = np.abs(spec) ** 2 * np.array([abs(c_nu(ctx, w.nu, float(l))) ** -4 for l in lams]) * wl
    vals = pairwise_sum(inner * weight[:, None], 0) / (2.0 * np.pi)
    cfg = {"n": ctx.n, "nu": w.nu, "lambda_max": lambda_max, "m": m}
    return SpectralAverageReport(radii, np.asarray(vals), l2_norm_sq(ctx, F), cfg)

