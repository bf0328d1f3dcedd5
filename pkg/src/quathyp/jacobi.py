"""Jacobi transform pair, discrete spectra, and the tau_nu-spherical transform.

The forward transform integrates against phi_l^{(a,b)} with the weight
(2 sinh t)^{2a+1} (2 cosh t)^{2b+1}; the inverse adds the continuous part
(1/2 pi) int_0^inf ... |c(l)|^{-2} dl to a finite discrete sum.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special as sps
from scipy.interpolate import PchipInterpolator

from .errors import QuadratureNonConvergence, SpectralPole
from .group import GroupContext
from .numerics import gauss_panel, pairwise_sum
from .reps import as_weight
from .specfun import JacobiParams, jacobi_phi_grid, nu_params

# ------------------------------------------------------------- profiles


@dataclass(frozen=True)
class RadialProfile:
    """Even radial profile f(t), zero beyond ``support_radius``.

    Either an analytic callable or samples interpolated by a monotone
    piecewise cubic (PCHIP).
    """

    support_radius: float
    func: Optional[Callable] = None
    samples: Optional[tuple] = None  # (t, values)
    _interp: Optional[object] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.func is None and self.samples is None:
            raise ValueError("need func or samples")
        if self.samples is not None and self._interp is None:
            t, v = (np.asarray(x) for x in self.samples)
            v = v.astype(complex)
            re = PchipInterpolator(t, v.real, extrapolate=False)
            im = PchipInterpolator(t, v.imag, extrapolate=False)
            object.__setattr__(self, "_interp", (re, im))

    @classmethod
    def from_samples(cls, t, values, support_radius: Optional[float] = None) -> "RadialProfile":
        t = np.asarray(t, dtype=float)
        r = float(t[-1]) if support_radius is None else float(support_radius)
        return cls(r, samples=(t, np.asarray(values)))

    def __call__(self, t) -> np.ndarray:
        t = np.abs(np.asarray(t, dtype=float))
        inside = t <= self.support_radius
        out = np.zeros(t.shape, dtype=complex)
        if self.func is not None:
            if inside.any():
                out[inside] = self.func(t[inside])
        else:
            re, im = self._interp
            vals = re(t[inside]) + 1j * im(t[inside])
            out[inside] = np.nan_to_num(vals)
        return out

    def scaled(self, weight: Callable) -> "RadialProfile":
        """Profile t -> weight(t) f(t) with the same support."""
        return RadialProfile(self.support_radius, func=lambda t: weight(t) * self(t))

    def sup_norm(self, m: int = 2001) -> float:
        t = np.linspace(0.0, self.support_radius, m)
        return float(np.max(np.abs(self(t))))


def bump_profile(radius: float, power: float = 1.0) -> RadialProfile:
    """Smooth even bump exp(-power / (1 - (t/radius)^2)) e^{power}, f(0) = 1."""

    def f(t):
        x = (np.asarray(t) / radius) ** 2
        out = np.zeros(np.shape(t))
        m = x < 1
        out[m] = np.exp(power - power / (1.0 - x[m]))
        return out

    return RadialProfile(float(radius), func=f)


def _smooth_step(x):
    """C-infinity step: 1 for x <= 0, 0 for x >= 1."""
    x = np.clip(x, 0.0, 1.0)
    a = np.where(x < 1, np.exp(-1.0 / np.maximum(1.0 - x, 1e-300)), 0.0)
    b = np.where(x > 0, np.exp(-1.0 / np.maximum(x, 1e-300)), 0.0)
    return a / (a + b)


def gaussian_cutoff_profile(support: float = 3.0, width: float = 4.0, taper: float = 1.0) -> RadialProfile:
    """exp(-width t^2) switched off smoothly over [support - taper, support].

    Its transform decays fast, which keeps truncated inversion accurate.
    """

    def f(t):
        t = np.asarray(t, dtype=float)
        return np.exp(-width * t * t) * _smooth_step((t - (support - taper)) / taper)

    return RadialProfile(float(support), func=f)


def write_profile_csv(fh, t, values) -> None:
    """CSV with header ``t,value_re,value_im``."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "value_re", "value_im"])
    for ti, v in zip(np.asarray(t, dtype=float), np.asarray(values, dtype=complex)):
        w.writerow([repr(float(ti)), repr(float(v.real)), repr(float(v.imag))])


def write_spectrum_csv(fh, lams, values) -> None:
    """CSV with header ``lambda,value_re,value_im``."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["lambda", "value_re", "value_im"])
    for li, v in zip(np.asarray(lams, dtype=float), np.asarray(values, dtype=complex)):
        w.writerow([repr(float(li)), repr(float(v.real)), repr(float(v.imag))])


def read_table_csv(fh, first: str):
    """Read a two-column complex table written by the writers above."""
    text = fh.read() if hasattr(fh, "read") else str(fh)
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != [first, "value_re", "value_im"]:
        raise ValueError(f"expected header {first},value_re,value_im")
    arr = np.array([[float(x) for x in r] for r in rows[1:] if r], dtype=float).reshape(-1, 3)
    return arr[:, 0], arr[:, 1] + 1j * arr[:, 2]


def profile_from_csv(fh, support_radius: Optional[float] = None) -> RadialProfile:
    t, v = read_table_csv(fh, "t")
    return RadialProfile.from_samples(t, v, support_radius)


# ------------------------------------------------------ discrete spectra


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Discrete points l_k with residues d_k and the weights used by inversion.

    ``entries`` holds (l_k, d_k) with d_k = -i Res (c(l) c(-l))^{-1}.
    ``weights`` are the multipliers of F(l_k) phi_{l_k} in the inversion and
    Plancherel formulas; they default to d_k.
    """

    entries: tuple = ()
    weights: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((complex(l), float(d)) for l, d in self.entries))
        w = self.weights
        w = tuple(d for _, d in self.entries) if w is None else tuple(float(x) for x in w)
        if len(w) != len(self.entries):
            raise ValueError("one weight per discrete point")
        object.__setattr__(self, "weights", w)
        ims = [l.imag for l, _ in self.entries]
        if any(x <= 0 for x in ims) or any(a <= b for a, b in zip(ims, ims[1:])):
            raise ValueError("discrete points need Im > 0, strictly decreasing")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([l for l, _ in self.entries], dtype=complex)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([d for _, d in self.entries], dtype=float)

    @property
    def inversion_weights(self) -> np.ndarray:
        return np.array(self.weights, dtype=float)


def _is_integer(x: float) -> bool:
    return abs(x - round(x)) < 1e-12


def discrete_coefficient(alpha: float, beta: float, k: int) -> float:
    """Closed form (b-a-2k-1) 2^{-2(a+b)} G(a+k+1) G(b-k) / (G(a+1)^2 G(b-a-k) k!)."""
    b = abs(beta)
    lg = sps.gammaln
    log_mag = (
        -2.0 * (alpha + b) * np.log(2.0)
        + lg(alpha + k + 1.0)
        + lg(b - k)
        - 2.0 * lg(alpha + 1.0)
        - lg(b - alpha - k)
        - lg(k + 1.0)
    )
    return float((b - alpha - 2 * k - 1) * np.exp(log_mag))


def discrete_spectrum(p: JacobiParams) -> DiscreteSpectrum:
    """Points l_k = i(|b| - a - 1 - 2k) > 0 with residues and inversion weights.

    The closed form equals the residue -i Res (c(l) c(-l))^{-1} when b - a is
    an integer and twice it otherwise.  Inversion and Plancherel need half
    the closed form in both cases: for integer b - a the zero of c(-l) is
    cancelled by a pole of the second Harish-Chandra solution, so phi_{l_k}
    is not c(l_k) Phi_{l_k} and the residue over-counts by 2.
    """
    b = abs(p.beta)
    half_res = not _is_integer(b - p.alpha)
    pts, weights = [], []
    k = 0
    while b - p.alpha - 1.0 - 2 * k > 0:
        closed = discrete_coefficient(p.alpha, b, k)
        pts.append((1j * (b - p.alpha - 1.0 - 2 * k), 0.5 * closed if half_res else closed))
        weights.append(0.5 * closed)
        k += 1
    return DiscreteSpectrum(tuple(pts), tuple(weights))


def contour_residue(p: JacobiParams, lam0, radius: float = 0.1, points: int = 128) -> float:
    """-i Res_{l=lam0} (c(l) c(-l))^{-1} by the trapezoid rule on a small circle."""
    th = 2.0 * np.pi * (np.arange(points) + 0.5) / points
    z = complex(lam0) + radius * np.exp(1j * th)
    g = 1.0 / (c_ab_array(p, z) * c_ab_array(p, -z))
    integral = np.sum(g * 1j * radius * np.exp(1j * th)) * (2.0 * np.pi / points)
    return float(np.real(-1j * integral / (2j * np.pi)))


def discrete_Dnu(ctx: GroupContext, nu) -> DiscreteSpectrum:
    """Discrete set D_nu: points i(nu - rho + 2 - 2j) > 0.

    Same points, residues and weights as the reduced Jacobi pair
    (rho - 2, nu + 1).  Empty when nu <= rho - 2.
    """
    return discrete_spectrum(nu_params(ctx, as_weight(nu).nu))


# ------------------------------------------------------------ c arrays


def c_ab_array(p: JacobiParams, lams) -> np.ndarray:
    """Vectorised c_{a,b} for real nonzero lambdas."""
    lams = np.asarray(lams, dtype=complex)
    if np.any(np.abs(lams) == 0):
        raise SpectralPole("c-function pole at lambda = 0")
    il = 1j * lams
    rho = p.rho_ab
    lg = sps.loggamma
    val = (rho - il) * np.log(2.0) + lg(p.alpha + 1.0) + lg(il) - lg((il + rho) / 2.0) - lg((il + p.alpha - p.beta + 1.0) / 2.0)
    return np.exp(val)


def plancherel_density(p: JacobiParams, lams) -> np.ndarray:
    """|c(l)|^{-2} for real l, with the l -> 0 value 0."""
    lams = np.asarray(lams, dtype=float)
    out = np.zeros(lams.shape)
    nz = lams != 0
    out[nz] = np.abs(c_ab_array(p, lams[nz])) ** -2
    return out


# ---------------------------------------------------------- quadrature


def weight_ab(p: JacobiParams, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return (2.0 * np.sinh(t)) ** (2 * p.alpha + 1) * (2.0 * np.cosh(t)) ** (2 * p.beta + 1)


def t_rule(support: float, width: float = 0.25, m: int = 24, head: float = 0.1):
    """Nodes/weights on [0, support]; u = t^2 on [0, head] absorbs the endpoint."""
    head = min(head, support)
    u, wu = gauss_panel(0.0, head * head, m)
    xs = [np.sqrt(u)]
    ws = [wu / (2.0 * np.sqrt(u))]
    if support > head:
        npan = max(1, int(np.ceil((support - head) / width)))
        edges = np.linspace(head, support, npan + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            x, w = gauss_panel(a, b, m)
            xs.append(x)
            ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def _forward_on_rule(p, f, lams, t, w):
    vals = f(t) * weight_ab(p, t) * w
    phi = jacobi_phi_grid(p, lams, t)
    return pairwise_sum((phi * vals[None, :]).T, 0)


def jacobi_forward(p: JacobiParams, f: RadialProfile, lam, tol: Optional[float] = None, max_refine: int = 4):
    """J f(l) = int_0^R f(t) phi_l(t) (2 sinh t)^{2a+1} (2 cosh t)^{2b+1} dt.

    Vectorised over ``lam``; panels are halved until successive estimates
    agree to ``tol``.  The default is 1e-10 (1 + sup|f|) times the weight
    mass int_0^R Delta_ab, the natural scale since |phi_l| <= 1 on the real
    line; a bare absolute 1e-10 is below rounding once cosh^{2b+1} is large.
    """
    lams = np.atleast_1d(np.asarray(lam, dtype=complex))
    scalar = np.ndim(lam) == 0
    width, m = 0.25, 24
    t, w = t_rule(f.support_radius, width, m)
    if tol is None:
        tol = 1e-10 * (1.0 + f.sup_norm(401)) * float(np.sum(weight_ab(p, t) * w))
    prev = _forward_on_rule(p, f, lams, t, w)
    for _ in range(max_refine):
        width /= 2.0
        t, w = t_rule(f.support_radius, width, m)
        cur = _forward_on_rule(p, f, lams, t, w)
        if np.max(np.abs(cur - prev)) <= max(tol, 1e-12 * float(np.max(np.abs(cur)))):
            return complex(cur[0]) if scalar else cur
        prev = cur
    raise QuadratureNonConvergence(f"forward transform did not reach tol {tol:.2e}")


def lambda_rule(lambda_max: float, m: int = 32, dyadic_levels: int = 8, width: float = 1.0):
    """Dyadic panels on (0, 1] then unit panels up to lambda_max."""
    edges = [2.0 ** (-k) for k in range(dyadic_levels, -1, -1)]
    xs, ws = [], []
    x, w = gauss_panel(0.0, edges[0], m)
    xs.append(x)
    ws.append(w)
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = gauss_panel(a, b, m)
        xs.append(x)
        ws.append(w)
    if lambda_max > 1.0:
        npan = int(np.ceil((lambda_max - 1.0) / width))
        pe = np.linspace(1.0, lambda_max, npan + 1)
        for a, b in zip(pe[:-1], pe[1:]):
            x, w = gauss_panel(a, b, m)
            xs.append(x)
            ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def jacobi_inverse(
    p: JacobiParams,
    spectrum: Callable,
    ds: Optional[DiscreteSpectrum],
    t,
    lambda_max: float = 40.0,
    m: int = 32,
):
    """f(t) = (1/2pi) int_0^lmax F(l) phi_l(t) |c(l)|^{-2} dl + sum_k w_k F(l_k) phi_{l_k}(t).

    w_k are the inversion weights of ``ds``.

    ``spectrum`` maps an array of lambdas to transform values.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    lams, wl = lambda_rule(lambda_max, m)
    spec = np.asarray(spectrum(lams), dtype=complex)
    dens = plancherel_density(p, lams)
    phi = jacobi_phi_grid(p, lams, t_arr)
    cont = pairwise_sum(phi * (spec * dens * wl)[:, None], 0) / (2.0 * np.pi)
    disc = np.zeros(t_arr.shape, dtype=complex)
    if ds is not None and len(ds):
        lk = ds.lambdas
        fk = np.asarray(spectrum(lk), dtype=complex)
        phik = jacobi_phi_grid(p, lk, t_arr)
        disc = pairwise_sum(phik * (ds.inversion_weights * fk)[:, None], 0)
    out = cont + disc
    return complex(out[0]) if np.ndim(t) == 0 else out


def plancherel_sides(p: JacobiParams, f: RadialProfile, lambda_max: float = 40.0, m: int = 32):
    """(LHS, continuous part, discrete part) of the Plancherel identity."""
    t, w = t_rule(f.support_radius, 0.05, 24)
    lhs = float(pairwise_sum(np.abs(f(t)) ** 2 * weight_ab(p, t) * w))
    lams, wl = lambda_rule(lambda_max, m)
    spec = jacobi_forward(p, f, lams)
    cont = float(pairwise_sum(np.abs(spec) ** 2 * plancherel_density(p, lams) * wl)) / (2.0 * np.pi)
    ds = discrete_spectrum(p)
    disc = 0.0
    if len(ds):
        fk = jacobi_forward(p, f, ds.lambdas)
        disc = float(np.sum(ds.inversion_weights * np.abs(fk) ** 2))
    return lhs, cont, disc


def plancherel_defect(p: JacobiParams, f: RadialProfile, lambda_max: float = 40.0) -> float:
    """|LHS - RHS| / LHS for the Plancherel identity (0 for f = 0)."""
    lhs, cont, disc = plancherel_sides(p, f, lambda_max)
    if lhs == 0.0:
        return 0.0
    return abs(lhs - cont - disc) / lhs


# ------------------------------------------------- tau_nu-spherical


def h_nu(ctx: GroupContext, nu, f: RadialProfile, lam):
    """H_nu f(l) = J^{(rho-2, nu+1)}[(4 cosh t)^{-nu} f](l)."""
    nu_i = as_weight(nu).nu
    p = nu_params(ctx, nu_i)
    g = f if nu_i == 0 else f.scaled(lambda t: (4.0 * np.cosh(t)) ** (-nu_i))
    return jacobi_forward(p, g, lam)


def measure_identity_residual(ctx: GroupContext, nu, t) -> np.ndarray:
    """Relative gap between the group density and its reduced form."""
    from .group import density

    nu_i = as_weight(nu).nu
    t = np.asarray(t, dtype=float)
    lhs = density(ctx, t)
    rhs = (2.0 * np.cosh(t)) ** (-2 * nu_i) * weight_ab(nu_params(ctx, nu_i), t)
    return np.abs(lhs - rhs) / np.abs(lhs)
