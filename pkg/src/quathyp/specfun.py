"""Gamma, Gauss 2F1, Jacobi functions and Harish-Chandra c-functions.

Jacobi functions are evaluated by three routes chosen per (lambda, t):

* a Pfaff-transformed power series in tanh^2 t near the origin,
* the connection formula phi = c(l) Psi_l + c(-l) Psi_{-l} with the
  second solutions summed as series in 1/cosh^2 t,
* direct integration of the Jacobi ODE where both series would lose
  too many digits to cancellation (large |lambda| at small t).

Near the imaginary integers, where c(+-lambda) or Psi_{+-lambda} have
poles, the connection route is replaced by the mean value of the entire
function lambda -> phi_lambda(t) over a small circle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sps
from scipy.integrate import solve_ivp

from .errors import ParameterPole, PoleAtNonpositiveInteger, SpectralPole
from .group import GroupContext
from .reps import BundleWeight, as_weight

POLE_TOL = 1e-12
SERIES_TOL = 1e-17
MAX_TERMS = 100_000

# route selection
T_SERIES_MAX = 1.5  # the tanh^2 series is used only below this radius
SERIES_ARG_MAX = 10.0  # |lambda| tanh t bound for the tanh^2 series
PSI_ARG_MAX = 10.0  # |lambda| / (4 sinh^2 t) bound for the Psi series
T_PSI_MIN = 1.0
NEAR_POLE = 1e-3
CIRCLE_RADIUS = 0.02
CIRCLE_POINTS = 24


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha > -1:
            raise ValueError("alpha must exceed -1")

    @property
    def rho_ab(self) -> float:
        return self.alpha + self.beta + 1.0


def nu_params(ctx: GroupContext, nu) -> JacobiParams:
    """(alpha, beta) = (rho - 2, nu + 1) attached to the bundle weight nu."""
    return JacobiParams(ctx.rho - 2.0, as_weight(nu).nu + 1.0)


# ---------------------------------------------------------------- gamma


def _near_nonpositive_integer(z, tol=POLE_TOL):
    z = np.asarray(z, dtype=complex)
    r = np.round(z.real)
    return (np.abs(z.imag) <= tol) & (r <= 0) & (np.abs(z.real - r) <= tol)


def log_gamma(z):
    """Principal branch of log Gamma(z) for complex z (scipy's loggamma)."""
    if np.any(_near_nonpositive_integer(z)):
        raise PoleAtNonpositiveInteger(f"log_gamma pole at {z}")
    out = sps.loggamma(np.asarray(z, dtype=complex))
    return complex(out) if np.ndim(out) == 0 else out


# ------------------------------------------------------------ 2F1 series


def _series(a, b, c, z, tol=SERIES_TOL, max_terms=MAX_TERMS):
    """Defining power series of 2F1, vectorised over z (|z| < 1)."""
    z = np.asarray(z, dtype=complex)
    total = np.ones(z.shape, dtype=complex)
    term = np.ones(z.shape, dtype=complex)
    active = np.ones(z.shape, dtype=bool)
    for k in range(max_terms):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1.0))) * z
        total = total + np.where(active, term, 0.0)
        small = np.abs(term) <= tol * np.abs(total)
        active &= ~(small & (k > 2))
        if not active.any():
            return total
        if k > 8 and np.all(term[active] == 0):
            return total
    raise RuntimeError("2F1 series did not converge")


def hyp2f1(a, b, c, z):
    """Gauss 2F1(a, b; c; z) for real z <= 0 (and |z| < 1 generally).

    Uses the series for |z| <= 1/2, the Pfaff transformation for moderate
    negative z, and the 1/z connection formula far out on the negative axis.
    """
    if _near_nonpositive_integer(c):
        raise ParameterPole(f"c = {c} is a nonpositive integer")
    a, b, c = complex(a), complex(b), complex(c)
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if a == 0 or b == 0:
        out = np.ones(z.shape, dtype=complex)
        return complex(out[0]) if scalar else out
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) <= 0.5
    out[small] = _series(a, b, c, z[small])
    rest = ~small
    if rest.any():
        zr = z[rest]
        if np.any((np.abs(zr) >= 1) & ((np.abs(zr.imag) > 0) | (zr.real > 0))):
            raise ValueError("hyp2f1 is only continued along the negative real axis")
        x = zr / (zr - 1.0)
        mid = np.abs(x) <= 0.9
        vals = np.empty(zr.shape, dtype=complex)
        if mid.any():
            vals[mid] = (1.0 - zr[mid]) ** (-a) * _series(a, c - b, c, x[mid])
        far = ~mid
        if far.any():
            vals[far] = _inverse_z(a, b, c, zr[far])
        out[rest] = vals
    return complex(out[0]) if scalar else out


def _inverse_z(a, b, c, z):
    """2F1 for z < -9 via the 1/z connection formula (b - a not an integer)."""
    if abs((b - a) - round((b - a).real)) < 1e-8:
        raise NotImplementedError("degenerate 1/z connection (b - a integer)")
    lg = sps.loggamma
    t1 = np.exp(lg(c) + lg(b - a) - lg(b) - lg(c - a)) * (-z) ** (-a)
    t1 = t1 * _series(a, a - c + 1.0, a - b + 1.0, 1.0 / z)
    t2 = np.exp(lg(c) + lg(a - b) - lg(a) - lg(c - b)) * (-z) ** (-b)
    t2 = t2 * _series(b, b - c + 1.0, b - a + 1.0, 1.0 / z)
    return t1 + t2


# ------------------------------------------------------- c-functions


def _gamma_ratio(num, den):
    """prod Gamma(num) / prod Gamma(den) with reciprocal-gamma poles.

    Raises SpectralPole when a numerator pole is not cancelled.
    """
    num = [complex(x) for x in num]
    den = [complex(x) for x in den]
    npole = [x for x in num if _near_nonpositive_integer(x)]
    dpole = [x for x in den if _near_nonpositive_integer(x)]
    if len(npole) > len(dpole):
        raise SpectralPole(f"Gamma pole at {npole}")
    if npole:
        # pair poles: Gamma(-m + e)/Gamma(-p + e k) handled by the caller
        raise SpectralPole("coincident Gamma poles need the limit formula")
    if dpole:
        return 0.0 + 0.0j
    lg = sum(sps.loggamma(x) for x in num) - sum(sps.loggamma(x) for x in den)
    return complex(np.exp(lg))


def c_ab(p: JacobiParams, lam) -> complex:
    """c_{a,b}(lambda) = 2^{rho-i l} G(a+1) G(i l) / (G((i l+rho)/2) G((i l+a-b+1)/2))."""
    lam = complex(lam)
    il = 1j * lam
    rho = p.rho_ab
    if _near_nonpositive_integer(il):
        raise SpectralPole(f"c-function pole at lambda = {lam}")
    ratio = _gamma_ratio([p.alpha + 1.0, il], [(il + rho) / 2.0, (il + p.alpha - p.beta + 1.0) / 2.0])
    return complex(2.0 ** (rho - il) * ratio)


def c_nu(ctx: GroupContext, nu, lam) -> complex:
    """c_nu(lambda) = 2^{rho-i l} G(rho-1) G(i l) / (G((i l+rho+nu)/2) G((i l+rho-nu-2)/2)).

    Equal to 2^{-nu} c_{rho-2, nu+1}(lambda).
    """
    nu = as_weight(nu).nu
    lam = complex(lam)
    il = 1j * lam
    rho = ctx.rho
    if _near_nonpositive_integer(il):
        raise SpectralPole(f"c-function pole at lambda = {lam}")
    ratio = _gamma_ratio([rho - 1.0, il], [(il + rho + nu) / 2.0, (il + rho - nu - 2.0) / 2.0])
    return complex(2.0 ** (rho - il) * ratio)


def b_case_integer(ctx: GroupContext, nu) -> bool:
    """True when (nu - rho + 2)/2 is a nonnegative integer (then b = c)."""
    m = (as_weight(nu).nu - ctx.rho + 2.0) / 2.0
    return m >= 0 and float(m).is_integer()


def b_epsilon(ctx: GroupContext, nu) -> int:
    """Exponent shift in |b_nu(l)|^{-1} ~ (1+l^2)^{(2 rho - 4 - eps)/4}.

    Determined from the Stirling growth of c_nu: +1 when b = l c, -1 when b = c.
    """
    return -1 if b_case_integer(ctx, nu) else 1


def b_nu_zero_limit(ctx: GroupContext, nu) -> complex:
    """Exact value of b_nu at lambda = 0."""
    nu = as_weight(nu).nu
    rho = ctx.rho
    if b_case_integer(ctx, nu):
        m = int(round((nu - rho + 2.0) / 2.0))
        # Gamma(e)/Gamma(e/2 - m) -> (-1)^m m!/2
        val = (-1) ** m * 2.0 ** (rho - 1.0) * sps.gamma(rho - 1.0) * sps.factorial(m)
        return complex(val / sps.gamma((rho + nu) / 2.0))
    # l Gamma(i l) -> -i
    val = -1j * 2.0**rho * sps.gamma(rho - 1.0) * sps.rgamma((rho + nu) / 2.0) * sps.rgamma((rho - nu - 2.0) / 2.0)
    return complex(val)


def b_nu(ctx: GroupContext, nu, lam: float) -> complex:
    """b_nu(l) = c_nu(l) if (nu-rho+2)/2 is a nonnegative integer, else l c_nu(l)."""
    lam = float(np.real(lam))
    if abs(lam) < 1e-300:
        return b_nu_zero_limit(ctx, nu)
    if b_case_integer(ctx, nu):
        # c_nu itself is regular at 0 here; use the pole-free form
        nu_i = as_weight(nu).nu
        rho = ctx.rho
        m = int(round((nu_i - rho + 2.0) / 2.0))
        il = 1j * lam
        # G(il)/G(il/2 - m) = G(il) (il/2 - m)_m / G(il/2)  ... stable for small l
        poch = np.prod([il / 2.0 - m + j for j in range(m)]) if m > 0 else 1.0
        core = np.exp(sps.loggamma(il) - sps.loggamma(il / 2.0)) * poch
        val = 2.0 ** (rho - il) * sps.gamma(rho - 1.0) * core / sps.gamma((il + rho + nu_i) / 2.0)
        return complex(val)
    return lam * c_nu(ctx, nu, lam)


# -------------------------------------------------- Jacobi functions


def _check_params(p: JacobiParams):
    if _near_nonpositive_integer(p.alpha + 1.0):
        raise ParameterPole("alpha is a negative integer")


def _phi_series_scaled(p, lam, t):
    """e^{rho t} phi_l(t) from cosh^{-2a} 2F1(a, c-b; c; tanh^2 t)."""
    rho = p.rho_ab
    a = (1j * lam + rho) / 2.0
    cmb = (1j * lam + p.alpha - p.beta + 1.0) / 2.0
    x = np.tanh(t) ** 2
    f = _series(a, cmb, p.alpha + 1.0, x)
    # e^{rho t} cosh(t)^{-(i l + rho)}
    logc = np.log(np.cosh(t))
    return np.exp(rho * t - (1j * lam + rho) * logc) * f


def _phi_series_deriv(p, lam, t):
    """phi_l(t) and phi_l'(t) from the tanh^2 series (unscaled)."""
    rho = p.rho_ab
    a = (1j * lam + rho) / 2.0
    cmb = (1j * lam + p.alpha - p.beta + 1.0) / 2.0
    c = p.alpha + 1.0
    th = np.tanh(t)
    x = th**2
    pre = np.cosh(t) ** (-2.0 * a)
    f = _series(a, cmb, c, x)
    fp = (a * cmb / c) * _series(a + 1.0, cmb + 1.0, c + 1.0, x)
    phi = pre * f
    dphi = pre * (-2.0 * a * th * f + fp * 2.0 * th * (1.0 - x))
    return phi, dphi


def _psi_scaled(p, lam, t):
    """e^{(rho - i l) t} Psi_l(t) via the Pfaff form in 1/cosh^2 t."""
    rho = p.rho_ab
    il = 1j * lam
    A = (rho - il) / 2.0
    C = 1.0 - il
    cmb = (1.0 + p.alpha - p.beta - il) / 2.0
    x = 1.0 / np.cosh(t) ** 2
    f = _series(A, cmb, C, x)
    e2 = -np.expm1(-2.0 * t)  # 1 - e^{-2t}
    # (2 sinh t)^{il - rho} e^{(rho - il) t} = (1 - e^{-2t})^{il - rho}; Pfaff adds tanh^{2A}
    return np.exp((il - rho) * np.log(e2) + 2.0 * A * np.log(np.tanh(t))) * f


def jacobi_psi(p: JacobiParams, lam, t):
    """Second solution Psi_l(t) ~ e^{(i l - rho) t}, for t >= 1."""
    _check_params(p)
    lam = complex(lam)
    if _near_nonpositive_integer(1.0 - 1j * lam):
        raise SpectralPole(f"Psi pole at lambda = {lam}")
    t = np.asarray(t, dtype=float)
    if np.any(t < T_PSI_MIN - 1e-12):
        raise ValueError("jacobi_psi requires t >= 1")
    out = _psi_scaled(p, lam, t) * np.exp((1j * lam - p.rho_ab) * t)
    return complex(out) if out.ndim == 0 else out


def _near_imag_integer(lam):
    lam = np.asarray(lam, dtype=complex)
    m = np.round(lam.imag)
    return (np.abs(lam.real) < NEAR_POLE) & (np.abs(lam.imag - m) < NEAR_POLE)


def _c_ab_vec(p, lam):
    """Elementwise c_{a,b} off the numerator poles; zero at denominator poles."""
    il = 1j * np.asarray(lam, dtype=complex)
    rho = p.rho_ab
    lg = sps.loggamma
    d1 = (il + rho) / 2.0
    d2 = (il + p.alpha - p.beta + 1.0) / 2.0
    zero = _near_nonpositive_integer(d1) | _near_nonpositive_integer(d2)
    d1 = np.where(zero, 1.0, d1)
    d2 = np.where(zero, 1.0, d2)
    val = np.exp((rho - il) * np.log(2.0) + lg(p.alpha + 1.0) + lg(il) - lg(d1) - lg(d2))
    return np.where(zero, 0.0, val)


def _phi_connection_scaled(p, lam, t):
    """e^{rho t} phi via the connection formula, elementwise, off the pole set."""
    out = np.zeros(np.broadcast(lam, t).shape, dtype=complex)
    for s in (1.0, -1.0):
        sl = s * np.asarray(lam, dtype=complex)
        out = out + _c_ab_vec(p, sl) * _psi_scaled(p, sl, t) * np.exp(1j * sl * t)
    return out


def _phi_connection_any(p, lam, t):
    """Connection route; entries near i*Z use the small-circle mean value."""
    lam = np.asarray(lam, dtype=complex)
    t = np.asarray(t, dtype=float)
    near = _near_imag_integer(lam)
    out = np.empty(lam.shape, dtype=complex)
    if (~near).any():
        out[~near] = _phi_connection_scaled(p, lam[~near], t[~near])
    if near.any():
        angles = 2.0 * np.pi * (np.arange(CIRCLE_POINTS) + 0.5) / CIRCLE_POINTS
        acc = np.zeros(int(near.sum()), dtype=complex)
        for th in angles:
            acc = acc + _phi_connection_scaled(p, lam[near] + CIRCLE_RADIUS * np.exp(1j * th), t[near])
        out[near] = acc / CIRCLE_POINTS
    return out


def _ode_rhs_factory(p, lam2):
    a1 = 2.0 * p.alpha + 1.0
    b1 = 2.0 * p.beta + 1.0
    k = lam2 + p.rho_ab**2

    def rhs(t, y):
        m = y.size // 2
        f, g = y[:m], y[m:]
        return np.concatenate([g, -(a1 / np.tanh(t) + b1 * np.tanh(t)) * g - k * f])

    return rhs


def _phi_ode(p, lams, ts):
    """phi for several lambdas at increasing times ts by ODE integration.

    Start values come from the tanh^2 series at a radius where it is safe
    for every lambda; returns (len(lams), len(ts)) unscaled values.
    """
    lams = np.asarray(lams, dtype=complex)
    ts = np.asarray(ts, dtype=float)
    lmax = float(np.max(np.abs(lams)))
    t0 = float(np.arctanh(min(0.5, 0.8 * SERIES_ARG_MAX / max(lmax, 1e-300))))
    t0 = min(t0, float(ts.min()))
    f0, g0 = _phi_series_deriv(p, lams, np.full(lams.shape, t0))
    rhs = _ode_rhs_factory(p, lams**2)
    if ts.max() <= t0:
        raise ValueError("ODE route needs times beyond the start radius")
    sol = solve_ivp(
        rhs,
        (t0, float(ts.max())),
        np.concatenate([f0, g0]),
        method="DOP853",
        t_eval=ts,
        rtol=1e-13,
        atol=1e-300,
    )
    if not sol.success:
        raise RuntimeError(sol.message)
    return sol.y[: lams.size]


def _routes(lam, t):
    """Route labels, elementwise: 0 series, 1 connection, 2 ODE."""
    al = np.abs(np.asarray(lam, dtype=complex))
    t = np.asarray(t, dtype=float)
    al, t = np.broadcast_arrays(al, t)
    route = np.full(t.shape, 2, dtype=int)
    ser = (t <= T_SERIES_MAX) & (al * np.tanh(t) <= SERIES_ARG_MAX)
    with np.errstate(divide="ignore", over="ignore"):
        con = (t >= T_PSI_MIN) & (al / (4.0 * np.sinh(np.maximum(t, 1e-300)) ** 2) <= PSI_ARG_MAX)
    route[con] = 1
    route[ser] = 0
    return route


def _phi_scaled_elementwise(p, lam, t):
    """e^{rho t} phi for matching flat arrays lam, t (t >= 0)."""
    out = np.empty(t.shape, dtype=complex)
    route = _routes(lam, t)
    m0 = route == 0
    if m0.any():
        out[m0] = _phi_series_scaled(p, lam[m0], t[m0])
    m1 = route == 1
    if m1.any():
        out[m1] = _phi_connection_any(p, lam[m1], t[m1])
    m2 = route == 2
    if m2.any():
        lam2, t2 = lam[m2], t[m2]
        ul, li = np.unique(lam2, return_inverse=True)
        ut, ti = np.unique(t2, return_inverse=True)
        vals = _phi_ode(p, ul, ut)
        out[m2] = vals[li, ti] * np.exp(p.rho_ab * t2)
    return out


def jacobi_phi_scaled(p: JacobiParams, lam, t) -> np.ndarray:
    """e^{rho_ab t} phi_lambda^{(alpha, beta)}(t); broadcasts lam against t >= 0."""
    _check_params(p)
    lam_b, t_b = np.broadcast_arrays(np.asarray(lam, dtype=complex), np.abs(np.asarray(t, dtype=float)))
    shape = t_b.shape
    out = _phi_scaled_elementwise(p, lam_b.reshape(-1), t_b.reshape(-1))
    return out.reshape(shape)


def jacobi_phi(p: JacobiParams, lam, t):
    """Jacobi function phi_l^{(a,b)}(t) = 2F1((il+rho)/2, (-il+rho)/2; a+1; -sinh^2 t)."""
    t_arr = np.abs(np.asarray(t, dtype=float))
    out = jacobi_phi_scaled(p, lam, t_arr) * np.exp(-p.rho_ab * t_arr)
    return complex(out) if out.ndim == 0 else out


def jacobi_phi_grid(p: JacobiParams, lams, ts) -> np.ndarray:
    """phi on the product grid lams x ts, shape (len(lams), len(ts))."""
    lams = np.asarray(lams, dtype=complex).reshape(-1)
    ts = np.abs(np.asarray(ts, dtype=float).reshape(-1))
    return jacobi_phi(p, lams[:, None], ts[None, :]).reshape(lams.size, ts.size)


def phi_nu(ctx: GroupContext, nu, lam, t):
    """Trace spherical function (cosh t)^nu phi_l^{(rho-2, nu+1)}(t)."""
    nu_i = as_weight(nu).nu
    t_arr = np.abs(np.asarray(t, dtype=float))
    p = nu_params(ctx, nu_i)
    out = jacobi_phi(p, lam, t_arr) * np.cosh(t_arr) ** nu_i
    return complex(out) if np.ndim(out) == 0 else out


def phi_nu_scaled(ctx: GroupContext, nu, lam, t):
    """e^{rho t} phi_{nu,l}(t) without under- or overflow at large t."""
    nu_i = as_weight(nu).nu
    t_arr = np.abs(np.asarray(t, dtype=float))
    p = nu_params(ctx, nu_i)
    # e^{rho t} cosh^nu t e^{-(rho+nu) t} = ((1 + e^{-2t})/2)^nu
    return jacobi_phi_scaled(p, lam, t_arr) * (0.5 * (1.0 + np.exp(-2.0 * t_arr))) ** nu_i


def phi_asymptotic(ctx: GroupContext, nu, lam, t):
    """sum_s c_nu(s l) e^{(i s l - rho) t} for real nonzero l."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for s in (1.0, -1.0):
        out = out + c_nu(ctx, nu, s * lam) * np.exp((1j * s * lam - ctx.rho) * t)
    return out


__all__ = [
    "BundleWeight",
    "JacobiParams",
    "b_case_integer",
    "b_epsilon",
    "b_nu",
    "b_nu_zero_limit",
    "c_ab",
    "c_nu",
    "hyp2f1",
    "jacobi_phi",
    "jacobi_phi_grid",
    "jacobi_phi_scaled",
    "jacobi_psi",
    "log_gamma",
    "nu_params",
    "phi_asymptotic",
    "phi_nu",
    "phi_nu_scaled",
]
