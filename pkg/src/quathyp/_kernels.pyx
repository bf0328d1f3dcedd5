# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-sample radial integrals for the ball averages.

Every K-integral reduces to samples xi uniform on the unit sphere of H^n.
With (c', d') the bottom row of g^{-1} and alpha = c' xi, the element
g^{-1} k a_t has bottom-right entry (alpha sinh t + d' cosh t) q, so its
Cartan radius and Sp(1) part only depend on alpha.  The spherical
function enters through a table of e^{rho s} phi(s) on a uniform grid,
interpolated by cubic Hermite polynomials.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, exp, cos, sin, floor

cnp.import_array()

cdef enum:
    MAX_NU = 32


cdef inline double complex _hermite(const double complex[::1] tab, const double complex[::1] dtab,
                                    double h, double s) noexcept nogil:
    cdef Py_ssize_t n = tab.shape[0]
    cdef double x = s / h
    cdef Py_ssize_t i = <Py_ssize_t>floor(x)
    if i < 0:
        i = 0
    if i > n - 2:
        i = n - 2
    cdef double u = x - i
    cdef double u2 = u * u
    cdef double u3 = u2 * u
    return ((2 * u3 - 3 * u2 + 1) * tab[i] + (u3 - 2 * u2 + u) * h * dtab[i]
            + (-2 * u3 + 3 * u2) * tab[i + 1] + (u3 - u2) * h * dtab[i + 1])


cdef inline double _qabs(double a, double b, double c, double d) noexcept nogil:
    return sqrt(a * a + b * b + c * c + d * d)


cdef inline double _ipow(double x, int m) noexcept nogil:
    cdef double out = 1.0
    while m > 0:
        if m & 1:
            out *= x
        x *= x
        m >>= 1
    return out


def _geometry(t, dp):
    t = np.asarray(t, dtype=float)
    sh, ch = np.sinh(t), np.cosh(t)
    return (np.ascontiguousarray(sh * sh), np.ascontiguousarray(2.0 * sh * ch), np.ascontiguousarray(ch * ch),
            np.ascontiguousarray(np.exp(t)), float(np.dot(dp, dp)))


cdef inline double complex _poly4(double w, double x, double y, double z, int deg,
                                  const long[:, ::1] exps, const double complex[::1] coefs) noexcept nogil:
    """sum_m coefs[m] w^e0 x^e1 y^e2 z^e3 for the exponent rows of ``exps``."""
    cdef double pw[4][MAX_NU + 1]
    cdef int k
    pw[0][0] = 1.0
    pw[1][0] = 1.0
    pw[2][0] = 1.0
    pw[3][0] = 1.0
    for k in range(1, deg + 1):
        pw[0][k] = pw[0][k - 1] * w
        pw[1][k] = pw[1][k - 1] * x
        pw[2][k] = pw[2][k - 1] * y
        pw[3][k] = pw[3][k - 1] * z
    cdef double complex acc = 0
    cdef Py_ssize_t m
    for m in range(exps.shape[0]):
        acc += coefs[m] * (pw[0][exps[m, 0]] * pw[1][exps[m, 1]] * pw[2][exps[m, 2]] * pw[3][exps[m, 3]])
    return acc


def ball_norm(const double[:, ::1] alpha, const double[::1] dp, const double[::1] t,
              const double[::1] wt, const double complex[::1] tab, const double complex[::1] dtab,
              double h, double rho, const long[::1] cut):
    """Cumulative int_0^{R_r} |e^{rho t} phi(s)|^2 wt dt per sample.

    ``wt`` already contains the quadrature weight times e^{-2 rho t} Delta(t);
    rho must be an integer.  Returns an array of shape (samples, len(cut)).
    """
    cdef Py_ssize_t ns = alpha.shape[0], nt = t.shape[0], nr = cut.shape[0]
    out_arr = np.zeros((ns, nr))
    cdef double[:, ::1] out = out_arr
    geo = _geometry(t, dp)
    cdef const double[::1] sh2 = geo[0], shch = geo[1], ch2 = geo[2], expt = geo[3]
    cdef double dd = geo[4]
    cdef int irho = <int>rho
    cdef Py_ssize_t i, j, r
    cdef double acc, aa, ad, r2, es, s
    cdef double complex X
    with nogil:
        for i in range(ns):
            aa = alpha[i, 0] * alpha[i, 0] + alpha[i, 1] * alpha[i, 1] + alpha[i, 2] * alpha[i, 2] + alpha[i, 3] * alpha[i, 3]
            ad = alpha[i, 0] * dp[0] + alpha[i, 1] * dp[1] + alpha[i, 2] * dp[2] + alpha[i, 3] * dp[3]
            acc = 0.0
            r = 0
            for j in range(nt):
                r2 = aa * sh2[j] + ad * shch[j] + dd * ch2[j]
                if r2 < 1.0:
                    r2 = 1.0
                es = sqrt(r2) + sqrt(r2 - 1.0)
                s = log(es)
                X = _ipow(expt[j] / es, irho) * _hermite(tab, dtab, h, s)
                acc += (X.real * X.real + X.imag * X.imag) * wt[j]
                while r < nr and cut[r] == j + 1:
                    out[i, r] = acc
                    r += 1
    return out_arr


def key_lemma(const double[:, ::1] alpha, const double[::1] dp, const double[::1] t,
              const double[::1] wt, const double complex[::1] tab, const double complex[::1] dtab,
              double h, double rho, const long[::1] cut, double lam, double complex c_plus,
              double complex c_minus, double vv, int nu, const long[:, ::1] exps,
              const double complex[::1] coefs):
    """Cumulative int ||e^{rho t}(phi(s) tau(w0 conj(omega)) v - A v)||^2 wt dt per sample.

    A = sum_s c(s lam) e^{(i s lam - rho)(t + H)}, H = log|alpha + d'|,
    w0 = (alpha + d')/|alpha + d'| and omega the unit part of
    alpha sinh t + d' cosh t.  The matrix coefficient <tau(p) v, v> is
    passed as a homogeneous polynomial of degree nu in the components of p
    (``exps`` rows and ``coefs``), and vv = ||v||^2.
    """
    if nu > MAX_NU:
        raise ValueError(f"nu > {MAX_NU} not supported by the compiled kernel")
    cdef Py_ssize_t ns = alpha.shape[0], nt = t.shape[0], nr = cut.shape[0]
    out_arr = np.zeros((ns, nr))
    cdef double[:, ::1] out = out_arr
    cdef double[::1] shv = np.sinh(np.asarray(t))
    cdef double[::1] chv = np.cosh(np.asarray(t))
    cdef double[::1] expt = np.exp(np.asarray(t))
    cdef double complex[::1] rot = np.exp(1j * lam * np.asarray(t))
    cdef int irho = <int>rho
    cdef Py_ssize_t i, j, r, m
    cdef double acc, z0, z1, z2, z3, sh, ch, s, rr, H, eH, b0, b1, b2, b3, bb, es
    cdef double p0, p1, p2, p3
    cdef double complex X, Y, coef, rotH, e
    with nogil:
        for i in range(ns):
            b0 = alpha[i, 0] + dp[0]
            b1 = alpha[i, 1] + dp[1]
            b2 = alpha[i, 2] + dp[2]
            b3 = alpha[i, 3] + dp[3]
            bb = _qabs(b0, b1, b2, b3)
            H = log(bb)
            eH = exp(-rho * H)
            b0 /= bb
            b1 /= bb
            b2 /= bb
            b3 /= bb
            rotH = cos(lam * H) + 1j * sin(lam * H)
            acc = 0.0
            r = 0
            for j in range(nt):
                sh = shv[j]
                ch = chv[j]
                z0 = alpha[i, 0] * sh + dp[0] * ch
                z1 = alpha[i, 1] * sh + dp[1] * ch
                z2 = alpha[i, 2] * sh + dp[2] * ch
                z3 = alpha[i, 3] * sh + dp[3] * ch
                rr = _qabs(z0, z1, z2, z3)
                es = rr + sqrt(rr * rr - 1.0) if rr > 1.0 else 1.0
                s = log(es)
                z0 /= rr
                z1 /= -rr
                z2 /= -rr
                z3 /= -rr
                # p = w0 * conj(omega)
                p0 = b0 * z0 - b1 * z1 - b2 * z2 - b3 * z3
                p1 = b0 * z1 + b1 * z0 + b2 * z3 - b3 * z2
                p2 = b0 * z2 - b1 * z3 + b2 * z0 + b3 * z1
                p3 = b0 * z3 + b1 * z2 - b2 * z1 + b3 * z0
                X = _ipow(expt[j] / es, irho) * _hermite(tab, dtab, h, s)
                e = rot[j] * rotH
                Y = eH * (c_plus * e + c_minus * (e.real - 1j * e.imag))
                coef = _poly4(p0, p1, p2, p3, nu, exps, coefs)
                acc += ((X.real * X.real + X.imag * X.imag + Y.real * Y.real + Y.imag * Y.imag) * vv
                        - 2.0 * (X * (Y.real - 1j * Y.imag) * coef).real) * wt[j]
                while r < nr and cut[r] == j + 1:
                    out[i, r] = acc
                    r += 1
    return out_arr
