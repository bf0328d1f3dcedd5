"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and results up to rounding; used when the extension is
not built or when QUATHYP_PURE is set.
"""
from __future__ import annotations

import numpy as np

CHUNK = 512


def _hermite(tab, dtab, h, s):
    x = s / h
    i = np.clip(np.floor(x).astype(np.int64), 0, tab.size - 2)
    u = x - i
    u2 = u * u
    u3 = u2 * u
    return (
        (2 * u3 - 3 * u2 + 1) * tab[i]
        + (u3 - 2 * u2 + u) * h * dtab[i]
        + (-2 * u3 + 3 * u2) * tab[i + 1]
        + (u3 - u2) * h * dtab[i + 1]
    )


def _radius_and_unit(alpha, dp, sh, ch):
    z = alpha[:, None, :] * sh[None, :, None] + dp[None, None, :] * ch[None, :, None]
    rr = np.sqrt(np.sum(z * z, axis=-1))
    s = np.arccosh(np.maximum(rr, 1.0))
    return z, rr, s


def _cumulate(vals, cut):
    # sequential per-sample sums, matching the compiled loop order
    acc = np.cumsum(vals, axis=1)
    return acc[:, np.asarray(cut) - 1]


def ball_norm(alpha, dp, t, wt, tab, dtab, h, rho, cut):
    alpha = np.asarray(alpha, dtype=float)
    sh, ch = np.sinh(t), np.cosh(t)
    out = np.zeros((alpha.shape[0], len(cut)))
    for lo in range(0, alpha.shape[0], CHUNK):
        a = alpha[lo : lo + CHUNK]
        _, _, s = _radius_and_unit(a, dp, sh, ch)
        X = np.exp(rho * (t[None, :] - s)) * _hermite(tab, dtab, h, s)
        out[lo : lo + CHUNK] = _cumulate(np.abs(X) ** 2 * wt[None, :], cut)
    return out


def poly4(p, exps, coefs):
    """sum_m coefs[m] prod_i p_i^exps[m, i] over the last axis of p."""
    p = np.asarray(p, dtype=float)
    exps = np.asarray(exps)
    deg = int(exps.max(initial=0))
    pw = p[..., None] ** np.arange(deg + 1)  # (..., 4, deg+1)
    mono = pw[..., 0, exps[:, 0]] * pw[..., 1, exps[:, 1]] * pw[..., 2, exps[:, 2]] * pw[..., 3, exps[:, 3]]
    return mono @ np.asarray(coefs, dtype=complex)


def key_lemma(alpha, dp, t, wt, tab, dtab, h, rho, cut, lam, c_plus, c_minus, vv, nu, exps, coefs):
    alpha = np.asarray(alpha, dtype=float)
    sh, ch = np.sinh(t), np.cosh(t)
    out = np.zeros((alpha.shape[0], len(cut)))
    for lo in range(0, alpha.shape[0], CHUNK):
        a = alpha[lo : lo + CHUNK]
        beta = a + dp[None, :]
        bb = np.sqrt(np.sum(beta * beta, axis=-1))
        H = np.log(bb)
        w0 = beta / bb[:, None]
        z, rr, s = _radius_and_unit(a, dp, sh, ch)
        om = z / rr[..., None]
        om[..., 1:] *= -1.0
        p = _qmul(w0[:, None, :], om)
        X = np.exp(rho * (t[None, :] - s)) * _hermite(tab, dtab, h, s)
        ph = lam * (t[None, :] + H[:, None])
        Y = np.exp(-rho * H)[:, None] * (c_plus * np.exp(1j * ph) + c_minus * np.exp(-1j * ph))
        coef = poly4(p, exps, coefs)
        vals = (np.abs(X) ** 2 + np.abs(Y) ** 2) * vv - 2.0 * np.real(X * np.conj(Y) * coef)
        out[lo : lo + CHUNK] = _cumulate(vals * wt[None, :], cut)
    return out


def _qmul(p, q):
    a1, b1, c1, d1 = np.moveaxis(np.broadcast_to(p, np.broadcast_shapes(p.shape, q.shape)), -1, 0)
    a2, b2, c2, d2 = np.moveaxis(np.broadcast_to(q, np.broadcast_shapes(p.shape, q.shape)), -1, 0)
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )
