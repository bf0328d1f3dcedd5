"""Regenerate oracles.json with mpmath at 40 digits.

    python tests/data/make_oracles.py

Every value here is computed from the defining hypergeometric or Gamma
expressions, independently of the package code.
"""
from __future__ import annotations

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40

PAIRS = [(1.0, 1.0), (1.0, 2.0), (1.0, 5.0), (3.0, 2.0), (0.0, 0.5), (-0.5, 0.5), (2.5, 0.0)]
LAMBDAS = [0.5, 1.0, 2.0, 5.0, 12.0, complex(1.0, -0.5), complex(0.0, 0.5), complex(3.0, 1.5)]
TS = [0.05, 0.3, 1.0, 2.0, 5.0, 10.0]
PSI_TS = [1.0, 2.5, 6.0]


def rho(a, b):
    return a + b + 1


def phi(a, b, lam, t):
    r = rho(a, b)
    il = 1j * mp.mpc(lam)
    return mp.hyp2f1((il + r) / 2, (-il + r) / 2, a + 1, -mp.sinh(t) ** 2)


def psi(a, b, lam, t):
    r = rho(a, b)
    il = 1j * mp.mpc(lam)
    z = 1 / mp.cosh(t) ** 2
    return (2 * mp.cosh(t)) ** (il - r) * mp.hyp2f1((r - il) / 2, (a - b + 1 - il) / 2, 1 - il, z)


def c_ab(a, b, lam):
    r = rho(a, b)
    il = 1j * mp.mpc(lam)
    return 2 ** (r - il) * mp.gamma(a + 1) * mp.gamma(il) / (mp.gamma((il + r) / 2) * mp.gamma((il + a - b + 1) / 2))


def c_nu(n, nu, lam):
    r = 2 * n + 1
    il = 1j * mp.mpc(lam)
    return 2 ** (r - il) * mp.gamma(r - 1) * mp.gamma(il) / (mp.gamma((il + r + nu) / 2) * mp.gamma((il + r - nu - 2) / 2))


def residue(a, b, lam0):
    """-i Res (c(l) c(-l))^{-1} at lam0 from a symmetric difference quotient."""
    eps = mp.mpf("1e-18")
    f = lambda l: 1 / (c_ab(a, b, l) * c_ab(a, b, -l))
    res = eps * (f(lam0 + eps) - f(lam0 - eps)) / 2
    return mp.re(-1j * res)


def bump(t, radius=2.0):
    x = (t / radius) ** 2
    return mp.e * mp.exp(-1 / (1 - x)) if x < 1 else mp.mpf(0)


def jacobi_forward_bump(a, b, lam):
    w = lambda t: bump(t) * phi(a, b, lam, t) * (2 * mp.sinh(t)) ** (2 * a + 1) * (2 * mp.cosh(t)) ** (2 * b + 1)
    return mp.quad(w, [0, 0.5, 1, 1.5, 1.9, 2])


def cx(z):
    z = mp.mpc(z)
    return [float(z.real), float(z.imag)]


def main():
    out = {"phi": [], "psi": [], "c_ab": [], "c_nu": [], "residues": [], "forward_bump2": []}
    for a, b in PAIRS:
        for lam in LAMBDAS:
            for t in TS:
                out["phi"].append({"alpha": a, "beta": b, "lambda": cx(lam), "t": t, "value": cx(phi(a, b, lam, t))})
            if mp.mpc(lam).imag <= 0 or mp.mpc(lam).real != 0:
                for t in PSI_TS:
                    out["psi"].append({"alpha": a, "beta": b, "lambda": cx(lam), "t": t, "value": cx(psi(a, b, lam, t))})
                out["c_ab"].append({"alpha": a, "beta": b, "lambda": cx(lam), "value": cx(c_ab(a, b, lam))})
    for n in (1, 2, 3):
        for nu in range(6):
            for lam in (0.5, 1.0, 2.0, 7.5, complex(1.0, -0.5)):
                out["c_nu"].append({"n": n, "nu": nu, "lambda": cx(lam), "value": cx(c_nu(n, nu, lam))})
    for a, b in [(1.0, 5.0), (1.0, 6.0), (0.5, 4.0), (1.0, 4.5), (3.0, 9.0)]:
        k = 0
        while b - a - 1 - 2 * k > 0:
            lam0 = 1j * (b - a - 1 - 2 * k)
            out["residues"].append({"alpha": a, "beta": b, "k": k, "lambda": cx(lam0), "value": float(residue(a, b, lam0))})
            k += 1
    for a, b in [(1.0, 2.0), (1.0, 1.0), (3.0, 2.0)]:
        for lam in (0.5, 2.0, 6.0):
            out["forward_bump2"].append({"alpha": a, "beta": b, "lambda": lam, "value": cx(jacobi_forward_bump(a, b, lam))})
    path = Path(__file__).with_name("oracles.json")
    path.write_text(json.dumps(out, indent=1, sort_keys=True) + "\n")
    print(f"wrote {path} ({sum(len(v) for v in out.values())} values)")


if __name__ == "__main__":
    main()
