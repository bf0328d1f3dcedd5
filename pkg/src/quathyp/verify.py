"""Named verification suites with JSON reports.

Each check carries an id, a short statement of the identity it measures,
the measured value, the tolerance and a pass flag.  Reports contain no
timings or host data, so identical configs give byte-identical JSON.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Sequence

import numpy as np

from . import fourier as Fo
from . import group as G
from . import jacobi as Jm
from . import poisson as P
from . import quat as Q
from . import specfun as S
from .numerics import MCConfig

SCHEMA = 1


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    value: float
    tolerance: float
    passed: bool
    relation: str = "<="


def check(id: str, anchor: str, value: float, tolerance: float, relation: str = "<=") -> Check:
    value = float(value)
    if relation == "<=":
        ok = value <= tolerance
    elif relation == ">=":
        ok = value >= tolerance
    elif relation == "==":
        ok = value == tolerance
    else:
        raise ValueError(relation)
    return Check(id, anchor, value, float(tolerance), bool(ok and np.isfinite(value)), relation)


@dataclass(frozen=True)
class VerifyConfig:
    n: int = 1
    nu: int = 1
    lambdas: tuple = (1.0,)
    radii: tuple = (5.0, 10.0, 20.0, 40.0)
    seed: int = 42
    k_samples: int = 200_000
    cases: int = 1000

    def mc(self) -> MCConfig:
        return MCConfig(seed=self.seed, k_samples=self.k_samples)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["lambdas"] = [float(x) for x in self.lambdas]
        d["radii"] = [float(x) for x in self.radii]
        return d


@dataclass
class SuiteReport:
    suite: str
    config: dict
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        checks = sorted(self.checks, key=lambda c: c.id)
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "passed": self.passed,
            "config": self.config,
            "checks": [asdict(c) for c in checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def summary(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}"]
        for c in sorted(self.checks, key=lambda c: c.id):
            flag = "ok  " if c.passed else "FAIL"
            lines.append(f"  {flag} {c.id:<40s} {c.value:.3e} {c.relation} {c.tolerance:.1e}")
        return "\n".join(lines)


# ------------------------------------------------------------------ group


def _random_product(ctx, rng, length=20):
    m = G.identity(ctx).array
    for _ in range(length):
        if rng.random() < 0.5:
            step = G.make_at(ctx, rng.uniform(-1.0, 1.0)).array
        else:
            step = G.random_k(ctx.n, rng).embed(ctx).array
        m = Q.qmatmul(m, step)
    return m


def group_checks(cfg: VerifyConfig) -> List[Check]:
    ctx = G.GroupContext(cfg.n)
    rng = np.random.default_rng(cfg.seed)
    form = max(G.form_residual(_random_product(ctx, rng)) for _ in range(cfg.cases))

    h_err = kap_err = 0.0
    for _ in range(cfg.cases):
        g = G.random_element(ctx, rng)
        k = G.random_k(ctx.n, rng)
        s = rng.uniform(-2.0, 2.0)
        y = k.embed(ctx) @ g @ G.make_at(ctx, s)
        a, b = G.iwasawa(g), G.iwasawa(y)
        h_err = max(h_err, abs(b.H - a.H - s))
        target = Q.qmul(k.q, a.vkappa.as_array())
        kap_err = max(kap_err, float(np.max(np.abs(b.vkappa.as_array() - target))))

    cart = 0.0
    for _ in range(cfg.cases):
        g = G.random_element(ctx, rng)
        data = G.cartan(g)
        if data.k1 is not None:
            cart = max(cart, float(np.max(np.abs(G.reassemble(ctx, data).array - g.array))))

    low, ratio = np.inf, 0.0
    for _ in range(cfg.cases):
        g = G.element_with_origin_radius(ctx, rng.uniform(0.0, 0.6), rng)
        k = G.random_k(ctx.n, rng)
        t = rng.uniform(0.5, 10.0)
        gp = G.gap(g, k, t)
        low = min(low, gp)
        ratio = max(ratio, gp / float(G.gap_bound(g, t)))

    lim = 0.0
    for _ in range(50):
        g = G.random_element(ctx, rng)
        w = G.cartan(g @ G.make_at(ctx, 20.0)).w.as_array()
        lim = max(lim, float(np.max(np.abs(w - G.iwasawa(g).vkappa.as_array()))))

    return [
        check("group.form_preservation", "m* J m = J for products of 20 generators", form, 1e-9),
        check("group.iwasawa_shift", "H(k g a_s) = H(g) + s", h_err, 1e-10),
        check("group.iwasawa_kappa", "vkappa(k g a_s) = q_k vkappa(g)", kap_err, 1e-10),
        check("group.cartan_roundtrip", "k1 a_t k2 reassembles g", cart, 1e-8),
        check("group.gap_nonnegative", "A+(y) - H(y) >= 0 for y = g^{-1} k a_t", low, -1e-12, ">="),
        check("group.gap_bound", "A+ - H <= (1+|g.0|)/(1-|g.0|) e^{-2t}", ratio, 1.0),
        check("group.kappa_limit", "w(g a_R) -> vkappa(g) at R = 20", lim, 1e-8),
    ]


# --------------------------------------------------------------- specfun

SPECFUN_PAIRS = ((1.0, 1.0), (1.0, 2.0), (1.0, 5.0), (3.0, 2.0))
SPECFUN_LAMBDAS = (0.5, 1.0, 2.0, 5.0)


def connection_residual(p: S.JacobiParams, lam: float, ts) -> float:
    """max |phi - sum_s c(s l) Psi_{s l}| e^{rho t} / max |phi| e^{rho t}; phi from the ODE route."""
    ts = np.asarray(ts, dtype=float)
    ref = S._phi_ode(p, [lam], ts)[0] * np.exp(p.rho_ab * ts)
    con = S.c_ab(p, lam) * S.jacobi_psi(p, lam, ts) + S.c_ab(p, -lam) * S.jacobi_psi(p, -lam, ts)
    con = con * np.exp(p.rho_ab * ts)
    return float(np.max(np.abs(ref - con)) / np.max(np.abs(ref)))


def c_limit_gap(p: S.JacobiParams, lam: complex, t: float = 15.0, two_term: bool = False) -> float:
    """|e^{(rho - i l) t} phi_l(t) - c(l)|, optionally minus c(-l) e^{-2 i l t}."""
    val = complex(S.jacobi_phi_scaled(p, lam, t)) * np.exp(-1j * lam * t)
    target = S.c_ab(p, lam)
    if two_term:
        target += S.c_ab(p, -lam) * np.exp(-2j * lam * t)
    return abs(val - target)


def ode_residual(p: S.JacobiParams, lam: float, ts, h: float = 1e-3) -> float:
    """Max |phi'' + [(2a+1) coth + (2b+1) tanh] phi' + (l^2 + rho^2) phi|.

    Derivatives by fourth-order central differences.  The three-point rule
    at step 1e-4 is limited by rounding (eps / h^2 ~ 1e-8 times the
    cancellation in phi near a = -1), not by the accuracy of phi.
    """
    ts = np.asarray(ts, dtype=float)
    f = lambda x: np.asarray(S.jacobi_phi(p, lam, x))
    f0, f1, fm1, f2, fm2 = f(ts), f(ts + h), f(ts - h), f(ts + 2 * h), f(ts - 2 * h)
    d1 = (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h)
    d2 = (-f2 + 16 * f1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)
    coef = (2 * p.alpha + 1) / np.tanh(ts) + (2 * p.beta + 1) * np.tanh(ts)
    return float(np.max(np.abs(d2 + coef * d1 + (lam**2 + p.rho_ab**2) * f0)))


def specfun_checks(cfg: VerifyConfig) -> List[Check]:
    rng = np.random.default_rng(cfg.seed)
    ts = np.linspace(1.0, 10.0, 91)
    conn = max(connection_residual(S.JacobiParams(a, b), lam, ts) for a, b in SPECFUN_PAIRS for lam in SPECFUN_LAMBDAS)
    lim2 = max(
        c_limit_gap(S.JacobiParams(a, b), lam - 0.5j, two_term=True) / abs(S.c_ab(S.JacobiParams(a, b), lam - 0.5j))
        for a, b in SPECFUN_PAIRS
        for lam in SPECFUN_LAMBDAS
    )
    p12 = S.JacobiParams(1.0, 2.0)
    psi = abs(complex(S.jacobi_psi(p12, 1.0, 12.0)) * np.exp((p12.rho_ab - 1j) * 12.0) - 1.0)
    ode = 0.0
    for _ in range(20):
        p = S.JacobiParams(rng.uniform(-0.9, 4.0), rng.uniform(-0.9, 4.0))
        ode = max(ode, ode_residual(p, rng.uniform(0.5, 4.0), np.linspace(0.5, 3.0, 11)))
    z = rng.uniform(0.2, 8.0, 50) + 1j * rng.uniform(-8.0, 8.0, 50)
    lg = np.max(np.abs(np.exp(S.log_gamma(z + 1) - S.log_gamma(z)) / z - 1.0))
    ctx = G.GroupContext(cfg.n)
    meas = max(float(np.max(Jm.measure_identity_residual(ctx, nu, np.linspace(0.1, 5.0, 50)))) for nu in range(6))
    cnu = max(
        abs(S.c_nu(ctx, nu, lam) - 2.0**-nu * S.c_ab(S.nu_params(ctx, nu), lam)) / abs(S.c_nu(ctx, nu, lam))
        for nu in range(6)
        for lam in SPECFUN_LAMBDAS
    )
    return [
        check("specfun.connection", "phi = c(l) Psi_l + c(-l) Psi_{-l}, t in [1,10]", conn, 1e-8),
        check("specfun.c_limit_two_term", "e^{(rho-il)t} phi_l(t) = c(l) + c(-l) e^{-2ilt} + O(e^{-2t}) at t=15", lim2, 1e-8),
        check("specfun.psi_asymptotic", "e^{(rho-il)t} Psi_l(t) -> 1 at t=12", psi, 1e-8),
        check("specfun.ode_residual", "Jacobi operator annihilates phi", ode, 1e-6),
        check("specfun.log_gamma_recurrence", "Gamma(z+1) = z Gamma(z)", lg, 1e-12),
        check("specfun.measure_identity", "Delta(t) = (2 cosh t)^{-2nu} Delta_{rho-2,nu+1}(t)", meas, 1e-12),
        check("specfun.c_nu_reduction", "c_nu = 2^{-nu} c_{rho-2,nu+1}", cnu, 1e-12),
    ]


# ---------------------------------------------------------------- jacobi


def roundtrip_error(p: S.JacobiParams, f: Jm.RadialProfile, lambda_max: float = 40.0) -> float:
    ts = np.linspace(0.0, f.support_radius - 0.1, 8)
    rec = Jm.jacobi_inverse(p, lambda l: Jm.jacobi_forward(p, f, l), Jm.discrete_spectrum(p), ts, lambda_max)
    return float(np.max(np.abs(rec - f(ts))))


def jacobi_checks(cfg: VerifyConfig) -> List[Check]:
    f = Jm.gaussian_cutoff_profile(3.0)
    p12, p15 = S.JacobiParams(1.0, 2.0), S.JacobiParams(1.0, 5.0)
    ds = Jm.discrete_spectrum(p15)
    res = max(abs(d - Jm.contour_residue(p15, l)) / abs(d) for l, d in ds)
    ctx1 = G.GroupContext(1)
    d4 = Jm.discrete_Dnu(ctx1, 4)
    same = max(
        max(abs(a - b) for a, b in zip(d4.lambdas, ds.lambdas)),
        max(abs(a - b) / abs(b) for a, b in zip(d4.coefficients, ds.coefficients)),
    ) if len(d4) == len(ds) else np.inf
    empty = sum(len(Jm.discrete_Dnu(ctx1, nu)) for nu in (0, 1))
    return [
        check("jacobi.roundtrip_continuous", "f = J^{-1} J f, (a,b) = (1,2)", roundtrip_error(p12, f), 1e-4),
        check("jacobi.roundtrip_discrete", "f = J^{-1} J f with discrete terms, (a,b) = (1,5)", roundtrip_error(p15, f), 1e-3),
        check("jacobi.plancherel_continuous", "int |f|^2 Delta = (1/2pi) int |Jf|^2 |c|^{-2}, (1,2)", Jm.plancherel_defect(p12, f), 1e-3),
        check("jacobi.plancherel_discrete", "Plancherel with discrete terms, (1,5)", Jm.plancherel_defect(p15, f), 1e-3),
        check("jacobi.residue_closed_form", "closed-form d_k = -i Res (c(l)c(-l))^{-1}, (1,5)", res, 1e-6),
        check("jacobi.discrete_Dnu_match", "D_nu(n=1, nu=4) = D_{1,5}", same, 1e-10),
        check("jacobi.discrete_Dnu_empty", "D_nu empty for nu <= rho-2", empty, 0, "=="),
    ]


# --------------------------------------------------------------- poisson


def _unit(nu: int) -> np.ndarray:
    v = np.zeros(nu + 1, dtype=complex)
    v[0] = 1.0
    return v


def poisson_checks(cfg: VerifyConfig) -> List[Check]:
    ctx = G.GroupContext(cfg.n)
    mc = cfg.mc()
    rng = np.random.default_rng(cfg.seed)
    g = G.element_with_origin_radius(ctx, 0.5, rng)
    e = G.identity(ctx)
    v = _unit(cfg.nu)
    out = []
    for lam in cfg.lambdas:
        lim = P.poisson_norm_limit(ctx, cfg.nu, lam, v)
        for tag, h in (("e", e), ("g", g)):
            rep = P.ball_average(ctx, P.poisson_generator(ctx, cfg.nu, lam, h, v), cfg.radii, mc)
            out.append(
                check(
                    f"poisson.norm_limit[{tag},l={lam:g}]",
                    "(1/R) int_{B(R)} ||P f||^2 -> 2|c(l)|^2 ||f||^2",
                    abs(rep.extrapolated_limit / lim - 1.0),
                    0.03,
                )
            )
    probe = []
    for lam in (0.5, 1.0, 2.0, 4.0, 8.0):
        rep = P.ball_average(ctx, P.poisson_generator(ctx, cfg.nu, lam, e, v), cfg.radii, mc)
        probe.append(rep.sup_value / abs(S.c_nu(ctx, cfg.nu, lam)) ** 2)
    const = max(max(probe), 1.0 / min(probe))
    out.append(check("poisson.two_sided_bound", "sup_R ball average in [1/C, C] |c(l)|^2 ||f||^2", const, 4.0))

    lam = float(cfg.lambdas[0])
    f = P.boundary_generator(ctx, cfg.nu, lam, g, v)
    nrm, se = P.l2_norm_sq(f, mc)
    out.append(check("poisson.generator_norm", "||f^g_{l,v}||_{L2(K)} = ||v||", abs(nrm - 1.0) / max(se, 1e-3), 4.0))
    x = G.random_element(ctx, rng, 1.5)
    quad, qse = P.poisson_quadrature(ctx, cfg.nu, lam, f, x, mc)
    exact = P.poisson_generator(ctx, cfg.nu, lam, g, v)(x)
    z = np.max(np.abs(quad.coords - exact.coords) / np.maximum(qse, 1e-12))
    out.append(check("poisson.quadrature_vs_closed_form", "P_l f^g_{l,v}(x) = Phi_l(g^{-1}x) v (in stderrs)", z, 4.0))

    p = S.nu_params(ctx, cfg.nu)
    exps = [P.remainder_exponent(ctx, cfg.nu, l)[0] for l in (0.5, 1.0, 2.0)]
    target = ctx.rho + 2.0
    out.append(check("poisson.remainder_rate_bound", "phi - asymptotic = O(e^{-(rho+2)t})", target - min(exps), 0.1))
    if p.alpha != p.beta:
        out.append(
            check("poisson.remainder_rate_exact", "remainder exponent equals rho+2", max(abs(x - target) for x in exps), 0.1)
        )
    return out


def keylemma_checks(cfg: VerifyConfig) -> List[Check]:
    ctx = G.GroupContext(cfg.n)
    mc = cfg.mc()
    rng = np.random.default_rng(cfg.seed)
    g = G.element_with_origin_radius(ctx, 0.6, rng)
    v = _unit(cfg.nu)
    out = []
    for lam in cfg.lambdas:
        lim = P.poisson_norm_limit(ctx, cfg.nu, lam, v)
        re = P.key_lemma_defect(ctx, cfg.nu, lam, G.identity(ctx), v, cfg.radii, mc)
        rg = P.key_lemma_defect(ctx, cfg.nu, lam, g, v, cfg.radii, mc)
        rise = float(np.max(np.diff(re.values)) / lim)
        out += [
            check(f"keylemma.monotone[l={lam:g}]", "defect at g=e decreases in R", rise, 0.0),
            check(f"keylemma.identity[l={lam:g}]", "defect at g=e, largest R, relative to 2|c|^2||v||^2", re.values[-1] / lim, 0.01),
            check(f"keylemma.random_g[l={lam:g}]", "defect at |g.0| = 0.6, largest R, relative", rg.values[-1] / lim, 0.05),
        ]
    return out


# --------------------------------------------------------------- fourier


def fourier_checks(cfg: VerifyConfig) -> List[Check]:
    ctx = G.GroupContext(cfg.n)
    mc = cfg.mc()
    rng = np.random.default_rng(cfg.seed)
    v = _unit(cfg.nu)
    out = []

    F0 = Fo.spherical_bump_section(ctx, 0, Jm.gaussian_cutoff_profile(3.0), [1.0])
    name, dev = Fo.plancherel_report(ctx, 0, F0).classify(0.1)
    margin = min(dev.values())
    out.append(check("fourier.plancherel_constant", "constant of the continuous Plancherel term is 1/(2pi)", margin, 0.1))
    out.append(check("fourier.plancherel_unique", "exactly one candidate constant within 10%", 0 if name == "1/(2pi)" else 1, 0, "=="))

    F = Fo.spherical_bump_section(ctx, cfg.nu, Jm.gaussian_cutoff_profile(3.0), v)
    out.append(check("fourier.plancherel_sections", "int ||F||^2 = (1/2pi) int |H f|^2 |c|^{-2} + discrete", Fo.plancherel_report(ctx, cfg.nu, F).defect(), 1e-3))
    ts = np.array([0.5, 1.0, 1.5])
    rec = Fo.section_inverse(ctx, cfg.nu, F, ts)
    err = np.max(np.abs(rec - F.profile(ts)[:, None] * v[None, :])) / F.profile.sup_norm()
    out.append(check("fourier.inversion", "F(a_t) rebuilt from slices, relative to sup |F|", err, 0.01))

    bump = Fo.spherical_bump_section(ctx, cfg.nu, Jm.bump_profile(2.0), v)
    ratios = np.array([Fo.restriction_ratio(ctx, cfg.nu, bump, lam, mc) for lam in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)])
    out.append(check("fourier.restriction_uniform", "restriction ratio max / median", ratios.max() / np.median(ratios), 3.0))

    if cfg.nu <= ctx.rho - 2:
        avg = Fo.spectral_average(ctx, cfg.nu, bump, cfg.radii, mc=mc)
        out.append(check("fourier.spectral_limit", "(1/2pi) int (1/R) int_{B(R)} ||Q_l F||^2 dl -> 2 ||F||^2", abs(avg.limit_ratio / 2.0 - 1.0), 0.1))
        out.append(check("fourier.spectral_bound", "sup_R aggregate <= 2^2 ||F||^2 (norm ratio <= 2)", avg.sup_norm_ratio, 2.0))

    small = Fo.spherical_bump_section(ctx, cfg.nu, Jm.gaussian_cutoff_profile(1.5, 4.0, 0.5), v)
    k = G.random_k(ctx.n, rng)
    lam = float(cfg.lambdas[0])
    mc_val, se = Fo.helgason_fourier(ctx, cfg.nu, small, lam, k, mc)
    exact = Fo.radial_slice(ctx, cfg.nu, small, lam, k)
    z = np.max(np.abs(mc_val.coords - exact.coords) / np.maximum(se, 1e-12))
    out.append(check("fourier.slice_closed_form", "F F_v(l,k) = H f(l) tau(k^{-1}) v (in stderrs)", z, 4.0))
    return out


SUITES: Dict[str, Callable[[VerifyConfig], List[Check]]] = {
    "group": group_checks,
    "specfun": specfun_checks,
    "jacobi": jacobi_checks,
    "poisson": poisson_checks,
    "fourier": fourier_checks,
    "keylemma": keylemma_checks,
}


def run_suite(name: str, cfg: VerifyConfig = VerifyConfig()) -> SuiteReport:
    if name == "all":
        checks = [c for key in SUITES for c in SUITES[key](cfg)]
    elif name in SUITES:
        checks = SUITES[name](cfg)
    else:
        raise KeyError(name)
    return SuiteReport(name, cfg.as_dict(), checks)
