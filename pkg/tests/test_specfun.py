import numpy as np
import pytest
from conftest import cx
from hypothesis import given
from hypothesis import strategies as st

from quathyp import group as G
from quathyp import specfun as S
from quathyp.errors import ParameterPole, PoleAtNonpositiveInteger, SpectralPole
from quathyp.verify import c_limit_gap, connection_residual, ode_residual

params = st.tuples(st.floats(-0.9, 4.0), st.floats(-0.9, 4.0)).map(lambda ab: S.JacobiParams(*ab))
real_lams = st.floats(0.1, 15.0)


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_phi_matches_mpmath(oracles):
    worst = max(_rel(S.jacobi_phi(S.JacobiParams(r["alpha"], r["beta"]), cx(r["lambda"]), r["t"]), cx(r["value"])) for r in oracles["phi"])
    assert worst < 1e-10


def test_psi_matches_mpmath(oracles):
    worst = max(_rel(S.jacobi_psi(S.JacobiParams(r["alpha"], r["beta"]), cx(r["lambda"]), r["t"]), cx(r["value"])) for r in oracles["psi"])
    assert worst < 1e-12


def test_c_functions_match_mpmath(oracles):
    assert max(_rel(S.c_ab(S.JacobiParams(r["alpha"], r["beta"]), cx(r["lambda"])), cx(r["value"])) for r in oracles["c_ab"]) < 1e-12
    assert max(_rel(S.c_nu(G.GroupContext(r["n"]), r["nu"], cx(r["lambda"])), cx(r["value"])) for r in oracles["c_nu"]) < 1e-12


@given(params, real_lams, st.floats(0.0, 8.0))
def test_phi_even_in_lambda_and_bounded(p, lam, t):
    a, b = S.jacobi_phi(p, lam, t), S.jacobi_phi(p, -lam, t)
    assert abs(a - b) <= 1e-9 * max(1.0, abs(a))
    assert abs(a.imag) <= 1e-9
    if p.alpha >= p.beta >= -0.5 or (p.alpha >= -0.5 and p.beta >= -0.5):
        assert abs(a) <= 1.0 + 1e-9


@given(params, st.floats(0.0, 5.0))
def test_phi_at_origin_and_trivial_parameter(p, t):
    assert abs(S.jacobi_phi(p, 2.0, 0.0) - 1.0) < 1e-13
    # phi_{i rho} = 1
    assert abs(S.jacobi_phi(p, 1j * p.rho_ab, t) - 1.0) < 1e-8


@given(params, real_lams)
def test_c_conjugate_symmetry(p, lam):
    assert _rel(S.c_ab(p, -lam), np.conj(S.c_ab(p, lam))) < 1e-12


@pytest.mark.parametrize("ab", [(1, 1), (1, 2), (1, 5), (3, 2)])
@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 5.0])
def test_connection_formula(ab, lam):
    assert connection_residual(S.JacobiParams(*ab), lam, np.linspace(1, 10, 46)) < 1e-8


@pytest.mark.parametrize("ab", [(1, 1), (1, 2), (1, 5), (3, 2)])
def test_c_limit_after_oscillating_term(ab):
    p = S.JacobiParams(*ab)
    for lam in (0.5, 1.0, 2.0, 5.0):
        z = lam - 0.5j
        assert c_limit_gap(p, z, 15.0, two_term=True) <= 1e-8 * abs(S.c_ab(p, z))
        # the single-term gap is the oscillating term itself, of size e^{-15}|c(-l)|
        one = c_limit_gap(p, z, 15.0)
        assert np.isclose(one, abs(S.c_ab(p, -z)) * np.exp(-15.0), rtol=1e-4)


@given(params, st.floats(0.5, 4.0))
def test_ode_residual(p, lam):
    assert ode_residual(p, lam, np.linspace(0.5, 3.0, 6)) < 1e-6


def test_route_continuity():
    # values just inside and outside the series and connection regions agree
    p = S.JacobiParams(1.0, 2.0)
    for lam in (0.3, 4.0, 9.0, 30.0):
        for t in (S.T_SERIES_MAX, S.T_PSI_MIN, 0.2):
            a, b = S.jacobi_phi(p, lam, t - 1e-9), S.jacobi_phi(p, lam, t + 1e-9)
            assert abs(a - b) < 1e-8


def test_near_imaginary_integer_matches_mpmath():
    # discrete points of (1, 5) are 3i and i, where c(+-l) and Psi_{+-l} have poles
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    p = S.JacobiParams(1.0, 5.0)
    for lam in (3j, 3j + 1e-6, 3j + 1e-3, 1j + 1e-5, 2j):
        for t in (1.0, 3.0, 6.0):
            ref = complex(mp.hyp2f1((1j * lam + 7) / 2, (-1j * lam + 7) / 2, 2, -mp.sinh(t) ** 2))
            assert abs(S.jacobi_phi(p, lam, t) - ref) <= 1e-8 * abs(ref) + 1e-25


def test_phi_nu_reduction():
    ctx = G.GroupContext(2)
    t = np.linspace(0, 4, 9)
    for nu in range(4):
        direct = np.cosh(t) ** nu * S.jacobi_phi(S.nu_params(ctx, nu), 1.5, t)
        assert np.allclose(S.phi_nu(ctx, nu, 1.5, t), direct)
        assert np.allclose(S.phi_nu_scaled(ctx, nu, 1.5, t), direct * np.exp(ctx.rho * t))
        assert abs(S.c_nu(ctx, nu, 1.5) - 2.0**-nu * S.c_ab(S.nu_params(ctx, nu), 1.5)) < 1e-12 * abs(S.c_nu(ctx, nu, 1.5))


def test_phi_asymptotic_matches_at_large_t():
    ctx = G.GroupContext(1)
    t = np.array([12.0, 15.0])
    for nu in (0, 1, 2):
        num = S.phi_nu_scaled(ctx, nu, 1.3, t)
        asym = S.phi_asymptotic(ctx, nu, 1.3, t) * np.exp(ctx.rho * t)
        assert np.max(np.abs(num - asym)) < 1e-8


def test_b_nu_cases():
    ctx = G.GroupContext(1)  # rho = 3; b = c when nu is odd
    for nu in (1, 3):
        assert S.b_case_integer(ctx, nu) and S.b_epsilon(ctx, nu) == -1
        assert _rel(S.b_nu(ctx, nu, 0.7), S.c_nu(ctx, nu, 0.7)) < 1e-12
    for nu in (0, 2):
        assert not S.b_case_integer(ctx, nu) and S.b_epsilon(ctx, nu) == 1
        assert _rel(S.b_nu(ctx, nu, 0.7), 0.7 * S.c_nu(ctx, nu, 0.7)) < 1e-12
    for nu in range(5):
        assert _rel(S.b_nu(ctx, nu, 1e-7), S.b_nu_zero_limit(ctx, nu)) < 1e-5
        assert S.b_nu(ctx, nu, 0.0) == S.b_nu_zero_limit(ctx, nu)


@pytest.mark.parametrize("nu", [0, 1, 2, 3])
def test_b_nu_growth_exponent(nu):
    ctx = G.GroupContext(1)
    eps = S.b_epsilon(ctx, nu)
    lams = np.array([200.0, 400.0])
    mags = np.array([abs(S.b_nu(ctx, nu, l)) ** -1 for l in lams])
    slope = np.log(mags[1] / mags[0]) / np.log((1 + lams[1] ** 2) / (1 + lams[0] ** 2))
    assert abs(slope - (2 * ctx.rho - 4 - eps) / 4) < 0.01


def test_hyp2f1_against_scipy():
    from scipy.special import hyp2f1

    for z in (-0.3, -2.0, -50.0):
        assert np.isclose(S.hyp2f1(0.7, 1.3, 2.1, z), hyp2f1(0.7, 1.3, 2.1, z), rtol=1e-12)
    assert S.hyp2f1(0.0, 1.0, 2.0, -3.0) == 1.0


def test_errors():
    with pytest.raises(SpectralPole):
        S.c_ab(S.JacobiParams(1, 2), 0.0)
    with pytest.raises(SpectralPole):
        S.c_nu(G.GroupContext(1), 0, 2j)
    with pytest.raises(PoleAtNonpositiveInteger):
        S.log_gamma(-2.0)
    with pytest.raises(ParameterPole):
        S.hyp2f1(1.0, 1.0, -1.0, -0.5)
    with pytest.raises(ValueError):
        S.jacobi_psi(S.JacobiParams(1, 2), 1.0, 0.5)
    with pytest.raises(ValueError):
        S.JacobiParams(-1.0, 0.0)
