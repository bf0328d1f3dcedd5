import io

import numpy as np
import pytest
from conftest import cx
from hypothesis import given
from hypothesis import strategies as st

from quathyp import group as G
from quathyp import jacobi as J
from quathyp.specfun import JacobiParams, nu_params
from quathyp.verify import roundtrip_error

PROFILE = J.gaussian_cutoff_profile(3.0)


def test_forward_matches_mpmath(oracles):
    for r in oracles["forward_bump2"]:
        got = J.jacobi_forward(JacobiParams(r["alpha"], r["beta"]), J.bump_profile(2.0), r["lambda"])
        ref = cx(r["value"])
        assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))


def test_residues_match_mpmath(oracles):
    for r in oracles["residues"]:
        ds = J.discrete_spectrum(JacobiParams(r["alpha"], r["beta"]))
        assert np.isclose(ds.lambdas[r["k"]], cx(r["lambda"]))
        assert abs(ds.coefficients[r["k"]] - r["value"]) <= 1e-10 * abs(r["value"])


@pytest.mark.parametrize("ab", [(1.0, 5.0), (1.0, 6.0), (0.5, 4.0), (3.0, 9.0)])
def test_residues_match_contour(ab):
    p = JacobiParams(*ab)
    for lam, d in J.discrete_spectrum(p):
        assert abs(J.contour_residue(p, lam) - d) <= 1e-6 * abs(d)


def test_inversion_weights_are_half_closed_form():
    for ab in [(1.0, 5.0), (0.5, 4.0)]:
        ds = J.discrete_spectrum(JacobiParams(*ab))
        closed = [J.discrete_coefficient(ab[0], ab[1], k) for k in range(len(ds))]
        assert np.allclose(ds.inversion_weights, 0.5 * np.array(closed))


def test_roundtrip_continuous():
    assert roundtrip_error(JacobiParams(1.0, 2.0), PROFILE) <= 1e-4


def test_roundtrip_with_discrete_terms():
    assert roundtrip_error(JacobiParams(1.0, 5.0), PROFILE) <= 1e-3


@pytest.mark.parametrize("ab", [(1.0, 2.0), (1.0, 5.0), (0.5, 4.0), (1.0, 1.0)])
def test_plancherel(ab):
    assert J.plancherel_defect(JacobiParams(*ab), PROFILE) <= 1e-3


def test_plancherel_zero_profile():
    zero = J.RadialProfile(1.0, func=lambda t: np.zeros_like(t))
    assert J.plancherel_defect(JacobiParams(1.0, 2.0), zero) == 0.0


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_forward_is_linear(a, b):
    p = JacobiParams(1.0, 2.0)
    f, g = J.bump_profile(2.0), J.gaussian_cutoff_profile(2.5, 1.0, 0.5)
    h = J.RadialProfile(2.5, func=lambda t: a * f(t) + b * g(t))
    lams = np.array([0.5, 3.0])
    lhs = J.jacobi_forward(p, h, lams)
    rhs = a * J.jacobi_forward(p, f, lams) + b * J.jacobi_forward(p, g, lams)
    assert np.allclose(lhs, rhs, rtol=1e-8, atol=1e-8 * (abs(a) + abs(b) + 1) * np.abs(lhs).max())


def test_discrete_Dnu():
    ctx = G.GroupContext(1)
    d4, ref = J.discrete_Dnu(ctx, 4), J.discrete_spectrum(JacobiParams(1.0, 5.0))
    assert np.allclose(d4.lambdas, [3j, 1j])
    assert np.allclose(d4.coefficients, ref.coefficients, rtol=1e-10)
    assert len(J.discrete_Dnu(ctx, 0)) == 0 and len(J.discrete_Dnu(ctx, 1)) == 0
    ctx2 = G.GroupContext(2)
    assert all(len(J.discrete_Dnu(ctx2, nu)) == 0 for nu in range(4))
    assert np.allclose(J.discrete_Dnu(ctx2, 6).lambdas, [3j, 1j])


def test_discrete_spectrum_validation():
    with pytest.raises(ValueError):
        J.DiscreteSpectrum(((-1j, 1.0),))
    with pytest.raises(ValueError):
        J.DiscreteSpectrum(((1j, 1.0), (3j, 1.0)))


def test_measure_identity():
    ctx = G.GroupContext(2)
    for nu in range(5):
        assert np.max(J.measure_identity_residual(ctx, nu, np.linspace(0.1, 6, 30))) < 1e-12


def test_h_nu_is_reduced_transform():
    ctx = G.GroupContext(1)
    f = J.bump_profile(2.0)
    g = f.scaled(lambda t: (4 * np.cosh(t)) ** -2)
    assert np.isclose(J.h_nu(ctx, 2, f, 1.3), J.jacobi_forward(nu_params(ctx, 2), g, 1.3), rtol=1e-12)


def test_quadrature_rules():
    t, w = J.t_rule(3.0)
    # the head substitution u = t^2 suits integrands odd in t, like the Jacobi weights
    exact = 3.0 * np.sinh(3.0) - np.cosh(3.0) + 1.0
    assert np.isclose(np.sum(w * t * np.cosh(t)), exact, rtol=1e-12)
    lams, wl = J.lambda_rule(40.0)
    assert np.isclose(np.sum(wl * np.exp(-lams)), 1.0 - np.exp(-40.0), rtol=1e-12)


def test_profile_csv_roundtrip():
    t = np.linspace(0, 2, 201)
    buf = io.StringIO()
    J.write_profile_csv(buf, t, PROFILE(t))
    buf.seek(0)
    prof = J.profile_from_csv(buf)
    s = np.linspace(0, 2, 37)
    assert np.allclose(prof(s), PROFILE(s), atol=1e-5)
    with pytest.raises(ValueError):
        J.read_table_csv(io.StringIO("x,y\n1,2\n"), "t")


def test_profiles():
    assert np.isclose(J.bump_profile(2.0)(0.0), 1.0)
    assert J.bump_profile(2.0)(2.0) == 0 and PROFILE(3.5) == 0
    assert np.allclose(PROFILE(np.array([0.0, 1.0])), np.exp(-4 * np.array([0.0, 1.0])))
    with pytest.raises(ValueError):
        J.RadialProfile(1.0)
