import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quathyp import group as G
from quathyp import quat as Q
from quathyp.errors import DegenerateRadius, DimensionMismatch, NotInGroup

seeds = st.integers(0, 2**32 - 1)
ns = st.integers(1, 3)


@given(ns, seeds)
def test_products_preserve_form(n, seed):
    ctx = G.GroupContext(n)
    rng = np.random.default_rng(seed)
    g = G.random_element(ctx, rng) @ G.random_element(ctx, rng)
    assert g.form_residual() < 1e-9
    assert (g @ g.inverse()).form_residual() < 1e-9
    assert np.allclose((g @ g.inverse()).array, G.identity(ctx).array, atol=1e-9)


@given(ns, seeds, st.floats(-2, 2))
def test_iwasawa_equivariance(n, seed, s):
    ctx = G.GroupContext(n)
    rng = np.random.default_rng(seed)
    g, k = G.random_element(ctx, rng), G.random_k(n, rng)
    y = k.embed(ctx) @ g @ G.make_at(ctx, s)
    a, b = G.iwasawa(g), G.iwasawa(y)
    assert abs(b.H - a.H - s) < 1e-10
    assert np.allclose(b.vkappa.as_array(), Q.qmul(k.q, a.vkappa.as_array()), atol=1e-10)


def test_iwasawa_of_at():
    ctx = G.GroupContext(2)
    for t in (-1.5, 0.0, 0.7, 3.0):
        data = G.iwasawa(G.make_at(ctx, t))
        assert abs(data.H - t) < 1e-12
        assert np.allclose(data.vkappa.as_array(), [1, 0, 0, 0])


@given(ns, seeds)
def test_cartan_roundtrip(n, seed):
    ctx = G.GroupContext(n)
    g = G.random_element(ctx, np.random.default_rng(seed))
    data = G.cartan(g)
    assert np.allclose(G.reassemble(ctx, data).array, g.array, atol=1e-8)
    assert np.isclose(np.cosh(data.t), Q.qabs(g.d))
    assert np.allclose(data.w.as_array(), g.d / Q.qabs(g.d))


def test_cartan_degenerate_radius():
    ctx = G.GroupContext(1)
    data = G.cartan(G.identity(ctx))
    assert data.t == 0.0 and data.k1 is None
    with pytest.raises(DegenerateRadius):
        G.reassemble(ctx, data)


def test_cartan_bi_invariance(rng):
    ctx = G.GroupContext(2)
    g = G.random_element(ctx, rng)
    k1, k2 = G.random_k(2, rng), G.random_k(2, rng)
    y = k1.embed(ctx) @ g @ k2.embed(ctx)
    assert np.isclose(G.cartan(y).t, G.cartan(g).t, atol=1e-10)


@given(seeds, st.floats(0.0, 0.6), st.floats(0.5, 10.0))
def test_gap_inequality(seed, r, t):
    ctx = G.GroupContext(1)
    rng = np.random.default_rng(seed)
    g = G.element_with_origin_radius(ctx, r, rng)
    gp = G.gap(g, G.random_k(1, rng), t)
    assert gp >= -1e-12
    assert gp <= float(G.gap_bound(g, t)) * (1 + 1e-9)


def test_origin_radius_and_ball_action(rng):
    ctx = G.GroupContext(2)
    g = G.element_with_origin_radius(ctx, 0.4, rng)
    assert np.isclose(np.linalg.norm(g.origin_image()), 0.4)
    assert np.allclose(G.ball_action(g, np.zeros((2, 4))), g.origin_image())
    h = G.random_element(ctx, rng)
    x = 0.3 * rng.standard_normal((2, 4)) / 3
    assert np.allclose(G.ball_action(g @ h, x), G.ball_action(g, G.ball_action(h, x)), atol=1e-10)
    with pytest.raises(ValueError):
        G.ball_action(g, np.ones((2, 4)))


def test_validation():
    ctx = G.GroupContext(1)
    with pytest.raises(NotInGroup):
        G.GroupElement(ctx, 2.0 * G.identity(ctx).array)
    with pytest.raises(DimensionMismatch):
        G.GroupElement(ctx, np.zeros((3, 3, 4)))
    with pytest.raises(ValueError):
        G.GroupContext(0)


def test_density_scaled():
    ctx = G.GroupContext(2)
    t = np.linspace(0.1, 8, 20)
    assert np.allclose(G.scaled_density(ctx, t), G.density(ctx, t) * np.exp(-2 * ctx.rho * t))
