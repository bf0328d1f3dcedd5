import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quathyp import numerics as N
from quathyp import quat as Q


def test_gauss_panel_exact_for_polynomials():
    x, w = N.gauss_panel(-1.0, 2.0, 8)
    assert np.isclose(np.sum(w * x**15), (2.0**16 - 1.0) / 16.0, rtol=1e-13)
    with pytest.raises(ValueError):
        N.gauss_panel(1.0, 1.0, 8)


def test_radial_rule_cuts():
    t, w, cut = N.radial_rule([1.5, 4.0, 10.0], m=16, width=1.0)
    assert np.all(np.diff(t) > 0)
    for r, c in zip([1.5, 4.0, 10.0], cut):
        assert np.isclose(np.sum(w[:c] * np.exp(-t[:c])), 1.0 - np.exp(-r), rtol=1e-13)
        assert np.all(t[:c] < r)
    with pytest.raises(ValueError):
        N.radial_rule([2.0, 1.0])


@given(st.integers(1, 3000), st.integers(0, 2**31))
def test_pairwise_sum_matches_fsum(n, seed):
    x = np.random.default_rng(seed).standard_normal(n)
    assert abs(N.pairwise_sum(x) - np.sum(x)) < 1e-10 * (1 + np.abs(x).sum())


def test_mean_and_stderr():
    x = np.random.default_rng(0).standard_normal((100_000, 2)) + [1.0, -2.0]
    m, s = N.mean_and_stderr(x)
    assert np.allclose(m, [1.0, -2.0], atol=5 * s)
    assert np.allclose(s, 1.0 / np.sqrt(100_000), rtol=0.02)


@given(st.integers(0, 20_000), st.integers(1, 20_000), st.integers(0, 2**20))
def test_normals_partition_invariant(start, length, seed):
    stop = start + length
    whole = N.normals(seed, 3, start, stop, 2)
    mid = start + length // 3
    parts = np.concatenate([N.normals(seed, 3, start, mid, 2), N.normals(seed, 3, mid, stop, 2)])
    assert np.array_equal(whole, parts)


def test_streams_and_seeds_differ():
    a = N.normals(1, 1, 0, 10, 4)
    assert not np.allclose(a, N.normals(2, 1, 0, 10, 4))
    assert not np.allclose(a, N.normals(1, 2, 0, 10, 4))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_haar_samples(n):
    u, q = N.haar_sp(n, 7, 0, 20_000)
    eye = Q.qmatmul(Q.qmat_adjoint(u[:5]), u[:5])
    assert np.allclose(eye[..., 0], np.eye(n)) and np.allclose(eye[..., 1:], 0)
    assert np.allclose(Q.qabs(q), 1.0)
    # first column is uniform on the sphere of H^n: E|u_11|^2 = 1/n
    assert abs(np.mean(Q.qabs(u[:, 0, 0]) ** 2) - 1.0 / n) < 0.01
    assert np.allclose(N.haar_first_column(n, 7, 0, 50), u[:50, :, 0])
    assert abs(np.mean(q[:, 0])) < 0.02


def test_chunks_cover_range():
    got = list(N.chunks(20_000, 5000))
    assert got[0][0] == 0 and got[-1][1] == 20_000
    assert all(a[1] == b[0] for a, b in zip(got, got[1:]))
    assert all((hi - lo) % N.BLOCK == 0 for lo, hi in got[:-1])


def test_mc_config_validation():
    with pytest.raises(ValueError):
        N.MCConfig(k_samples=0)
    assert N.MCConfig().as_dict()["seed"] == 42
