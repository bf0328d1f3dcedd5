import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from quathyp import quat as Q
from quathyp.errors import DimensionMismatch, RankDeficient

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
quats = arrays(np.float64, (4,), elements=finite)
units = quats.filter(lambda q: np.linalg.norm(q) > 1e-3).map(lambda q: q / np.linalg.norm(q))


def test_basis_products():
    assert Q.I * Q.J == Q.K
    assert Q.J * Q.K == Q.I
    assert Q.K * Q.I == Q.J
    assert Q.I * Q.I == -Q.ONE
    assert Q.J * Q.I == -Q.K


@given(quats, quats, quats)
def test_associative(p, q, r):
    lhs = Q.qmul(Q.qmul(p, q), r)
    rhs = Q.qmul(p, Q.qmul(q, r))
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(lhs).max()))


@given(quats, quats)
def test_norm_multiplicative_and_conj_antihom(p, q):
    assert np.isclose(Q.qabs(Q.qmul(p, q)), Q.qabs(p) * Q.qabs(q), rtol=1e-12, atol=1e-12)
    assert np.allclose(Q.qconj(Q.qmul(p, q)), Q.qmul(Q.qconj(q), Q.qconj(p)), atol=1e-10)


@given(units)
def test_inverse(q):
    assert np.allclose(Q.qmul(q, Q.qinv(q)), Q.qone(), atol=1e-12)
    assert np.allclose(Q.qinv(q), Q.qconj(q), atol=1e-12)


@given(quats, quats)
def test_complex_image_is_homomorphism(p, q):
    assert np.allclose(Q.to_complex(Q.qmul(p, q)), Q.to_complex(p) @ Q.to_complex(q), atol=1e-9)


def test_qmat_complex_roundtrip(rng):
    m = rng.standard_normal((3, 2, 4))
    assert np.allclose(Q.complex_to_qmat(Q.qmat_to_complex(m)), m)
    a, b = rng.standard_normal((3, 2, 4)), rng.standard_normal((2, 4, 4))
    assert np.allclose(Q.qmat_to_complex(Q.qmatmul(a, b)), Q.qmat_to_complex(a) @ Q.qmat_to_complex(b))


def test_qmatmul_shape_mismatch(rng):
    with pytest.raises(DimensionMismatch):
        Q.qmatmul(rng.standard_normal((2, 3, 4)), rng.standard_normal((2, 3, 4)))
    with pytest.raises(DimensionMismatch):
        Q.QMatrix(np.zeros((2, 2, 3)))


def test_gram_schmidt_is_unitary(rng):
    v = Q.QMatrix(rng.standard_normal((3, 3, 4)))
    u = Q.gram_schmidt_sp(v)
    prod = u.adjoint() @ u
    assert prod.max_abs_diff(Q.QMatrix.identity(3)) < 1e-12
    # first column is a positive multiple of the input column
    ratio = u.array[:, 0] / v.array[:, 0]
    assert np.all(ratio > 0) and np.allclose(ratio, ratio.flat[0])


def test_gram_schmidt_rank_deficient():
    v = np.zeros((2, 2, 4))
    v[0, 0, 0] = v[0, 1, 0] = 1.0
    with pytest.raises(RankDeficient):
        Q.gram_schmidt_sp(Q.QMatrix(v))


def test_qinner_conjugate_linear(rng):
    u, v = rng.standard_normal((3, 1, 4)), rng.standard_normal((3, 1, 4))
    q = rng.standard_normal(4)
    lhs = Q.qinner(Q.qmul(u, q), v)
    rhs = Q.qmul(Q.qconj(q), Q.qinner(u, v))
    assert np.allclose(lhs, rhs)
