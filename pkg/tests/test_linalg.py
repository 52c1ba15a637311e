import json
import math

import numpy as np
import pytest
from hypothesis import given, settings

from qkato.linalg import (
    Inclusion,
    MatrixFormatError,
    NotInRangeError,
    QArray,
    SubspaceBasis,
    adjoint,
    block_diag,
    dump_matrix,
    gauges,
    inner_product,
    kernel_basis,
    load_matrix,
    parse_matrix,
    random_qmatrix,
    random_qvector,
    random_unitary,
    range_basis,
    real_representation,
    solve,
    subspace_combine,
    subspace_compare,
    subspace_image,
)
from qkato.quaternion import Quaternion

from strategies import quaternions, rng_of, seeds, small_matrices

I = Quaternion(0, 1.0)
J = Quaternion(0, 0, 1.0)
NIL = QArray(np.array([[0, 1], [0, 0]], dtype=complex))


def e(n, k):
    return QArray.basis_vector(n, k)


def test_chi_of_j():
    assert np.array_equal(QArray.from_quaternions([[J]]).chi(), np.array([[0, 1], [-1, 0]]))


def test_chi_of_identity():
    assert np.array_equal(QArray.eye(3).chi(), np.eye(6))


@given(seeds)
def test_chi_homomorphism_and_adjoint(seed):
    rng = rng_of(seed)
    A, B = random_qmatrix(rng, 6), random_qmatrix(rng, 6)
    assert np.linalg.norm((A @ B).chi() - A.chi() @ B.chi(), 2) <= 1e-12 * A.norm() * B.norm()
    assert np.allclose(A.H.chi(), A.chi().conj().T, atol=1e-13)


def test_chi_roundtrip():
    A = random_qmatrix(rng_of(1), 4)
    assert QArray.from_chi(A.chi()).allclose(A, atol=0)
    v = random_qvector(rng_of(2), 4)
    assert QArray.from_column(v.column()).allclose(v, atol=0)


def test_adjoint_examples():
    D = QArray.from_quaternions([[I]])
    assert adjoint(D).allclose(QArray.from_quaternions([[-I]]))
    A = random_qmatrix(rng_of(3), 5)
    assert A.H.H.allclose(A, atol=0)


@given(seeds)
def test_adjoint_inner_product(seed):
    rng = rng_of(seed)
    n = int(rng.integers(1, 7))
    A = random_qmatrix(rng, n)
    phi, psi = random_qvector(rng, n), random_qvector(rng, n)
    assert inner_product(psi, A @ phi).allclose(inner_product(A.H @ psi, phi), atol=1e-12)


def test_inner_product_unit_vector():
    assert inner_product(e(3, 0), e(3, 0)) == Quaternion(1.0)


@given(seeds, quaternions)
def test_inner_product_sesquilinearity(seed, q):
    rng = rng_of(seed)
    phi, psi = random_qvector(rng, 3), random_qvector(rng, 3)
    tol = 1e-12 * max(1.0, abs(q)) * max(1.0, phi.fro_norm() * psi.fro_norm())
    assert inner_product(phi, psi.right_mul(q)).allclose(inner_product(phi, psi) * q, atol=tol)
    assert inner_product(phi.right_mul(q), psi).allclose(q.conj() * inner_product(phi, psi), atol=tol)


def test_matrix_action_commutes_with_right_scalars():
    rng = rng_of(4)
    A, phi = random_qmatrix(rng, 4), random_qvector(rng, 4)
    q = Quaternion(0.3, -1, 0.5, 2)
    assert (A @ phi.right_mul(q)).allclose((A @ phi).right_mul(q), atol=1e-12)


def test_gauge_examples():
    assert gauges(QArray.eye(3)) == pytest.approx((1.0, 1.0, 1.0))
    assert gauges(QArray.zeros((2, 2))) == (0.0, 0.0, math.inf)
    assert gauges(QArray.diag([2.0, 0.0])) == pytest.approx((2.0, 0.0, 2.0))


@given(small_matrices())
def test_gauges_of_adjoint(A):
    n1, k1, g1 = gauges(A)
    n2, k2, g2 = gauges(A.H)
    assert math.isclose(n1, n2, rel_tol=1e-10)
    assert math.isclose(g1, g2, rel_tol=1e-10)
    assert math.isclose((A.H @ A).norm(), n1**2, rel_tol=1e-10)


def test_kernel_range_examples():
    assert kernel_basis(QArray.eye(3)).dim == 0 and range_basis(QArray.eye(3)).dim == 3
    assert kernel_basis(QArray.zeros((3, 3))).dim == 3 and range_basis(QArray.zeros((3, 3))).dim == 0
    K, R = kernel_basis(NIL), range_basis(NIL)
    assert K.dim == R.dim == 1
    assert K.contains(e(2, 0)) and R.contains(e(2, 0))


@given(small_matrices())
@settings(max_examples=50)
def test_rank_nullity_and_orthogonality(A):
    A = A @ QArray.diag([1.0] * (A.shape[0] - 1) + [0.0])
    n = A.shape[0]
    K, R = kernel_basis(A), range_basis(A)
    assert K.dim + R.dim == n
    assert (A @ K.vectors).fro_norm() <= 1e-12 if K.dim else True
    perp = subspace_combine(R, mode="complement")
    assert subspace_compare(perp, kernel_basis(A.H)) is Inclusion.EQUAL


def test_subspace_compare_examples():
    U = SubspaceBasis.span(QArray(np.array([[1], [0]], dtype=complex)))
    assert subspace_compare(U, SubspaceBasis.full(2)) is Inclusion.SUBSET
    W = SubspaceBasis.span(QArray(np.array([[0], [1]], dtype=complex)))
    assert subspace_compare(U, W) is Inclusion.INCOMPARABLE
    v = QArray.from_quaternions([Quaternion(1.0), I])
    v1 = QArray(v.a[:, None], v.b[:, None])
    vj = v.right_mul(J)
    v2 = QArray(vj.a[:, None], vj.b[:, None])
    assert subspace_compare(SubspaceBasis.span(v1), SubspaceBasis.span(v2)) is Inclusion.EQUAL


def test_subspace_combine_examples():
    U = SubspaceBasis.span(QArray(np.array([[1], [0]], dtype=complex)))
    W = SubspaceBasis.span(QArray(np.array([[0], [1]], dtype=complex)))
    assert subspace_compare(subspace_combine(U, mode="complement"), W) is Inclusion.EQUAL
    assert subspace_combine(U, W, "sum").dim == 2
    X = subspace_combine(range_basis(NIL), kernel_basis(NIL), "intersect")
    assert X.dim == 1 and X.contains(e(2, 0))


def test_subspace_image():
    img = subspace_image(NIL, SubspaceBasis.full(2))
    assert img.dim == 1 and img.contains(e(2, 0))
    assert subspace_image(NIL, kernel_basis(NIL)).dim == 0


def test_solve_examples():
    psi = random_qvector(rng_of(5), 3)
    assert solve(QArray.eye(3), psi).allclose(psi)
    assert solve(QArray.diag([2.0]), e(1, 0)).allclose(e(1, 0) / 2)
    with pytest.raises(NotInRangeError):
        solve(NIL, e(2, 1))


def test_unitary_is_unitary():
    U = random_unitary(rng_of(6), 5)
    assert (U.H @ U).allclose(QArray.eye(5), atol=1e-12)


def test_block_diag():
    A = QArray.from_quaternions([[I]])
    B = QArray.diag([2.0, 3.0])
    D = block_diag(A, B)
    assert D.shape == (3, 3)
    assert D.allclose(QArray.diag([I, Quaternion(2.0), Quaternion(3.0)]))


def test_real_representation_matches_action():
    rng = rng_of(7)
    A, phi = random_qmatrix(rng, 3), random_qvector(rng, 3)
    lhs = real_representation(A) @ phi.components().ravel()
    assert np.allclose(lhs, (A @ phi).components().ravel(), atol=1e-12)


def test_matrix_file_roundtrip(tmp_path):
    A = random_qmatrix(rng_of(8), 3)
    p = tmp_path / "a.json"
    p.write_text(json.dumps(dump_matrix(A)))
    assert load_matrix(p).allclose(A, atol=0)


@pytest.mark.parametrize("obj", [
    {"n": 2, "entries": [[[1, 0, 0, 0]]]},
    {"n": 1, "entries": [[[1, 0, 0]]]},
    {"n": 1, "entries": [[[1, 0, 0, "x"]]]},
    {"n": 0, "entries": []},
    {"n": 1, "entries": [[[True, 0, 0, 0]]]},
    {"n": 1},
    {"n": 1, "entries": [[[1, 0, 0, 0]]], "extra": 1},
    [1, 2],
])
def test_parse_matrix_rejects(obj):
    with pytest.raises(MatrixFormatError):
        parse_matrix(obj)


def test_load_matrix_rejects_nan(tmp_path):
    p = tmp_path / "nan.json"
    p.write_text('{"n": 1, "entries": [[[NaN, 0, 0, 0]]]}')
    with pytest.raises(MatrixFormatError):
        load_matrix(p)
