import math

import numpy as np
import pytest
from hypothesis import given, settings

from qkato.linalg import QArray, random_qmatrix, random_qvector, random_unitary
from qkato.quaternion import EigenSphere, ImaginaryUnit, Quaternion, assemble
from qkato.spectrum import (
    MEMBERSHIP_KINDS,
    IndeterminateMembership,
    SpectralPointError,
    Verdict,
    classify,
    cluster_spheres,
    hausdorff_distance,
    lower_index,
    membership,
    power_estimates,
    power_factorization_residual,
    pseudo_resolvent,
    resolvent_apply,
    right_eigenpairs,
    s_spectrum,
    spectral_radius,
    spectral_spheres,
)
from qkato.verify import jordan_block

from strategies import quaternions, rng_of, seeds, small_matrices

I = Quaternion(0, 1.0)
NIL = QArray(np.array([[0, 1], [0, 0]], dtype=complex))


def spheres(A, **kw):
    return [(round(s.re, 9), round(s.im, 9), m) for s, m in spectral_spheres(A, **kw)]


def test_pseudo_resolvent_examples():
    q = Quaternion(0.5, 1, -1, 2)
    assert pseudo_resolvent(QArray.zeros((3, 3)), q).allclose(QArray.eye(3) * q.norm2())
    assert pseudo_resolvent(QArray.eye(2), Quaternion(1.0)).allclose(QArray.zeros((2, 2)), atol=0)


@given(small_matrices(), quaternions)
def test_pseudo_resolvent_is_conjugation_invariant(A, q):
    assert pseudo_resolvent(A, q).allclose(pseudo_resolvent(A, q.conj()), atol=0)


def test_sphere_examples():
    assert spheres(QArray.from_quaternions([[I]])) == [(0.0, 1.0, 1)]
    assert spheres(QArray.eye(2)) == [(1.0, 0.0, 2)]
    assert spheres(NIL) == [(0.0, 0.0, 2)]


def test_spheres_of_diagonal():
    A = QArray.diag([Quaternion(1, 0, 2), Quaternion(-1.0), Quaternion(1, 2)])
    assert spheres(A) == [(-1.0, 0.0, 1), (1.0, 2.0, 2)]


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("lam", [0.0, 0.7, Quaternion(0.3, 0.9)])
def test_jordan_block_clusters_into_one_sphere(k, lam):
    lam_q = lam if isinstance(lam, Quaternion) else Quaternion(lam)
    U = random_unitary(rng_of(k), k)
    A = U @ jordan_block(k, lam_q) @ U.H
    out = spectral_spheres(A)
    assert len(out) == 1 and out[0][1] == k
    s = out[0][0]
    assert s.distance(EigenSphere(lam_q.w, lam_q.imag_norm())) < 1e-3


def test_cluster_spheres_with_explicit_radius():
    eigs = np.array([1 + 1j, 1 - 1j, 2.0, 2.0])
    out = cluster_spheres(eigs, 1e-8)
    assert [(s.re, s.im, m) for s, m in out] == [(1.0, 1.0, 1), (2.0, 0.0, 1)]


def test_radius_and_lower_index_examples():
    assert spectral_radius(QArray.eye(3)) == pytest.approx(1.0)
    assert lower_index(QArray.eye(3)) == pytest.approx(1.0)
    J4 = jordan_block(4, 0.0)
    assert spectral_radius(J4) == 0.0 and lower_index(J4) == 0.0
    D = QArray.diag([2.0, 3.0])
    assert spectral_radius(D) == pytest.approx(3.0)
    assert lower_index(D) == pytest.approx(2.0)
    assert power_estimates(D, 40)[1] == pytest.approx(2.0, rel=1e-12)


def test_report_json():
    rep = s_spectrum(QArray.eye(2)).to_json()
    assert rep["spheres"] == [{"re": 1.0, "im": 0.0, "multiplicity": 2, "classification": "point",
                               "flags": {"in_aps": True, "in_surj": True, "in_compression": True,
                                         "in_kato": True}}]
    assert rep["r_s"] == pytest.approx(1.0) and rep["lower_index"] == pytest.approx(1.0)
    assert rep["residual_spectrum"] == [] and rep["continuous_spectrum"] == []
    assert rep["generalized_kato_spectrum"] == []


@pytest.mark.parametrize("kind", MEMBERSHIP_KINDS)
def test_membership_examples(kind):
    assert membership(QArray.eye(2), Quaternion(2.0), kind) is False
    assert membership(QArray.eye(2), Quaternion(1.0), kind) is True


def test_membership_of_one_by_one_blocks():
    # 1 x 1 blocks at their own sphere give R_q = rounding noise
    A = QArray.diag([Quaternion(0.3, 0.4), Quaternion(-2.0)])
    for q in (Quaternion(0.3, 0, 0.4), Quaternion(-2.0)):
        assert all(membership(A, q, k) for k in MEMBERSHIP_KINDS)


def test_indeterminate_margin():
    A = QArray.diag([1.0, 2.0])
    q = Quaternion(1.0 + 1e-3)  # kappa(R_q)/||R_q|| about 1e-6, inside the band
    assert classify(A, q) is Verdict.INDETERMINATE
    with pytest.raises(IndeterminateMembership):
        membership(A, q)


def test_unknown_kind():
    with pytest.raises(ValueError):
        classify(QArray.eye(1), Quaternion(), "bogus")


@given(seeds)
@settings(max_examples=30)
def test_compression_matches_conjugate_point_spectrum(seed):
    rng = rng_of(seed)
    A = random_qmatrix(rng, int(rng.integers(2, 6)))
    for s, _ in spectral_spheres(A):
        q = s.point(ImaginaryUnit.random(rng))
        assert membership(A, q, "compression") == membership(A, q.conj(), "s_spectrum") is True


@given(seeds)
@settings(max_examples=30)
def test_axial_symmetry_of_memberships(seed):
    rng = rng_of(seed)
    A = random_qmatrix(rng, int(rng.integers(2, 6)))
    s, _ = spectral_spheres(A)[0]
    p, q = s.point(ImaginaryUnit.random(rng)), s.point(ImaginaryUnit.random(rng))
    for kind in MEMBERSHIP_KINDS:
        assert classify(A, p, kind) == classify(A, q, kind)


def test_sphere_set_of_adjoint():
    A = random_qmatrix(rng_of(11), 6)
    S1 = [s for s, _ in spectral_spheres(A)]
    S2 = [s for s, _ in spectral_spheres(A.H)]
    assert hausdorff_distance(S1, S2) <= 1e-8


def test_resolvent_apply_examples():
    phi = random_qvector(rng_of(12), 3)
    assert resolvent_apply(QArray.zeros((3, 3)), Quaternion(1.0), phi).allclose(phi)
    assert resolvent_apply(QArray.eye(3), Quaternion(0.0), phi).allclose(phi)
    # R_2(diag(i)) = i^2 - 4 i + 4 = 3 - 4i
    v = QArray.from_quaternions([Quaternion(0.2, -1, 0.5, 0.1)])
    psi = resolvent_apply(QArray.from_quaternions([[I]]), Quaternion(2.0), v)
    # R acts by left multiplication on the entry
    assert psi.allclose(v.left_mul(Quaternion(3, -4).inverse()), atol=1e-14)
    assert psi.allclose(v.left_mul(Quaternion(3, 4) / 25.0), atol=1e-14)


def test_resolvent_apply_on_spectrum_raises():
    with pytest.raises(SpectralPointError):
        resolvent_apply(QArray.eye(2), Quaternion(1.0), QArray.basis_vector(2, 0))


def test_power_factorization_examples():
    rng = rng_of(13)
    A = random_qmatrix(rng, 4)
    assert power_factorization_residual(A, Quaternion(0.3, 1, 2, -1), 1) == 0.0
    assert power_factorization_residual(QArray.zeros((3, 3)), Quaternion(1, 1), 4) <= 1e-12
    assert power_factorization_residual(A, Quaternion(1, 1), 3, relative=True) <= 1e-10


def test_right_eigenpairs():
    A = random_qmatrix(rng_of(14), 4)
    for lam, phi in right_eigenpairs(A):
        assert (A @ phi - phi.right_mul(lam)).fro_norm() <= 1e-12
