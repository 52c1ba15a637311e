import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkato.linalg import Inclusion, QArray, block_diag, SubspaceBasis, random_qmatrix, random_qvector, subspace_compare
from qkato.quaternion import I_UNIT, J_UNIT, EigenSphere, ImaginaryUnit, Quaternion
from qkato.slice_regular import (
    DenominatorVanishesError,
    OutOfRadiusError,
    RightPowerSeries,
    dbar_residual,
    local_resolvent_eval,
    local_spectral_subspace,
    local_spectrum,
    root_subspaces,
    series_eval,
    slice_derivative,
    slice_difference_quotient,
    svep_report,
)
from qkato.spectrum import pseudo_resolvent
from qkato.verify import jordan_block, random_series

from strategies import rng_of, seeds

I = Quaternion(0, 1.0)
J = Quaternion(0, 0, 1.0)
DIAG = QArray.diag([I, Quaternion(2.0)])


def e(n, k):
    return QArray.basis_vector(n, k)


def rows(*vectors):
    return QArray(np.array([v.a for v in vectors]), np.array([v.b for v in vectors]))


def test_constant_and_monomial_series():
    phi = random_qvector(rng_of(1), 3)
    f = RightPowerSeries(rows(phi))
    assert series_eval(f, Quaternion(0.3, 1, 2, 3)).allclose(phi, atol=0)
    g = RightPowerSeries(rows(QArray.zeros(3), phi))
    assert g(J).allclose(phi.right_mul(J))


def test_geometric_series():
    coeffs = [e(2, 0) * 0.5**k for k in range(80)]
    f = RightPowerSeries(rows(*coeffs), radius=2.0)
    assert f(Quaternion(1.0)).allclose(e(2, 0) * 2.0, atol=1e-12)
    with pytest.raises(OutOfRadiusError):
        f(Quaternion(0, 2.0))


def test_derivative_examples():
    phi = random_qvector(rng_of(2), 2)
    assert slice_derivative(RightPowerSeries(rows(phi))).coefficients.fro_norm() == 0.0
    p0, p1, p2 = (random_qvector(rng_of(k), 2) for k in (3, 4, 5))
    d = slice_derivative(RightPowerSeries(rows(p0, p1, p2)))
    q = Quaternion(0.2, -0.5, 0.1, 0.7)
    assert d(q).allclose(p1 + (p2 * 2.0).right_mul(q), atol=1e-14)


def test_derivative_matches_differences_on_slice_of_i():
    f = random_series(rng_of(6), 5, 3)
    q = Quaternion(0.3, 0.4)
    dx, dy = slice_difference_quotient(f, q, I_UNIT)
    exact = slice_derivative(f)(q)
    for approx in (dx, dy):
        assert (approx - exact).fro_norm() <= 1e-6 * exact.fro_norm()


@given(seeds, st.integers(0, 6))
@settings(max_examples=30)
def test_series_are_slice_regular(seed, degree):
    rng = rng_of(seed)
    f = random_series(rng, degree, 2)
    unit = ImaginaryUnit.random(rng)
    x, y = rng.uniform(-1, 1, 2)
    scale = max(1.0, slice_derivative(f)(Quaternion(x)).fro_norm())
    assert dbar_residual(f, x, y, unit) <= 1e-6 * scale


def test_non_regular_function_has_dbar_residual():
    # q -> phi qbar is not right slice-regular
    phi = e(1, 0)
    assert dbar_residual(lambda q: phi.right_mul(q.conj()), 0.3, 0.2, J_UNIT) > 0.5


def test_local_resolvent_examples():
    phi = e(1, 0)
    f = local_resolvent_eval(QArray.from_quaternions([[I]]), I, phi, Quaternion(2.0))
    assert f.allclose(phi.right_mul(Quaternion(3, -4).inverse()), atol=1e-15)
    R = pseudo_resolvent(QArray.from_quaternions([[I]]), Quaternion(2.0))
    assert (R @ f - phi).fro_norm() <= 1e-14
    f0 = local_resolvent_eval(QArray.from_quaternions([[I]]), I, phi, Quaternion(0.0))
    A = QArray.from_quaternions([[I]])
    assert (A @ (A @ f0) - phi).fro_norm() <= 1e-14
    with pytest.raises(DenominatorVanishesError):
        local_resolvent_eval(A, I, phi, J)


def test_local_resolvent_rejects_non_eigenpair():
    with pytest.raises(ValueError):
        local_resolvent_eval(QArray.diag([1.0, 2.0]), Quaternion(1.0), e(2, 1), Quaternion(5.0))


def test_local_spectrum_examples():
    assert local_spectrum(DIAG, QArray.zeros(2)).spheres == []
    assert local_spectrum(DIAG, e(2, 1)).spheres == [EigenSphere(2.0, 0.0)]
    got = set(local_spectrum(DIAG, e(2, 0) + e(2, 1)).spheres)
    assert got == {EigenSphere(0.0, 1.0), EigenSphere(2.0, 0.0)}


def test_local_spectral_subspace_examples():
    S, P = EigenSphere(0.0, 1.0), EigenSphere(2.0, 0.0)
    assert local_spectral_subspace(DIAG, [S, P]).dim == 2
    assert local_spectral_subspace(DIAG, []).dim == 0
    X = local_spectral_subspace(DIAG, [S])
    assert X.dim == 1 and X.contains(e(2, 0))
    # spheres outside the spectrum contribute nothing
    Y = local_spectral_subspace(DIAG, [S, EigenSphere(7.0, 0.0)])
    assert subspace_compare(X, Y) is Inclusion.EQUAL


def test_root_subspaces_of_defective_matrix():
    A = block_diag(jordan_block(2, 1.0), QArray.diag([3.0]))
    roots = dict((round(s.re, 6), N.dim) for s, N in root_subspaces(A))
    assert roots == {1.0: 2, 3.0: 1}


def test_svep_reports():
    for A in (QArray.eye(3), random_qmatrix(rng_of(7), 8), jordan_block(3, 0.0)):
        r = svep_report(A)
        assert r["has_svep"] is True and r["analytic_residuum_empty"] is True
