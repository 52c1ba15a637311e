"""
Slice-regular series and local spectra
======================================

Right power series sum phi_k q^k are slice-regular: on every slice x + y I they
satisfy a Cauchy-Riemann equation. For an eigenpair A phi = phi q the function
p -> phi (q^2 - 2 Re(p) q + |p|^2)^(-1) solves R_p(A) f(p) = phi off the sphere of q,
which is how local spectra of vectors are built.
"""

import numpy as np

from qkato.linalg import QArray, random_qvector
from qkato.quaternion import ImaginaryUnit, Quaternion
from qkato.slice_regular import (
    RightPowerSeries,
    dbar_residual,
    local_resolvent_eval,
    local_spectral_subspace,
    local_spectrum,
    slice_derivative,
    slice_difference_quotient,
)
from qkato.spectrum import pseudo_resolvent, right_eigenpairs

rng = np.random.default_rng(11)

# a cubic series with random vector coefficients in H^2
coeffs = [random_qvector(rng, 2) for _ in range(4)]
f = RightPowerSeries(QArray(np.array([c.a for c in coeffs]), np.array([c.b for c in coeffs])))
unit = ImaginaryUnit.normalized(1, 1, 1)
q = Quaternion(0.3, 0.4 / np.sqrt(3), 0.4 / np.sqrt(3), 0.4 / np.sqrt(3))
exact = slice_derivative(f)(q)
dx, dy = slice_difference_quotient(f, q, unit)
print("slice derivative vs differences:", (dx - exact).fro_norm(), (dy - exact).fro_norm())
print("Cauchy-Riemann residual:", dbar_residual(f, 0.3, 0.4, unit))

# local resolvent of an eigenpair
A = QArray.diag([Quaternion(0, 1.0), Quaternion(2.0), Quaternion(2.0)])
lam, phi = right_eigenpairs(A)[0]
p = Quaternion(0.5, 0.0, 1.5, 0.0)
fp = local_resolvent_eval(A, lam, phi, p)
print("eigenvalue", lam, " residual of R_p f(p) = phi:", (pseudo_resolvent(A, p) @ fp - phi).fro_norm())

# local spectra pick out the spheres a vector actually uses
for k in range(3):
    e = QArray.basis_vector(3, k)
    print(f"local spectrum of e{k + 1}:", [(s.re, s.im) for s in local_spectrum(A, e).spheres])
mix = QArray.basis_vector(3, 0) + QArray.basis_vector(3, 2)
print("local spectrum of e1 + e3:", [(s.re, s.im) for s in local_spectrum(A, mix).spheres])

# spectral subspace of the real sphere {2}
X = local_spectral_subspace(A, [local_spectrum(A, QArray.basis_vector(3, 1)).spheres[0]])
print("dim X_A({2}) =", X.dim, " A-invariance residual:", X.residual(A @ X.vectors))
