"""
Eigenspheres and spectral memberships of a quaternion matrix
=============================================================

A quaternion matrix has no isolated eigenvalues: its spectrum is a union of
spheres re + im*I, one for every imaginary unit I. This walk-through builds a
small matrix, reads its spheres from the complex adjoint and probes the
pseudo-resolvent R_q(A) = A^2 - 2 Re(q) A + |q|^2 on and off them.
"""

import numpy as np

from qkato.linalg import QArray, gauges, random_unitary
from qkato.quaternion import ImaginaryUnit, Quaternion
from qkato.spectrum import (
    MEMBERSHIP_KINDS,
    classify,
    power_estimates,
    pseudo_resolvent,
    resolvent_apply,
    s_spectrum,
)

rng = np.random.default_rng(2)

# a diagonal matrix with a real entry and two non-real entries, hidden by a
# random unitary change of basis
D = QArray.diag([Quaternion(2.0), Quaternion(0.5, 0, 1.0), Quaternion(0.5, 1.0, 0, 0)])
U = random_unitary(rng, 3)
A = U @ D @ U.H

# the report groups the eigenvalues of chi(A) into spheres (re, im)
report = s_spectrum(A)
for entry in report.spheres:
    print(f"sphere re={entry.sphere.re:+.6f} im={entry.sphere.im:.6f}  multiplicity {entry.multiplicity}")
print("r_S(A) =", report.r_s, " i(A) =", report.lower_index)

# the two non-real entries lie on the same sphere: any unit I gives a spectral point
sphere = next(e.sphere for e in report.spheres if e.sphere.im > 0)
for unit in (ImaginaryUnit(1, 0, 0), ImaginaryUnit(0, 0, 1), ImaginaryUnit.random(rng)):
    q = sphere.point(unit)
    _, kappa, _ = gauges(pseudo_resolvent(A, q))
    print(f"q = {q}: kappa(R_q) = {kappa:.2e}, verdicts", {k: classify(A, q, k).value for k in MEMBERSHIP_KINDS})

# away from the spheres R_q(A) is invertible and the resolvent equation is solvable
q = Quaternion(0.0, 0.3, 0.3, 0.0)
phi = QArray.basis_vector(3, 0)
psi = resolvent_apply(A, q, phi)
print("residual of R_q psi = phi:", (pseudo_resolvent(A, q) @ psi - phi).fro_norm())

# the spheres sit in the annulus i(A) <= |q| <= r_S(A); powers approach both radii
for k in (1, 8, 32):
    upper, lower = power_estimates(A, k)
    print(f"k={k:2d}: ||A^k||^(1/k) = {upper:.6f}, kappa(A^k)^(1/k) = {lower:.6f}")
