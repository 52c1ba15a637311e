"""
Kernel chains and Kato decompositions
=====================================

For B = R_q(A) the kernels ker(B^m) grow and the ranges ran(B^m) shrink until
they stabilise. On H^n they always stabilise at the same step, and the
stable pair splits the space as ran(B^k) (+) ker(B^k) with B nilpotent on the
second summand, so every pseudo-resolvent is of Kato type.
"""

import numpy as np

from qkato.kato import chains, gkd, in_kato_spectrum, is_semi_regular, kato_kind
from qkato.linalg import QArray, block_diag, random_unitary
from qkato.quaternion import Quaternion
from qkato.spectrum import membership, pseudo_resolvent
from qkato.verify import jordan_block

rng = np.random.default_rng(5)

# a 3 x 3 Jordan block at the sphere of 1+i next to a 1 x 1 block at 2
lam = Quaternion(1.0, 1.0)
A = block_diag(jordan_block(3, lam), QArray.diag([2.0]))
U = random_unitary(rng, 4)
A = U @ A @ U.H

# chains of B = R_q(A) at a point of the sphere of lam, on a different slice
q = Quaternion(1.0, 0.0, 0.6, 0.8)
B = pseudo_resolvent(A, q)
ch = chains(B)
print("kernel dims:", ch.kernel_dims(), " range dims:", ch.range_dims())
print("ascent =", ch.ascent, " descent =", ch.descent)
print("semi-regular:", is_semi_regular(B))

# the decomposition certificate: M = ran(B^k), N = ker(B^k)
res = gkd(A, q)
print("dim M =", res.M.dim, " dim N =", res.N.dim, " nilpotency order =", res.order_d)
for name, value in sorted(res.residuals.items()):
    print(f"  {name:13s} {value:.2e}")
print("classification:", kato_kind(A, q))

# the Kato spectrum coincides with the S-spectrum: compare on a few probes
for p in (q, Quaternion(2.0), Quaternion(1.0, 0.5), Quaternion(0.0, 0.0, 0.0, 1.0)):
    print(f"q = {p}: kato {in_kato_spectrum(A, p)}, s-spectrum {membership(A, p)}")
