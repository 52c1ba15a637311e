"""
The pseudo-resolvent landscape on a slice
=========================================

kappa(R_q(A)) vanishes exactly on the spheres of A. On the slice x + y I each
sphere (re, im) shows up as the pair of points (re, +im) and (re, -im). This
script scans a window, reports the local minima and writes CSV and PGM files
to the current directory.
"""

import numpy as np

from qkato.linalg import QArray, random_unitary
from qkato.quaternion import ImaginaryUnit, Quaternion
from qkato.scan import scan, write_csv, write_pgm
from qkato.spectrum import spectral_spheres

rng = np.random.default_rng(3)
D = QArray.diag([Quaternion(0.0, 1.0), Quaternion(1.0, 0.0, 0.5), Quaternion(-0.5)])
U = random_unitary(rng, 3)
A = U @ D @ U.H
print("spheres:", [(round(s.re, 6), round(s.im, 6)) for s, _ in spectral_spheres(A)])

grid = scan(A, ImaginaryUnit.normalized(0, 1, 1), (0.0, 0.0), 3.0, 121)
v = grid.values
minima = [
    (float(grid.xs[c]), float(grid.ys[r]), float(v[r, c]))
    for r in range(1, v.shape[0] - 1)
    for c in range(1, v.shape[1] - 1)
    if v[r, c] <= v[r - 1 : r + 2, c - 1 : c + 2].min()
]
for x, y, val in sorted(minima):
    print(f"local minimum {val:.2e} at x = {x:+.3f}, y = {y:+.3f}")

with open("landscape.csv", "w") as fh:
    write_csv(grid, fh)
with open("landscape.pgm", "w") as fh:
    write_pgm(grid, fh)
print("wrote landscape.csv and landscape.pgm")
