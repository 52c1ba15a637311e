"""Slice-plane scans of the pseudo-resolvent: grids, CSV and PGM output."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .linalg import QArray
from .quaternion import ImaginaryUnit, Quaternion

__all__ = ["ScanGrid", "QUANTITIES", "MAX_RESOLUTION", "scan", "write_csv", "write_pgm"]

QUANTITIES = ("min-singular", "norm-inverse")
MAX_RESOLUTION = 4096
# number of grid points evaluated per batched SVD call
_BATCH = 4096


@dataclass
class ScanGrid:
    """Values of a pseudo-resolvent gauge on a square window of the slice L_I.

    ``values[r, c]`` belongs to the point ``xs[c] + ys[r] I``; rows run
    with increasing y.
    """

    unit: ImaginaryUnit
    center: tuple[float, float]
    window: float
    resolution: int
    quantity: str
    values: np.ndarray

    @property
    def xs(self) -> np.ndarray:
        return _centers(self.center[0], self.window, self.resolution)

    @property
    def ys(self) -> np.ndarray:
        return _centers(self.center[1], self.window, self.resolution)

    def point(self, r: int, c: int) -> Quaternion:
        y = float(self.ys[r])
        u = self.unit
        return Quaternion(float(self.xs[c]), y * u.x, y * u.y, y * u.z)

    def argmin(self) -> tuple[int, int]:
        return tuple(int(v) for v in np.unravel_index(np.argmin(self.values), self.values.shape))


def _centers(c0: float, window: float, res: int) -> np.ndarray:
    return c0 - window / 2 + (np.arange(res) + 0.5) * window / res


def _min_singular(A: QArray, xs: np.ndarray, rs: np.ndarray) -> np.ndarray:
    """Smallest singular value of chi(A^2 - 2x A + r^2 I) for each (x, r)."""
    X = A.chi()
    X2 = X @ X
    m = X.shape[0]
    eye = np.eye(m)
    out = np.empty(xs.size)
    for s in range(0, xs.size, _BATCH):
        x = xs[s : s + _BATCH, None, None]
        r2 = rs[s : s + _BATCH, None, None] ** 2
        R = X2[None] - 2.0 * x * X[None] + r2 * eye[None]
        out[s : s + _BATCH] = np.linalg.svd(R, compute_uv=False)[:, -1]
    return out


def scan(A: QArray, unit: ImaginaryUnit, center: tuple[float, float], window: float,
         resolution: int, quantity: str = "min-singular") -> ScanGrid:
    """Evaluate kappa(R_q(A)) or ||R_q(A)^{-1}|| at every cell centre.

    R_q(A) depends on q only through Re q and |q|, so the unit selects
    the plane being drawn but never changes a value. Singular cells of
    ``norm-inverse`` are capped at ``1 / (eps * max(1, ||R_q||))`` to keep
    the grid finite.
    """
    if quantity not in QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}")
    if not (1 <= resolution <= MAX_RESOLUTION):
        raise ValueError(f"resolution must be in 1..{MAX_RESOLUTION}")
    if not (window > 0 and np.isfinite(window)):
        raise ValueError("window must be a positive finite number")
    xs = _centers(center[0], window, resolution)
    ys = _centers(center[1], window, resolution)
    # the value depends on |y| only: evaluate each distinct |y| row once
    ay, inverse = np.unique(np.abs(ys), return_inverse=True)
    gx, gy = np.meshgrid(xs, ay)
    rs = np.sqrt(gx**2 + gy**2)
    smin = _min_singular(A, gx.ravel(), rs.ravel()).reshape(gx.shape)
    if quantity == "min-singular":
        vals = smin
    else:
        nA = A.norm()
        scale = np.maximum(1.0, nA**2 + 2.0 * np.abs(gx) * nA + rs**2)
        vals = 1.0 / np.maximum(smin, np.finfo(float).eps * scale)
    values = vals[inverse.ravel()]
    return ScanGrid(unit, (float(center[0]), float(center[1])), float(window), resolution,
                    quantity, np.ascontiguousarray(values))


def write_csv(grid: ScanGrid, fh: io.TextIOBase) -> None:
    """Rows ``x,y,value`` in grid order (increasing y, then increasing x)."""
    fh.write("x,y,value\n")
    xs, ys = grid.xs, grid.ys
    for r in range(grid.resolution):
        y = repr(float(ys[r]))
        row = grid.values[r]
        fh.write("".join(f"{float(xs[c])!r},{y},{float(row[c])!r}\n" for c in range(grid.resolution)))


def write_pgm(grid: ScanGrid, fh: io.TextIOBase, maxval: int = 255) -> None:
    """ASCII PGM (P2); top image row is the largest y.

    Gray levels map affinely from ``[vmin, vmax]`` to ``[0, maxval]``; the
    mapping is written as header comments.
    """
    v = grid.values
    vmin, vmax = float(v.min()), float(v.max())
    span = vmax - vmin
    gray = np.zeros(v.shape, dtype=int) if span == 0 else np.rint((v - vmin) / span * maxval).astype(int)
    fh.write("P2\n")
    fh.write(f"# quantity {grid.quantity}\n")
    fh.write(f"# value = {vmin!r} + gray * {span!r} / {maxval}\n")
    fh.write(f"# x in [{grid.center[0] - grid.window / 2!r}, {grid.center[0] + grid.window / 2!r}], "
             f"y in [{grid.center[1] - grid.window / 2!r}, {grid.center[1] + grid.window / 2!r}], top row = max y\n")
    fh.write(f"{grid.resolution} {grid.resolution}\n{maxval}\n")
    for r in range(grid.resolution - 1, -1, -1):
        fh.write(" ".join(map(str, gray[r])) + "\n")
