import io

import numpy as np
import pytest

from qkato.linalg import QArray, random_qmatrix
from qkato.quaternion import I_UNIT, J_UNIT, ImaginaryUnit, Quaternion
from qkato.scan import scan, write_csv, write_pgm
from qkato.linalg import gauges
from qkato.spectrum import pseudo_resolvent

I = Quaternion(0, 1.0)


def local_minima(grid):
    v = grid.values
    out = []
    for r in range(1, v.shape[0] - 1):
        for c in range(1, v.shape[1] - 1):
            if v[r, c] <= v[r - 1 : r + 2, c - 1 : c + 2].min():
                out.append((float(grid.xs[c]), float(grid.ys[r])))
    return out


def test_minima_of_imaginary_unit_on_slice_i():
    g = scan(QArray.from_quaternions([[I]]), I_UNIT, (0.0, 0.0), 3.0, 64)
    cell = 3.0 / 64
    mins = local_minima(g)
    for target in (1.0, -1.0):
        assert any(abs(x) <= cell and abs(y - target) <= cell for x, y in mins)
    r, c = g.argmin()
    assert abs(g.xs[c]) <= cell and abs(abs(g.ys[r]) - 1.0) <= cell


def test_minimum_of_identity_on_slice_j():
    g = scan(QArray.eye(2), J_UNIT, (0.0, 0.0), 4.0, 64)
    r, c = g.argmin()
    cell = 4.0 / 64
    assert abs(g.xs[c] - 1.0) <= cell and abs(g.ys[r]) <= cell


def test_values_match_direct_kappa():
    A = random_qmatrix(np.random.default_rng(0), 3)
    unit = ImaginaryUnit.normalized(1, 2, 3)
    g = scan(A, unit, (0.2, -0.1), 2.0, 5)
    for r in range(5):
        for c in range(5):
            _, kappa, _ = gauges(pseudo_resolvent(A, g.point(r, c)))
            assert g.values[r, c] == pytest.approx(kappa, rel=1e-9, abs=1e-14)


def test_norm_inverse_is_finite():
    g = scan(QArray.eye(1), I_UNIT, (1.0, 0.0), 2.0, 3, "norm-inverse")
    assert np.all(np.isfinite(g.values))
    assert g.values[1, 1] == g.values.max()


def test_unit_does_not_change_values():
    A = random_qmatrix(np.random.default_rng(1), 3)
    a = scan(A, I_UNIT, (0.0, 0.0), 2.0, 8).values
    b = scan(A, ImaginaryUnit.normalized(1, -1, 2), (0.0, 0.0), 2.0, 8).values
    assert np.array_equal(a, b)


def test_bounds_rejected():
    A = QArray.eye(1)
    with pytest.raises(ValueError):
        scan(A, I_UNIT, (0, 0), 1.0, 8192)
    with pytest.raises(ValueError):
        scan(A, I_UNIT, (0, 0), 0.0, 8)
    with pytest.raises(ValueError):
        scan(A, I_UNIT, (0, 0), 1.0, 8, "max-singular")


def test_writers():
    g = scan(QArray.eye(1), I_UNIT, (0.0, 0.0), 2.0, 4)
    buf = io.StringIO()
    write_csv(g, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,y,value" and len(lines) == 17
    x, y, v = map(float, lines[1].split(","))
    assert (x, y) == (-0.75, -0.75) and v == g.values[0, 0]
    buf = io.StringIO()
    write_pgm(g, buf)
    text = buf.getvalue().splitlines()
    assert text[0] == "P2"
    body = [ln for ln in text if not ln.startswith("#")]
    assert body[1] == "4 4" and body[2] == "255"
    pix = np.array([list(map(int, ln.split())) for ln in body[3:]])
    assert pix.shape == (4, 4) and pix.min() == 0 and pix.max() == 255
    # top image row is the largest y
    vmin, span = g.values.min(), np.ptp(g.values)
    assert np.array_equal(pix[0], np.rint((g.values[-1] - vmin) / span * 255).astype(int))
