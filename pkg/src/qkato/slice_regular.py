"""Right power series, slice derivatives and local spectra on H^n."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kato import KATO_RTOL, chains
from .linalg import QArray, SubspaceBasis, solve, subspace_combine
from .quaternion import EigenSphere, ImaginaryUnit, Quaternion, assemble
from .spectrum import numerical_resolvent, spectral_spheres

__all__ = [
    "RightPowerSeries",
    "OutOfRadiusError",
    "DenominatorVanishesError",
    "LocalSpectrumResult",
    "series_eval",
    "slice_derivative",
    "dbar_residual",
    "slice_difference_quotient",
    "local_resolvent_eval",
    "root_subspaces",
    "local_spectrum",
    "local_spectral_subspace",
    "svep_report",
]


class OutOfRadiusError(ValueError):
    pass


class DenominatorVanishesError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class RightPowerSeries:
    """``f(q) = sum_k phi_k q^k`` with vector coefficients (rows of ``coefficients``)."""

    coefficients: QArray  # shape (m+1, n)
    radius: float = math.inf

    def __post_init__(self):
        if self.coefficients.ndim != 2:
            raise ValueError("coefficients must be a (degree+1) x n array")
        if not self.radius > 0:
            raise ValueError("radius must be positive")

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def n(self) -> int:
        return self.coefficients.shape[1]

    def coefficient(self, k: int) -> QArray:
        return self.coefficients[k]

    def __call__(self, q: Quaternion) -> QArray:
        return series_eval(self, q)

    def __add__(self, other: "RightPowerSeries") -> "RightPowerSeries":
        m = max(self.degree, other.degree) + 1
        return RightPowerSeries(_pad(self.coefficients, m) + _pad(other.coefficients, m),
                                min(self.radius, other.radius))

    def right_scale(self, s: Quaternion) -> "RightPowerSeries":
        """Coefficients multiplied on the right by s."""
        return RightPowerSeries(self.coefficients.right_mul(s), self.radius)


def _pad(C: QArray, m: int) -> QArray:
    extra = m - C.shape[0]
    if extra <= 0:
        return C
    z = np.zeros((extra, C.shape[1]), dtype=complex)
    return QArray(np.vstack([C.a, z]), np.vstack([C.b, z]))


def series_eval(f: RightPowerSeries, q: Quaternion) -> QArray:
    """Horner evaluation ``(((phi_m q + phi_{m-1}) q + ...) q + phi_0``."""
    if abs(q) >= f.radius:
        raise OutOfRadiusError(f"|q| = {abs(q)} outside the radius {f.radius}")
    C = f.coefficients
    acc = C[C.shape[0] - 1]
    for k in range(C.shape[0] - 2, -1, -1):
        acc = acc.right_mul(q) + C[k]
    return acc


def slice_derivative(f: RightPowerSeries) -> RightPowerSeries:
    C = f.coefficients
    if C.shape[0] == 1:
        return RightPowerSeries(QArray.zeros((1, C.shape[1])), f.radius)
    k = np.arange(1, C.shape[0])[:, None]
    return RightPowerSeries(QArray(C.a[1:] * k, C.b[1:] * k), f.radius)


def dbar_residual(f, x: float, y: float, unit: ImaginaryUnit, h: float = 1e-5) -> float:
    """Norm of ``(df/dx + (df/dy) I) / 2`` on the slice of I, by central differences.

    ``f`` is any callable from Quaternion to vector; zero for right
    slice-regular functions.
    """
    I = unit.as_quaternion()
    fx = (f(assemble(x + h, y, unit)) - f(assemble(x - h, y, unit))) / (2 * h)
    fy = (f(_slice_point(x, y + h, unit)) - f(_slice_point(x, y - h, unit))) / (2 * h)
    return 0.5 * (fx + fy.right_mul(I)).fro_norm()


def _slice_point(x: float, y: float, unit: ImaginaryUnit) -> Quaternion:
    # y may be negative here; assemble() expects the sphere convention
    return Quaternion(x, y * unit.x, y * unit.y, y * unit.z)


def slice_difference_quotient(f, q: Quaternion, unit: ImaginaryUnit, h: float = 1e-5) -> tuple[QArray, QArray]:
    """Two numerical slice derivatives at q: along the real axis and along I.

    For slice-regular f, ``df/dx`` and ``-(df/dy) I`` both equal the slice
    derivative.
    """
    I = unit.as_quaternion()
    x = q.w
    y = q.x * unit.x + q.y * unit.y + q.z * unit.z
    dx = (f(_slice_point(x + h, y, unit)) - f(_slice_point(x - h, y, unit))) / (2 * h)
    dy = (f(_slice_point(x, y + h, unit)) - f(_slice_point(x, y - h, unit))) / (2 * h)
    return dx, -dy.right_mul(I)


def local_resolvent_eval(A: QArray, q: Quaternion, phi: QArray, p: Quaternion,
                         tol: float = 1e-10) -> QArray:
    """``f(p) = phi (q^2 - 2 Re(p) q + |p|^2)^{-1}`` for an eigenpair ``A phi = phi q``.

    f is slice-regular off the sphere [q] and solves ``R_p(A) f(p) = phi``.
    """
    scale = max(A.norm(), abs(q), 1.0) * phi.fro_norm()
    if (A @ phi - phi.right_mul(q)).fro_norm() > tol * scale:
        raise ValueError("(q, phi) is not an eigenpair of A")
    s = q * q - 2.0 * p.w * q + p.norm2()
    if abs(s) <= tol * max(1.0, abs(q) ** 2 + abs(p) ** 2):
        raise DenominatorVanishesError(f"p = {p} lies on the sphere of q = {q}")
    return phi.right_mul(s.inverse())


def root_subspaces(A: QArray, rtol: float = KATO_RTOL) -> list[tuple[EigenSphere, SubspaceBasis]]:
    """Root subspace ``ker(R_{q_s}(A)^k)`` of every eigensphere (k the ascent)."""
    out = []
    for s, mult in spectral_spheres(A):
        ch = chains(numerical_resolvent(A, s.point(), rtol), rtol)
        N = ch.hyper_kernel
        if N.dim != mult:
            raise ValueError(f"root subspace of {s} has dimension {N.dim}, expected {mult}")
        out.append((s, N))
    return out


@dataclass
class LocalSpectrumResult:
    spheres: list[EigenSphere]
    components: dict  # EigenSphere -> norm of the root-space component


def local_spectrum(A: QArray, phi: QArray, tol: float = 1e-8,
                   roots: list | None = None) -> LocalSpectrumResult:
    """Spheres carrying a nonzero root-space component of phi.

    H^n is the direct sum of the root subspaces; phi is split accordingly by
    solving against the concatenated bases.
    """
    roots = root_subspaces(A) if roots is None else roots
    nphi = phi.fro_norm()
    if nphi == 0.0:
        return LocalSpectrumResult([], {s: 0.0 for s, _ in roots})
    Bmat = QArray(
        np.hstack([N.vectors.a for _, N in roots]),
        np.hstack([N.vectors.b for _, N in roots]),
    )
    coef = solve(Bmat, phi, tol=1e-8)
    comps = {}
    start = 0
    for s, N in roots:
        c = coef[start : start + N.dim]
        comps[s] = (N.vectors @ c).fro_norm()
        start += N.dim
    spheres = [s for s, _ in roots if comps[s] > tol * nphi]
    return LocalSpectrumResult(spheres, comps)


def _match(s: EigenSphere, F, tol: float) -> bool:
    return any(s.distance(f) <= tol for f in F)


def local_spectral_subspace(A: QArray, F, tol: float = 1e-6,
                            roots: list | None = None) -> SubspaceBasis:
    """``X_A(F)``: sum of the root subspaces of the spectral spheres in F."""
    roots = root_subspaces(A) if roots is None else roots
    n = A.shape[0]
    X = SubspaceBasis.zero(n)
    for s, N in roots:
        if _match(s, F, tol):
            X = subspace_combine(X, N, "sum")
    return X


def svep_report(A: QArray) -> dict:
    """Matrices always have SVEP, so their analytic residuum is empty."""
    spheres = spectral_spheres(A)
    return {
        "has_svep": True,
        "analytic_residuum_empty": True,
        "sphere_count": len(spheres),
        "reason": (
            "the point S-spectrum is a finite union of spheres and meets every "
            "slice in finitely many points, so it clusters nowhere"
        ),
    }
