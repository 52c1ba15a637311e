"""Pseudo-resolvent, S-spectrum and its finite-dimensional refinements.

For a matrix A the pseudo-resolvent ``R_q(A) = A^2 - 2 Re(q) A + |q|^2 I``
depends on q only through its eigensphere, so spectra are reported as lists
of :class:`EigenSphere`. On H^n injectivity, closed range and surjectivity of
``R_q(A)`` are all equivalent; the approximate-point, surjectivity and
compression spectra therefore coincide with the S-spectrum, and the residual
and continuous parts are empty. Membership tests still evaluate each kind
through its own definition so that these identities can be checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .linalg import (
    EPS,
    QArray,
    gauges,
    inverse_matrix,
    kernel_basis,
    quaternion_singular_values,
    range_basis,
    real_representation,
    right_multiplication_representation,
    solve,
)
from .quaternion import EigenSphere, Quaternion

__all__ = [
    "ON_RTOL",
    "OFF_RTOL",
    "MEMBERSHIP_KINDS",
    "SpectralError",
    "IndeterminateMembership",
    "SpectralPointError",
    "Verdict",
    "SpectralReport",
    "pseudo_resolvent",
    "numerical_resolvent",
    "resolvent_term_scale",
    "chi_eigenvalues",
    "cluster_spheres",
    "s_spectrum",
    "spectral_spheres",
    "spectral_radius",
    "lower_index",
    "power_estimates",
    "classify",
    "membership",
    "resolvent_apply",
    "right_eigenpairs",
    "power_factorization_residual",
    "factorization_scale",
    "hausdorff_distance",
]

# q is on the spectrum when kappa(R_q) < ON_RTOL ||R_q||, off when > OFF_RTOL ||R_q||.
ON_RTOL = 1e-7
OFF_RTOL = 1e-4
CLUSTER_RTOL = 1e-8
EPS = np.finfo(float).eps

MEMBERSHIP_KINDS = ("aps", "surjectivity", "compression", "s_spectrum")

FINITE_DIMENSION_NOTE = (
    "finite-dimensional operator: every spectral sphere is point spectrum; "
    "residual and continuous S-spectra are empty; approximate-point, "
    "surjectivity, compression and Kato S-spectra equal the S-spectrum; "
    "the generalized Kato S-spectrum is empty"
)


class SpectralError(RuntimeError):
    """Diagnostic failure of the eigenvalue computation or clustering."""


class IndeterminateMembership(ValueError):
    """The lower bound of R_q(A) falls inside the decision margin."""


class SpectralPointError(ValueError):
    """R_q(A) is not invertible at the requested point."""


class Verdict(str, Enum):
    ON = "on"
    OFF = "off"
    INDETERMINATE = "indeterminate"


def pseudo_resolvent(A: QArray, q: Quaternion) -> QArray:
    n = A.shape[0]
    return A @ A - 2.0 * q.w * A + q.norm2() * QArray.eye(n)


def resolvent_term_scale(A: QArray, q: Quaternion) -> float:
    """``||A||^2 + 2|Re q| ||A|| + |q|^2``: bounds ||R_q(A)|| and sets the
    size of its rounding errors."""
    a = A.norm()
    return a * a + 2.0 * abs(q.w) * a + q.norm2()


def numerical_resolvent(A: QArray, q: Quaternion, rtol: float = ON_RTOL) -> QArray:
    """R_q(A), replaced by the zero matrix when it is below ``rtol`` times its
    term scale (pure cancellation, no information left)."""
    R = pseudo_resolvent(A, q)
    if R.norm() <= rtol * resolvent_term_scale(A, q):
        return QArray.zeros(R.shape)
    return R


def chi_eigenvalues(A: QArray) -> np.ndarray:
    try:
        return np.linalg.eigvals(A.chi())
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"eigenvalue solver failed: {exc}") from exc


def _linkage(z: np.ndarray, radius: float) -> list[list[int]]:
    m = len(z)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    d = np.abs(z[:, None] - z[None, :])
    for i, j in zip(*np.nonzero(np.triu(d <= radius, 1))):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _scatter_radius(k: int, radius: float, scale: float) -> float:
    # a sphere whose Jordan blocks have total size k scatters its chi
    # eigenvalues over roughly eps^(1/k) scale
    return max(radius, 10.0 * EPS ** (1.0 / k) * scale)


def _defect_aware_clusters(z: np.ndarray, radius: float, scale: float) -> list[list[int]]:
    m = len(z)
    n = max(1, m // 2)
    label = -np.ones(m, dtype=int)  # accepted cluster id per eigenvalue
    for k in range(1, n + 1):
        for members in _linkage(z, _scatter_radius(k, radius, scale)):
            if (label[members] >= 0).all():
                continue
            # a cluster that only closes up at this radius absorbs any
            # accepted pieces it contains
            if len(members) % 2 == 0 and len(members) // 2 >= k:
                label[members] = members[0]
        if (label >= 0).all():
            break
    if (label < 0).any():
        raise SpectralError("eigenvalues of chi(A) do not pair into spheres")
    accepted = [list(np.nonzero(label == c)[0]) for c in np.unique(label)]
    # neighbouring spheres closer than their joint scatter radius cannot be
    # told apart from one defective sphere
    merged = True
    while merged and len(accepted) > 1:
        merged = False
        centres = [z[c].mean() for c in accepted]
        for a in range(len(accepted)):
            for b in range(a + 1, len(accepted)):
                k = (len(accepted[a]) + len(accepted[b])) // 2
                if abs(centres[a] - centres[b]) <= _scatter_radius(k, radius, scale):
                    accepted[a] = accepted[a] + accepted.pop(b)
                    merged = True
                    break
            if merged:
                break
    return accepted


def cluster_spheres(eigs: np.ndarray, radius: float, scale: float | None = None) -> list[tuple[EigenSphere, int]]:
    """Group complex eigenvalues of chi(A) into eigenspheres.

    Each eigenvalue contributes the folded point ``Re + i|Im|``; these are
    joined by single linkage at ``radius``. With ``scale`` (about ||A||) the
    linkage radius widens to the scatter radius ``10 eps^(1/k) scale`` of a
    defective sphere of multiplicity k, for clusters that only close up at
    that radius. A cluster touching the real axis (within ``radius`` or its own
    spread) is a real sphere. Centres are cluster means, which stay accurate
    for defective eigenvalues whose individual values scatter. Multiplicity
    is half the cluster size.
    """
    eigs = np.asarray(eigs, dtype=complex)
    z = eigs.real + 1j * np.abs(eigs.imag)
    clusters = _linkage(z, radius) if scale is None else _defect_aware_clusters(z, radius, scale)
    spheres = []
    for members in clusters:
        if len(members) % 2:
            raise SpectralError(f"eigenvalue cluster of odd size {len(members)}; conjugate pairing broken")
        w = z[members]
        c = w.mean()
        spread = float(np.abs(w - c).max())
        im = 0.0 if w.imag.min() <= max(radius, spread) else float(c.imag)
        spheres.append((EigenSphere(float(c.real), im), len(members) // 2))
    spheres.sort(key=lambda t: (t[0].re, t[0].im))
    return spheres


def _cluster_radius(A: QArray) -> float:
    return CLUSTER_RTOL * max(1.0, A.norm())


def spectral_spheres(A: QArray, tol: float | None = None) -> list[tuple[EigenSphere, int]]:
    """Eigenspheres of A with multiplicities (sum of multiplicities = n).

    ``tol`` is the linkage radius, by default ``1e-8 max(1, ||A||)``; the
    default also merges the scattered eigenvalues of defective spheres.
    """
    eigs = chi_eigenvalues(A)
    if tol is not None:
        return cluster_spheres(eigs, tol)
    return cluster_spheres(eigs, _cluster_radius(A), scale=max(1.0, A.norm()))


def spectral_radius(A: QArray) -> float:
    return max(s.radius for s, _ in spectral_spheres(A))


def _is_singular(A: QArray) -> bool:
    s = quaternion_singular_values(A)
    return s[-1] <= ON_RTOL * s[0] if s[0] > 0 else True


def lower_index(A: QArray) -> float:
    """``i(A)``: 0 for singular A, otherwise ``1 / r_S(A^{-1})``."""
    if _is_singular(A):
        return 0.0
    return 1.0 / spectral_radius(inverse_matrix(A))


def _scaled_power_norm(A: QArray, k: int) -> float:
    # ||A^k||^(1/k) without overflow: (A/s)^k keeps entries O(1)
    s = A.norm()
    if s == 0.0:
        return 0.0
    C = A.chi() / s
    P = np.linalg.matrix_power(C, k)
    return s * np.linalg.norm(P, 2) ** (1.0 / k)


def power_estimates(A: QArray, k: int) -> tuple[float, float]:
    """``(||A^k||^(1/k), kappa(A^k)^(1/k))``.

    kappa(A^k) is read as ``1 / ||A^{-k}||`` for invertible A (exact identity,
    and far better conditioned than the smallest singular value of A^k) and
    as 0 for singular A.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    upper = _scaled_power_norm(A, k)
    if _is_singular(A):
        return upper, 0.0
    return upper, 1.0 / _scaled_power_norm(inverse_matrix(A), k)


def hausdorff_distance(S1, S2) -> float:
    """Hausdorff distance between sphere sets in (re, im) coordinates."""
    a = [s for s in S1]
    b = [s for s in S2]
    if not a and not b:
        return 0.0
    if not a or not b:
        return math.inf
    d = np.array([[x.distance(y) for y in b] for x in a])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


# membership -------------------------------------------------------------
def _band(smallest: float, largest: float, on_rtol: float, off_rtol: float) -> Verdict:
    if largest == 0.0 or smallest < on_rtol * largest:
        return Verdict.ON
    if smallest > off_rtol * largest:
        return Verdict.OFF
    return Verdict.INDETERMINATE


def classify(A: QArray, q: Quaternion, kind: str = "s_spectrum",
             on_rtol: float = ON_RTOL, off_rtol: float = OFF_RTOL) -> Verdict:
    """Three-way membership decision of q in the spectrum of the given kind.

    aps          R_q(A) not bounded below: its lower bound kappa.
    surjectivity ran R_q(A) not all of H^n: dimension of range_basis.
    compression  ran R_q(A) not dense: kernel of the adjoint R_q(A)^dagger.
    s_spectrum   R_q(A) not invertible: kernel or range defect.
    """
    if kind not in MEMBERSHIP_KINDS:
        raise ValueError(f"unknown membership kind {kind!r}")
    R = pseudo_resolvent(A, q)
    n = R.shape[0]
    s = quaternion_singular_values(R)
    if s[0] <= on_rtol * resolvent_term_scale(A, q):
        return Verdict.ON  # R_q(A) is zero up to cancellation
    verdict = _band(s[-1], s[0], on_rtol, off_rtol)
    if kind == "aps" or verdict is not Verdict.ON:
        return verdict
    # confirm the defect with the subspace computation of the kind
    atol = on_rtol * s[0]
    if kind == "surjectivity":
        defect = range_basis(R, atol=atol).dim < n
    elif kind == "compression":
        defect = kernel_basis(R.H, atol=atol).dim > 0
    else:
        defect = kernel_basis(R, atol=atol).dim > 0 or range_basis(R, atol=atol).dim < n
    return Verdict.ON if defect else Verdict.OFF


def membership(A: QArray, q: Quaternion, kind: str = "s_spectrum",
               on_rtol: float = ON_RTOL, off_rtol: float = OFF_RTOL) -> bool:
    """True when q lies in the spectrum of the given kind.

    Raises IndeterminateMembership inside the decision margin.
    """
    v = classify(A, q, kind, on_rtol, off_rtol)
    if v is Verdict.INDETERMINATE:
        raise IndeterminateMembership(f"q = {q} is within the decision margin for {kind}")
    return v is Verdict.ON


def resolvent_apply(A: QArray, q: Quaternion, phi: QArray, on_rtol: float = ON_RTOL) -> QArray:
    """psi with ``R_q(A) psi = phi``."""
    R = numerical_resolvent(A, q, on_rtol)
    norm, kappa, _ = gauges(R)
    if norm == 0.0 or kappa < on_rtol * norm:
        raise SpectralPointError(f"q = {q} lies on the S-spectrum")
    return solve(R, phi, tol=1e-10)


def right_eigenpairs(A: QArray) -> list[tuple[Quaternion, QArray]]:
    """Pairs (lambda, phi) with ``A phi = phi lambda`` and ||phi|| = 1.

    lambda is a complex number in the slice of i; every eigenvector of chi(A)
    gives one pair.
    """
    w, V = np.linalg.eig(A.chi())
    out = []
    for lam, v in zip(w, V.T):
        phi = QArray.from_column(v)
        phi = phi / phi.fro_norm()
        out.append((Quaternion.from_complex(complex(lam)), phi))
    return out


def power_factorization_residual(A: QArray, q: Quaternion, n: int, relative: bool = False) -> float:
    """Operator-norm residual of ``R_{q^n}(A^n) = R_q(A) sum_{k,j} q^(n-k) qbar^(n-j) A^(j+k-2)``.

    Quaternion scalars act on the right, ``(c B) phi = (B phi) c``, which is
    only real-linear, so both sides are compared as 4N x 4N real matrices.
    With ``relative=True`` the residual is divided by
    :func:`factorization_scale`.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    N = A.shape[0]
    powers = [QArray.eye(N)]
    for _ in range(2 * n):
        powers.append(powers[-1] @ A)
    qn = q**n
    lhs = real_representation(pseudo_resolvent(powers[n], qn))
    qbar = q.conj()
    qpow = [q**t for t in range(n + 1)]
    qbpow = [qbar**t for t in range(n + 1)]
    total = np.zeros_like(lhs)
    for k in range(1, n + 1):
        for j in range(1, n + 1):
            c = qpow[n - k] * qbpow[n - j]
            total += right_multiplication_representation(c, N) @ real_representation(powers[j + k - 2])
    rhs = real_representation(pseudo_resolvent(A, q)) @ total
    res = float(np.linalg.norm(lhs - rhs, 2))
    return res / factorization_scale(A, q, n) if relative else res


def factorization_scale(A: QArray, q: Quaternion, n: int) -> float:
    """``max(1, ||A||, |q|)^(2n)``, the size of the terms in the identity."""
    return max(1.0, A.norm(), abs(q)) ** (2 * n)


# reports ----------------------------------------------------------------
@dataclass
class SphereEntry:
    sphere: EigenSphere
    multiplicity: int
    classification: str = "point"
    flags: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "re": self.sphere.re,
            "im": self.sphere.im,
            "multiplicity": self.multiplicity,
            "classification": self.classification,
            "flags": dict(self.flags),
        }


@dataclass
class SpectralReport:
    n: int
    spheres: list[SphereEntry]
    r_s: float
    lower_index: float
    gauges: tuple[float, float, float]
    tolerances: dict
    note: str = FINITE_DIMENSION_NOTE

    @property
    def sphere_set(self) -> list[EigenSphere]:
        return [e.sphere for e in self.spheres]

    def to_json(self) -> dict:
        norm, kappa, gamma = self.gauges
        return {
            "n": self.n,
            "spheres": [e.to_json() for e in self.spheres],
            "r_s": self.r_s,
            "lower_index": self.lower_index,
            "gauges": {"norm": norm, "kappa": kappa, "gamma": "inf" if math.isinf(gamma) else gamma},
            "tolerances": dict(self.tolerances),
            "residual_spectrum": [],
            "continuous_spectrum": [],
            "generalized_kato_spectrum": [],
            "note": self.note,
        }


def s_spectrum(A: QArray, tol: float | None = None, flags: bool = True) -> SpectralReport:
    """Full spectral report of a square quaternion matrix.

    ``tol`` is the sphere clustering radius (default: see
    :func:`spectral_spheres`).
    With ``flags`` every sphere is probed on its representative point for the
    aps / surjectivity / compression / Kato memberships.
    """
    from .kato import in_kato_spectrum  # kato builds on this module

    n = A.shape[0]
    radius = _cluster_radius(A) if tol is None else tol
    spheres = spectral_spheres(A, tol)
    entries = []
    for s, mult in spheres:
        entry = SphereEntry(s, mult)
        if flags:
            q = s.point()
            entry.flags = {
                "in_aps": membership(A, q, "aps"),
                "in_surj": membership(A, q, "surjectivity"),
                "in_compression": membership(A, q, "compression"),
                "in_kato": in_kato_spectrum(A, q),
            }
        entries.append(entry)
    return SpectralReport(
        n=n,
        spheres=entries,
        r_s=max(s.radius for s, _ in spheres),
        lower_index=lower_index(A),
        gauges=gauges(A),
        tolerances={"cluster_radius": radius, "on_rtol": ON_RTOL, "off_rtol": OFF_RTOL},
    )
