"""Kernel/range chains, cores, semi-regularity and Kato decompositions.

All subspace chains are built one step at a time,

    ker(B^(m+1)) = ker((1 - P_m) B),   P_m the projector onto ker(B^m),
    ran(B^(m+1)) = B(ran(B^m)),

so every rank decision is made on a matrix of norm at most ||B|| with the
absolute threshold ``rtol * ||B||``. Forming B^m explicitly would mix
singular values of very different sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    Inclusion,
    QArray,
    SubspaceBasis,
    kernel_basis,
    range_basis,
    subspace_combine,
    subspace_compare,
    subspace_image,
)
from .quaternion import Quaternion
from .spectrum import ON_RTOL, numerical_resolvent

__all__ = [
    "KATO_RTOL",
    "ChainError",
    "ChainAnalysis",
    "Cores",
    "GkdResult",
    "KatoKind",
    "chains",
    "cores",
    "is_semi_regular",
    "in_kato_spectrum",
    "gkd",
    "kato_kind",
    "generalized_kato_spectrum",
    "kernel_of_power",
    "range_of_power",
    "power_image",
]

KATO_RTOL = ON_RTOL
# subspace inclusion tolerance
SUBSPACE_TOL = 1e-8


class ChainError(RuntimeError):
    """Chains failed to behave monotonically; tolerances are inconsistent."""


def _atol(B: QArray, rtol: float) -> float:
    return rtol * B.norm()


def _next_kernel(B: QArray, K: SubspaceBasis, atol: float) -> SubspaceBasis:
    n = B.shape[0]
    if K.dim == 0:
        return kernel_basis(B, atol=atol)
    Q = (QArray.eye(n) - K.projector()) @ B
    return kernel_basis(Q, atol=atol)


def _next_range(B: QArray, R: SubspaceBasis, atol: float) -> SubspaceBasis:
    if R.dim == 0:
        return R
    return range_basis(B @ R.vectors, atol=atol)


@dataclass
class ChainAnalysis:
    kernel_chain: list[SubspaceBasis]
    range_chain: list[SubspaceBasis]
    ascent: int
    descent: int

    @property
    def hyper_kernel(self) -> SubspaceBasis:
        return self.kernel_chain[self.ascent]

    @property
    def hyper_range(self) -> SubspaceBasis:
        return self.range_chain[self.descent]

    def kernel_dims(self) -> list[int]:
        return [K.dim for K in self.kernel_chain]

    def range_dims(self) -> list[int]:
        return [R.dim for R in self.range_chain]


def chains(B: QArray, rtol: float = KATO_RTOL, extra: int = 0) -> ChainAnalysis:
    """Kernel and range chains of B up to stabilisation (plus ``extra`` steps).

    Stabilisation is detected by equal dimension *and* subspace equality; a
    chain that loses monotonicity raises ChainError.
    """
    n = B.shape[0]
    atol = _atol(B, rtol)
    Ks = [SubspaceBasis.zero(n)]
    Rs = [SubspaceBasis.full(n)]
    ascent = descent = None
    m = 0
    while ascent is None or descent is None or extra > 0:
        if ascent is not None and descent is not None:
            extra -= 1
        if m > n + 1:
            raise ChainError("chains did not stabilise within n steps")
        K = _next_kernel(B, Ks[-1], atol)
        R = _next_range(B, Rs[-1], atol)
        rel_k = subspace_compare(Ks[-1], K, SUBSPACE_TOL)
        rel_r = subspace_compare(R, Rs[-1], SUBSPACE_TOL)
        if rel_k not in (Inclusion.SUBSET, Inclusion.EQUAL):
            raise ChainError(f"kernel chain not nondecreasing at step {m + 1}")
        if rel_r not in (Inclusion.SUBSET, Inclusion.EQUAL):
            raise ChainError(f"range chain not nonincreasing at step {m + 1}")
        if ascent is None and K.dim == Ks[-1].dim:
            if rel_k is not Inclusion.EQUAL:
                raise ChainError("equal kernel dimensions with drifting bases")
            ascent = m
        if descent is None and R.dim == Rs[-1].dim:
            if rel_r is not Inclusion.EQUAL:
                raise ChainError("equal range dimensions with drifting bases")
            descent = m
        Ks.append(K)
        Rs.append(R)
        m += 1
    if ascent != descent:
        raise ChainError(f"ascent {ascent} != descent {descent} for a matrix")
    return ChainAnalysis(Ks, Rs, ascent, descent)


def kernel_of_power(B: QArray, m: int, rtol: float = KATO_RTOL) -> SubspaceBasis:
    """ker(B^m) by the stepwise recursion."""
    atol = _atol(B, rtol)
    K = SubspaceBasis.zero(B.shape[0])
    for _ in range(m):
        K = _next_kernel(B, K, atol)
    return K


def range_of_power(B: QArray, m: int, rtol: float = KATO_RTOL) -> SubspaceBasis:
    """ran(B^m) by the stepwise recursion."""
    atol = _atol(B, rtol)
    R = SubspaceBasis.full(B.shape[0])
    for _ in range(m):
        R = _next_range(B, R, atol)
    return R


def power_image(B: QArray, m: int, U: SubspaceBasis, rtol: float = KATO_RTOL) -> SubspaceBasis:
    """B^m(U), one application of B at a time."""
    atol = _atol(B, rtol)
    for _ in range(m):
        U = subspace_image(B, U, atol=atol)
    return U


@dataclass
class Cores:
    hyper_kernel: SubspaceBasis
    hyper_range: SubspaceBasis
    algebraic_core: SubspaceBasis
    analytic_core: SubspaceBasis
    core_invariance: float


def cores(B: QArray, rtol: float = KATO_RTOL) -> Cores:
    """Hyper-kernel, hyper-range and the two cores of B.

    With a finite-dimensional kernel both cores equal the hyper-range; the
    identity ``B(C) = C`` is certified and its residual returned.
    """
    ch = chains(B, rtol)
    Hr = ch.hyper_range
    image = subspace_image(B, Hr, atol=_atol(B, rtol))
    if subspace_compare(image, Hr, SUBSPACE_TOL) is not Inclusion.EQUAL:
        raise ChainError("B does not map its hyper-range onto itself")
    invariance = max(Hr.residual(image.vectors), image.residual(Hr.vectors)) if Hr.dim else 0.0
    return Cores(ch.hyper_kernel, Hr, Hr, Hr, invariance)


def is_semi_regular(B: QArray, rtol: float = KATO_RTOL) -> bool:
    """Closed range (automatic on H^n) and ker(B) inside the hyper-range."""
    if kernel_basis(B, atol=_atol(B, rtol)).dim == 0:
        return True  # trivial kernel lies in every subspace
    ch = chains(B, rtol)
    ker = ch.kernel_chain[1]
    rel = subspace_compare(ker, ch.hyper_range, SUBSPACE_TOL)
    return rel in (Inclusion.SUBSET, Inclusion.EQUAL)


def in_kato_spectrum(A: QArray, q: Quaternion, rtol: float = KATO_RTOL) -> bool:
    return not is_semi_regular(numerical_resolvent(A, q, rtol), rtol)


@dataclass
class GkdResult:
    """Fitting decomposition ``H^n = M (+) N`` for ``B = R_q(A)``."""

    M: SubspaceBasis
    N: SubspaceBasis
    order_d: int
    residuals: dict = field(default_factory=dict)
    q: Quaternion | None = None

    def to_json(self) -> dict:
        return {
            "q": None if self.q is None else self.q.to_array().tolist(),
            "M": self.M.to_json(),
            "N": self.N.to_json(),
            "order_d": self.order_d,
            "residuals": dict(self.residuals),
        }


def _restricted_power_norm(B: QArray, N: SubspaceBasis, d: int) -> float:
    V = N.vectors
    for _ in range(d):
        V = B @ V
    return V.norm()


def gkd(A: QArray, q: Quaternion, rtol: float = KATO_RTOL) -> GkdResult:
    """Generalized Kato decomposition of R_q(A) via its Fitting decomposition.

    ``M = ran(B^k)``, ``N = ker(B^k)`` with k the ascent of B. The result
    carries residuals for invariance of M and N, nilpotency of B on N (of
    order ``order_d``), the direct-sum defect and the kernel dimension of B on
    M (both integers, zero when certified).
    """
    B = numerical_resolvent(A, q, rtol)
    n = B.shape[0]
    ch = chains(B, rtol)
    k = ch.ascent
    M, N = ch.range_chain[k], ch.kernel_chain[k]
    normB = B.norm()
    atol = rtol * normB
    scale = normB if normB > 0 else 1.0

    def invariance(U):
        return U.residual(B @ U.vectors) / scale if U.dim else 0.0

    if N.dim == 0:
        order_d = 0
        nil = 0.0
    else:
        order_d = 0
        nil = np.inf
        for d in range(1, k + 1):
            nil = _restricted_power_norm(B, N, d) / scale**d
            if nil <= rtol:
                order_d = d
                break
        if order_d == 0:
            raise ChainError("B is not nilpotent on its Fitting kernel")
    inter = subspace_combine(M, N, "intersect", tol=SUBSPACE_TOL)
    inj = kernel_basis(B @ M.vectors, atol=atol).dim if M.dim else 0
    residuals = {
        "invariance_M": invariance(M),
        "invariance_N": invariance(N),
        "nilpotency": nil,
        "direct_sum": inter.dim + abs(M.dim + N.dim - n),
        "injectivity": inj,
    }
    return GkdResult(M, N, order_d, residuals, q)


@dataclass(frozen=True)
class KatoKind:
    """Classification of R_q(A) in the semi-regular / Kato-type hierarchy."""

    kind: str  # "semi_regular" | "kato_type" | "not_kato_type"
    order: int
    essentially_semi_regular: bool

    def __str__(self) -> str:
        return f"kato_type({self.order})" if self.kind == "kato_type" else self.kind


def kato_kind(A: QArray, q: Quaternion, rtol: float = KATO_RTOL) -> KatoKind:
    """Classify R_q(A).

    On H^n the Fitting kernel is finite dimensional and the restriction to it
    nilpotent, so every pseudo-resolvent is essentially semi-regular and of
    Kato type; ``not_kato_type`` cannot occur.
    """
    res = gkd(A, q, rtol)
    if res.N.dim == 0:
        return KatoKind("semi_regular", 0, True)
    return KatoKind("kato_type", res.order_d, True)


def generalized_kato_spectrum(A: QArray) -> list:
    """Always empty for matrices: every R_q(A) is of Kato type."""
    return []
