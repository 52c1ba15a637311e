"""Right-linear algebra on H^n.

A quaternion array is stored as a pair of complex arrays ``(a, b)`` with
``Q = a + b j``. Products, adjoints and all rank decisions go through the
complex adjoint embedding

    chi(Q) = [[a, b], [-conj(b), conj(a)]],

which is a *-homomorphism, so singular values of ``chi(A)`` are those of A
(each repeated twice). A vector phi enters chi-space as the column
``c(phi) = [phi_a; -conj(phi_b)]``; its right H-span is the complex span of
``c(phi)`` and ``J c(phi)``, where ``J(u, v) = (-conj(v), conj(u))``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .quaternion import Quaternion

__all__ = [
    "QArray",
    "SubspaceBasis",
    "Inclusion",
    "NotInRangeError",
    "MatrixFormatError",
    "chi_embed",
    "adjoint",
    "inner_product",
    "vector_norm",
    "gauges",
    "quaternion_singular_values",
    "kernel_basis",
    "range_basis",
    "subspace_compare",
    "subspace_combine",
    "subspace_image",
    "subspace_distance",
    "solve",
    "inverse_matrix",
    "matrix_power",
    "block_diag",
    "random_qmatrix",
    "random_unitary",
    "random_qvector",
    "real_representation",
    "right_multiplication_representation",
    "load_matrix",
    "dump_matrix",
    "parse_matrix",
]

EPS = np.finfo(float).eps


class NotInRangeError(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in ran(A)."""


class MatrixFormatError(ValueError):
    """Raised for malformed matrix JSON."""


def _qmul(a1, b1, a2, b2):
    # (a1 + b1 j)(a2 + b2 j) = (a1 a2 - b1 conj(b2)) + (a1 b2 + b1 conj(a2)) j
    return a1 * a2 - b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2)


class QArray:
    """Quaternion vector (1-D) or matrix (2-D).

    Matrices act on column vectors by ``(A phi)_k = sum_m A_km phi_m``; scalars
    act on vectors from the right, so ``A(phi q) = (A phi) q``.
    """

    __slots__ = ("a", "b", "_norm")
    __array_priority__ = 1000

    def __init__(self, a, b=None):
        a = np.asarray(a, dtype=complex)
        b = np.zeros_like(a) if b is None else np.asarray(b, dtype=complex)
        if a.shape != b.shape:
            raise ValueError("complex parts must have the same shape")
        if a.ndim not in (1, 2):
            raise ValueError("QArray supports vectors and matrices only")
        self.a = a
        self.b = b
        self._norm = None  # cached operator norm; entries are never mutated in place

    # construction -------------------------------------------------------
    @classmethod
    def from_components(cls, comps) -> "QArray":
        """From a real array of shape (..., 4) holding (w, x, y, z)."""
        c = np.asarray(comps, dtype=float)
        if c.shape[-1] != 4:
            raise ValueError("last axis must have length 4")
        return cls(c[..., 0] + 1j * c[..., 1], c[..., 2] + 1j * c[..., 3])

    @classmethod
    def from_quaternions(cls, rows) -> "QArray":
        comps = np.array(
            [[q.to_array() for q in row] for row in rows]
            if isinstance(rows[0], (list, tuple))
            else [q.to_array() for q in rows]
        )
        return cls.from_components(comps)

    @classmethod
    def from_chi(cls, C) -> "QArray":
        """Inverse of :meth:`chi` (reads the top block row)."""
        C = np.asarray(C, dtype=complex)
        n, m = C.shape[0] // 2, C.shape[1] // 2
        return cls(C[:n, :m], C[:n, m:])

    @classmethod
    def from_column(cls, u) -> "QArray":
        """Inverse of :meth:`column` for a 2n complex vector (or 2n x k)."""
        u = np.asarray(u, dtype=complex)
        n = u.shape[0] // 2
        return cls(u[:n], -np.conj(u[n:]))

    @classmethod
    def eye(cls, n: int) -> "QArray":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def zeros(cls, shape) -> "QArray":
        return cls(np.zeros(shape, dtype=complex))

    @classmethod
    def diag(cls, entries) -> "QArray":
        """Diagonal matrix from a list of Quaternions (or reals)."""
        qs = [e if isinstance(e, Quaternion) else Quaternion(float(e)) for e in entries]
        pairs = [q.pair() for q in qs]
        return cls(np.diag([p[0] for p in pairs]), np.diag([p[1] for p in pairs]))

    @classmethod
    def basis_vector(cls, n: int, k: int) -> "QArray":
        a = np.zeros(n, dtype=complex)
        a[k] = 1.0
        return cls(a)

    # views --------------------------------------------------------------
    @property
    def shape(self):
        return self.a.shape

    @property
    def ndim(self) -> int:
        return self.a.ndim

    def __len__(self) -> int:
        return self.a.shape[0]

    def components(self) -> np.ndarray:
        return np.stack([self.a.real, self.a.imag, self.b.real, self.b.imag], axis=-1)

    def __getitem__(self, idx):
        a, b = self.a[idx], self.b[idx]
        if np.ndim(a) == 0:
            return Quaternion.from_pair(complex(a), complex(b))
        return QArray(a, b)

    def column_vector(self, k: int) -> "QArray":
        return QArray(self.a[:, k], self.b[:, k])

    def copy(self) -> "QArray":
        return QArray(self.a.copy(), self.b.copy())

    # algebra ------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QArray):
            return NotImplemented
        return QArray(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        if not isinstance(other, QArray):
            return NotImplemented
        return QArray(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return QArray(-self.a, -self.b)

    def __mul__(self, s):
        # real scalars only; quaternion scalars need an explicit side
        if isinstance(s, (int, float, np.floating, np.integer)) and not isinstance(s, bool):
            return QArray(self.a * s, self.b * s)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, s):
        if isinstance(s, (int, float, np.floating, np.integer)):
            return QArray(self.a / s, self.b / s)
        return NotImplemented

    def __matmul__(self, other):
        if not isinstance(other, QArray):
            return NotImplemented
        a = self.a @ other.a - self.b @ np.conj(other.b)
        b = self.a @ other.b + self.b @ np.conj(other.a)
        return QArray(a, b)

    def right_mul(self, q: Quaternion) -> "QArray":
        """Entrywise ``Q_k q``; for vectors this is the right scalar action."""
        c, d = q.pair()
        return QArray(*_qmul(self.a, self.b, c, d))

    def left_mul(self, q: Quaternion) -> "QArray":
        """Entrywise ``q Q_k``."""
        c, d = q.pair()
        return QArray(*_qmul(c, d, self.a, self.b))

    def conj(self) -> "QArray":
        """Entrywise quaternion conjugate."""
        return QArray(np.conj(self.a), -self.b)

    @property
    def T(self) -> "QArray":
        return QArray(self.a.T, self.b.T)

    @property
    def H(self) -> "QArray":
        """Conjugate transpose; the Hilbert-space adjoint for matrices."""
        return QArray(np.conj(self.a).T, -self.b.T)

    def chi(self) -> np.ndarray:
        if self.ndim != 2:
            raise ValueError("chi is defined for matrices; use column() for vectors")
        n, m = self.a.shape
        C = np.empty((2 * n, 2 * m), dtype=complex)
        C[:n, :m] = self.a
        C[:n, m:] = self.b
        C[n:, :m] = -np.conj(self.b)
        C[n:, m:] = np.conj(self.a)
        return C

    def column(self) -> np.ndarray:
        """The chi-space image ``[a; -conj(b)]`` of a vector (or of each column)."""
        return np.concatenate([self.a, -np.conj(self.b)], axis=0)

    def fro_norm(self) -> float:
        return float(math.sqrt(np.sum(np.abs(self.a) ** 2 + np.abs(self.b) ** 2)))

    def norm(self) -> float:
        """Operator 2-norm for matrices, Euclidean norm for vectors."""
        if self.ndim == 1:
            return self.fro_norm()
        if self.a.size == 0:
            return 0.0
        if self._norm is None:
            self._norm = float(np.linalg.svd(self.chi(), compute_uv=False)[0])
        return self._norm

    def allclose(self, other: "QArray", atol: float = 1e-12) -> bool:
        return self.shape == other.shape and (self - other).fro_norm() <= atol

    def __repr__(self) -> str:
        return f"QArray(shape={self.shape})"


def chi_embed(A: QArray) -> np.ndarray:
    """Complex adjoint matrix of A (2n x 2m)."""
    return A.chi()


def adjoint(A: QArray) -> QArray:
    return A.H


def inner_product(phi: QArray, psi: QArray) -> Quaternion:
    """``<phi|psi> = sum_k conj(phi_k) psi_k``.

    Right-linear in psi, conjugate-linear from the right in phi.
    """
    if phi.shape != psi.shape or phi.ndim != 1:
        raise ValueError("inner_product needs two vectors of equal length")
    ca, cb = np.conj(phi.a), -phi.b
    a, b = _qmul(ca, cb, psi.a, psi.b)
    return Quaternion.from_pair(complex(a.sum()), complex(b.sum()))


def vector_norm(phi: QArray) -> float:
    return phi.fro_norm()


def quaternion_singular_values(A: QArray) -> np.ndarray:
    """Singular values of A over H, in descending order.

    chi(A) repeats every value twice; the pairs are collapsed by taking the
    even-indexed entries.
    """
    if A.a.size == 0:
        return np.zeros(0)
    s = np.linalg.svd(A.chi(), compute_uv=False)
    return s[0::2][: min(A.shape)]


def gauges(A: QArray, rtol: float | None = None) -> tuple[float, float, float]:
    """(norm, lower bound kappa, reduced minimum modulus gamma).

    gamma is the smallest singular value above ``rtol * norm`` and is infinite
    for the zero operator.
    """
    s = quaternion_singular_values(A)
    norm = float(s[0]) if s.size else 0.0
    # kappa is the inf over unit vectors, also for wide matrices
    kappa = float(s[-1]) if s.size and A.shape[1] <= A.shape[0] else 0.0
    if rtol is None:
        rtol = 2 * max(A.shape) * EPS
    nonzero = s[s > rtol * norm] if norm > 0 else s[:0]
    gamma = float(nonzero[-1]) if nonzero.size else math.inf
    return norm, kappa, gamma


def _threshold(s_max: float, n: int, rtol, atol) -> float:
    if rtol is None and atol is None:
        rtol = 2 * n * EPS
    return max(atol or 0.0, (rtol or 0.0) * s_max)


def _hbasis_from_complex(V: np.ndarray, d: int) -> np.ndarray:
    """Pick d symplectic pairs (u, Ju) spanning the J-invariant span of V.

    Returns the chi-space columns u (2n x d); the partners Ju are implicit.
    """
    n2 = V.shape[0]
    n = n2 // 2
    W = np.zeros((n2, 0), dtype=complex)
    us = []
    cand = V.copy()
    for _ in range(d):
        R = cand - W @ (W.conj().T @ cand)
        norms = np.linalg.norm(R, axis=0)
        idx = int(np.argmax(norms))
        u = R[:, idx] / norms[idx]
        # one re-orthogonalisation pass for stability
        u = u - W @ (W.conj().T @ u)
        u /= np.linalg.norm(u)
        Ju = np.concatenate([-np.conj(u[n:]), np.conj(u[:n])])
        W = np.column_stack([W, u, Ju])
        us.append(u)
    if not us:
        return np.zeros((n2, 0), dtype=complex)
    return np.column_stack(us)


@dataclass(frozen=True)
class SubspaceBasis:
    """H-orthonormal column family spanning a right subspace of H^n.

    ``vectors`` is an n x k QArray whose columns c_a satisfy
    ``<c_a|c_b> = delta_ab``.
    """

    vectors: QArray

    @classmethod
    def zero(cls, n: int) -> "SubspaceBasis":
        return cls(QArray.zeros((n, 0)))

    @classmethod
    def full(cls, n: int) -> "SubspaceBasis":
        return cls(QArray.eye(n))

    @classmethod
    def span(cls, vectors: QArray, rtol=None, atol=None) -> "SubspaceBasis":
        """Orthonormal basis of the right span of the columns of ``vectors``."""
        return range_basis(vectors, rtol=rtol, atol=atol)

    @classmethod
    def from_chi_columns(cls, U: np.ndarray) -> "SubspaceBasis":
        return cls(QArray.from_column(U))

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def chi(self) -> np.ndarray:
        """Orthonormal complex basis (2n x 2k) of the chi-image."""
        return self.vectors.chi()

    def projector(self) -> QArray:
        return self.vectors @ self.vectors.H

    def residual(self, v: QArray) -> float:
        """Norm of the component of a vector (or columns) orthogonal to the span."""
        C = v.column() if v.ndim == 1 else v.chi()
        U = self.chi()
        R = C - U @ (U.conj().T @ C)
        if R.ndim == 1:
            return float(np.linalg.norm(R))
        return float(np.max(np.linalg.norm(R, axis=0))) if R.shape[1] else 0.0

    def contains(self, v: QArray, tol: float = 1e-8) -> bool:
        return self.residual(v) <= tol

    def to_json(self) -> dict:
        return {"n": self.n, "dim": self.dim, "vectors": self.vectors.T.components().tolist()}


def kernel_basis(A: QArray, rtol: float | None = None, atol: float | None = None) -> SubspaceBasis:
    """Right kernel of A as an H-orthonormal basis.

    Singular values of A at or below ``max(atol, rtol * ||A||)`` count as zero;
    the default is ``rtol = 2 n eps``.
    """
    m, n = A.shape
    if A.a.size == 0:
        return SubspaceBasis.full(n) if n else SubspaceBasis.zero(0)
    _, s, Vh = np.linalg.svd(A.chi())
    sq = np.zeros(n)
    sq[: min(m, n)] = s[0::2][: min(m, n)]
    thr = _threshold(s[0], max(m, n), rtol, atol)
    rank = int(np.sum(sq > thr)) if s[0] > 0 else 0
    d = n - rank
    V = Vh.conj().T[:, 2 * rank :]
    return SubspaceBasis.from_chi_columns(_hbasis_from_complex(V, d))


def range_basis(A: QArray, rtol: float | None = None, atol: float | None = None) -> SubspaceBasis:
    """Right range of A (column span) as an H-orthonormal basis."""
    m, n = A.shape
    if A.a.size == 0:
        return SubspaceBasis.zero(m)
    U, s, _ = np.linalg.svd(A.chi())
    sq = s[0::2][: min(m, n)]
    thr = _threshold(s[0], max(m, n), rtol, atol)
    rank = int(np.sum(sq > thr)) if s[0] > 0 else 0
    return SubspaceBasis.from_chi_columns(_hbasis_from_complex(U[:, : 2 * rank], rank))


class Inclusion(str, Enum):
    EQUAL = "equal"
    SUBSET = "subset"  # U <= W
    SUPERSET = "superset"  # W <= U
    INCOMPARABLE = "incomparable"


def _contained(U: SubspaceBasis, W: SubspaceBasis, tol: float) -> bool:
    if U.dim == 0:
        return True
    if W.dim == 0:
        return False
    return W.residual(U.vectors) <= tol


def subspace_compare(U: SubspaceBasis, W: SubspaceBasis, tol: float = 1e-8) -> Inclusion:
    if U.n != W.n:
        raise ValueError("subspaces live in different ambient spaces")
    u_in_w = _contained(U, W, tol)
    w_in_u = _contained(W, U, tol)
    if u_in_w and w_in_u:
        return Inclusion.EQUAL
    if u_in_w:
        return Inclusion.SUBSET
    if w_in_u:
        return Inclusion.SUPERSET
    return Inclusion.INCOMPARABLE


def subspace_distance(U: SubspaceBasis, W: SubspaceBasis) -> float:
    """Largest residual of either basis against the other subspace (1 if only one is trivial)."""
    if U.dim == 0 and W.dim == 0:
        return 0.0
    if U.dim == 0 or W.dim == 0:
        return 1.0
    return max(W.residual(U.vectors), U.residual(W.vectors))


def subspace_combine(U: SubspaceBasis, W: SubspaceBasis | None = None, mode: str = "sum",
                     tol: float = 1e-8) -> SubspaceBasis:
    """``sum`` (U + W), ``intersect`` (U cap W) or ``complement`` (U^perp)."""
    n = U.n
    if mode == "complement":
        if U.dim == 0:
            return SubspaceBasis.full(n)
        return kernel_basis(U.vectors.H, atol=tol)
    if W is None:
        raise ValueError(f"mode {mode!r} needs two subspaces")
    if W.n != n:
        raise ValueError("subspaces live in different ambient spaces")
    if mode == "sum":
        stacked = QArray(np.hstack([U.vectors.a, W.vectors.a]), np.hstack([U.vectors.b, W.vectors.b]))
        if stacked.shape[1] == 0:
            return SubspaceBasis.zero(n)
        return range_basis(stacked, atol=tol)
    if mode == "intersect":
        if U.dim == 0 or W.dim == 0:
            return SubspaceBasis.zero(n)
        eye = QArray.eye(n)
        PU = eye - U.projector()
        PW = eye - W.projector()
        stacked = QArray(np.vstack([PU.a, PW.a]), np.vstack([PU.b, PW.b]))
        return kernel_basis(stacked, atol=tol)
    raise ValueError(f"unknown mode {mode!r}")


def subspace_image(B: QArray, U: SubspaceBasis, atol: float | None = None) -> SubspaceBasis:
    """Span of B(U); singular values below ``atol`` (default 2n eps ||B||) are dropped."""
    if U.dim == 0:
        return SubspaceBasis.zero(B.shape[0])
    if atol is None:
        atol = 2 * B.shape[0] * EPS * B.norm()
    return range_basis(B @ U.vectors, atol=atol)


def solve(A: QArray, psi: QArray, tol: float = 1e-10, rtol: float | None = None) -> QArray:
    """Minimum-norm phi with A phi = psi.

    Raises NotInRangeError when ``||A phi - psi|| > tol * ||psi||``.
    """
    m, n = A.shape
    if psi.shape != (m,):
        raise ValueError("right-hand side has the wrong length")
    if rtol is None:
        rtol = 2 * max(m, n) * EPS
    pinv = QArray.from_chi(np.linalg.pinv(A.chi(), rcond=rtol))
    phi = pinv @ psi
    res = (A @ phi - psi).fro_norm()
    if res > tol * max(psi.fro_norm(), 1e-300):
        raise NotInRangeError(f"right-hand side not in range (residual {res:.3e})")
    return phi


def inverse_matrix(A: QArray) -> QArray:
    return QArray.from_chi(np.linalg.inv(A.chi()))


def matrix_power(A: QArray, k: int) -> QArray:
    if k < 0:
        raise ValueError("negative power")
    return QArray.from_chi(np.linalg.matrix_power(A.chi(), k))


def block_diag(*blocks: QArray) -> QArray:
    from scipy.linalg import block_diag as _bd

    return QArray(_bd(*[b.a for b in blocks]), _bd(*[b.b for b in blocks]))


def random_qmatrix(rng: np.random.Generator, n: int, m: int | None = None, scale: float | None = None) -> QArray:
    """Gaussian quaternion matrix, entries scaled so that ||A|| is O(1)."""
    m = n if m is None else m
    scale = 1.0 / math.sqrt(4 * n) if scale is None else scale
    return QArray.from_components(rng.standard_normal((n, m, 4)) * scale)


def random_qvector(rng: np.random.Generator, n: int) -> QArray:
    return QArray.from_components(rng.standard_normal((n, 4)) / 2.0)


def random_unitary(rng: np.random.Generator, n: int) -> QArray:
    """Random H-unitary matrix (columns H-orthonormal)."""
    G = random_qmatrix(rng, n)
    U = _hbasis_from_complex(np.linalg.qr(G.chi())[0], n)
    return QArray.from_column(U)


_E = [Quaternion(1.0), Quaternion(0, 1.0), Quaternion(0, 0, 1.0), Quaternion(0, 0, 0, 1.0)]


def _left_rep(q: Quaternion) -> np.ndarray:
    return np.column_stack([(q * e).to_array() for e in _E])


def _right_rep(q: Quaternion) -> np.ndarray:
    return np.column_stack([(e * q).to_array() for e in _E])


def real_representation(A: QArray) -> np.ndarray:
    """4n x 4m real matrix of phi -> A phi on component vectors."""
    comps = A.components()
    m, n = A.shape
    # left multiplication matrix is linear in the components of q
    basis = np.stack([_left_rep(e) for e in _E])  # (4, 4, 4)
    blocks = np.einsum("kmc,cij->kimj", comps, basis)
    return blocks.reshape(4 * m, 4 * n)


def right_multiplication_representation(q: Quaternion, n: int) -> np.ndarray:
    """4n x 4n real matrix of phi -> phi q."""
    return np.kron(np.eye(n), _right_rep(q))


# matrix file format -------------------------------------------------------
def _reject_constant(name):
    raise MatrixFormatError(f"non-finite number {name} in matrix file")


def parse_matrix(obj) -> QArray:
    """Validate the ``{"n": int, "entries": [[[w,x,y,z] x n] x n]}`` schema."""
    if not isinstance(obj, dict) or set(obj) - {"n", "entries"} or "n" not in obj or "entries" not in obj:
        raise MatrixFormatError("matrix object must have exactly the keys 'n' and 'entries'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MatrixFormatError("'n' must be a positive integer")
    rows = obj["entries"]
    if not isinstance(rows, list) or len(rows) != n:
        raise MatrixFormatError(f"'entries' must hold {n} rows")
    comps = np.empty((n, n, 4))
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise MatrixFormatError(f"row {r} must hold {n} entries")
        for c, entry in enumerate(row):
            if not isinstance(entry, list) or len(entry) != 4:
                raise MatrixFormatError(f"entry ({r},{c}) must be a list of 4 numbers")
            for t, v in enumerate(entry):
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise MatrixFormatError(f"entry ({r},{c}) component {t} is not a finite number")
                comps[r, c, t] = v
    return QArray.from_components(comps)


def load_matrix(path) -> QArray:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"invalid JSON: {exc}") from exc
    return parse_matrix(obj)


def dump_matrix(A: QArray) -> dict:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("only square matrices are serialised")
    return {"n": A.shape[0], "entries": A.components().tolist()}
