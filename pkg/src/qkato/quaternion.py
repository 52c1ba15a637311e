"""Quaternion scalars, imaginary units and eigenspheres.

Quaternions use the Hamilton sign table ``ij = k = -ji``, ``jk = i``,
``ki = j``. Everything downstream (matrices, spectra, power series) is
built on the scalar type defined here.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Quaternion",
    "ImaginaryUnit",
    "EigenSphere",
    "multiply",
    "inverse",
    "slice_decompose",
    "assemble",
    "sphere_of",
    "sphere_contains",
    "beta",
    "beta_n",
    "parse_quaternion",
    "REAL_CUTOFF",
    "I_UNIT",
    "J_UNIT",
    "K_UNIT",
]

# Relative size of |Im q| below which q counts as real.
REAL_CUTOFF = 1e-13


@dataclass(frozen=True, slots=True)
class Quaternion:
    """q = w + x i + y j + z k with real components."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_complex(cls, c: complex) -> "Quaternion":
        """Embed a complex number into the slice spanned by 1 and i."""
        return cls(float(c.real), float(c.imag), 0.0, 0.0)

    @classmethod
    def from_pair(cls, a: complex, b: complex) -> "Quaternion":
        """Build ``a + b j`` from two complex numbers."""
        return cls(float(a.real), float(a.imag), float(b.real), float(b.imag))

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        w, x, y, z = (float(v) for v in arr)
        return cls(w, x, y, z)

    def pair(self) -> tuple[complex, complex]:
        """Complex pair (a, b) with q = a + b j."""
        return complex(self.w, self.x), complex(self.y, self.z)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def imag_norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def is_real(self) -> bool:
        return self.imag_norm() <= REAL_CUTOFF * max(1.0, abs(self))

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("quaternion 0 has no inverse")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return multiply(other, self)

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return NotImplemented

    def __pow__(self, n: int) -> "Quaternion":
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Quaternion(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def allclose(self, other, atol: float = 1e-12) -> bool:
        other = _coerce(other)
        return abs(self - other) <= atol

    def __str__(self) -> str:
        return f"{self.w!r}{self.x:+}i{self.y:+}j{self.z:+}k"


def _coerce(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (bool, np.bool_)):
        return NotImplemented
    if isinstance(value, (int, float, np.floating, np.integer)):
        return Quaternion(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return Quaternion.from_complex(complex(value))
    return NotImplemented


def multiply(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def inverse(q: Quaternion) -> Quaternion:
    """``conj(q) / |q|^2``; raises ZeroDivisionError for q = 0."""
    return q.inverse()


@dataclass(frozen=True, slots=True)
class ImaginaryUnit:
    """A point of the unit sphere of purely imaginary quaternions."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        r = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(r - 1.0) > 1e-12:
            raise ValueError(f"imaginary unit must have norm 1, got {r}")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "ImaginaryUnit":
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(x / r, y / r, z / r)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "ImaginaryUnit":
        v = rng.standard_normal(3)
        return cls.normalized(*v)

    def as_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)


I_UNIT = ImaginaryUnit(1.0, 0.0, 0.0)
J_UNIT = ImaginaryUnit(0.0, 1.0, 0.0)
K_UNIT = ImaginaryUnit(0.0, 0.0, 1.0)


def slice_decompose(q: Quaternion) -> tuple[float, float, ImaginaryUnit | None]:
    """Write q = x + y I with y >= 0.

    Returns ``(x, y, I)`` with ``y > 0`` and the unique imaginary unit I when
    q is non-real, and ``(x, 0.0, None)`` when q is real (within REAL_CUTOFF).
    """
    y = q.imag_norm()
    if q.is_real():
        return q.w, 0.0, None
    return q.w, y, ImaginaryUnit(q.x / y, q.y / y, q.z / y)


def assemble(x: float, y: float, unit: ImaginaryUnit | None) -> Quaternion:
    if unit is None:
        return Quaternion(x)
    return Quaternion(x, y * unit.x, y * unit.y, y * unit.z)


@dataclass(frozen=True, slots=True)
class EigenSphere:
    """The axially symmetric set ``{re + im I : I in S}``; a point when im = 0."""

    re: float
    im: float

    def __post_init__(self):
        if self.im < 0:
            raise ValueError("sphere imaginary radius must be non-negative")

    @property
    def radius(self) -> float:
        """Common modulus of all points on the sphere."""
        return math.hypot(self.re, self.im)

    def is_point(self) -> bool:
        return self.im == 0.0

    def point(self, unit: ImaginaryUnit | None = None) -> Quaternion:
        """A representative ``re + im I`` (I = i by default)."""
        unit = I_UNIT if unit is None else unit
        return assemble(self.re, self.im, unit)

    def distance(self, other: "EigenSphere") -> float:
        return math.hypot(self.re - other.re, self.im - other.im)

    def contains(self, q: Quaternion, tol: float = 0.0) -> bool:
        return sphere_contains(self, q, tol)


def sphere_of(q: Quaternion) -> EigenSphere:
    return EigenSphere(q.w, q.imag_norm())


def sphere_contains(s: EigenSphere, q: Quaternion, tol: float = 0.0) -> bool:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return abs(q.w - s.re) <= tol and abs(q.imag_norm() - s.im) <= tol


def beta(q: Quaternion) -> float:
    """``|Re q| + sqrt(Re(q)^2 + |q|^2)``.

    Any operator whose reduced minimum modulus exceeds this value keeps a
    semi-regular pseudo-resolvent at q.
    """
    q0 = abs(q.w)
    return q0 + math.sqrt(q0 * q0 + q.norm2())


def beta_n(M: float, q: Quaternion, n: int) -> float:
    """``(2 |Re(q^n)| M^n + |q|^(2n))^(1/(2n))``."""
    if M <= 0:
        raise ValueError("M must be positive")
    if n < 1:
        raise ValueError("n must be a positive integer")
    re_qn = (q**n).w
    return (2.0 * abs(re_qn) * M**n + q.norm2() ** n) ** (1.0 / (2 * n))


_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TERM = re.compile(rf"\s*([+-])?\s*({_NUMBER})?\s*([ijk])?\s*")


def parse_quaternion(text: str) -> Quaternion:
    """Parse literals such as ``"0.5+0.5i"``, ``"-j"``, ``"1+2i-3j+4k"``.

    Only '.' is accepted as decimal separator. Each unit may appear at most
    once; raises ValueError on anything else.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty quaternion literal")
    comps = {"": 0.0, "i": 0.0, "j": 0.0, "k": 0.0}
    seen = set()
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse quaternion literal {text!r}")
        sign, number, unit = m.groups()
        if number is None and unit is None:
            raise ValueError(f"cannot parse quaternion literal {text!r}")
        if sign is None and not first:
            raise ValueError(f"missing sign between terms in {text!r}")
        unit = unit or ""
        if unit in seen:
            raise ValueError(f"repeated component {unit or 'real'!r} in {text!r}")
        seen.add(unit)
        value = float(number) if number is not None else 1.0
        comps[unit] = -value if sign == "-" else value
        pos = m.end()
        first = False
    return Quaternion(comps[""], comps["i"], comps["j"], comps["k"])
