"""Scalar quaternion arithmetic.

Multiplication follows the Hamilton table

    i*i = j*j = k*k = -1,   i*j = k,   j*k = i,   k*i = j,

the unique sign convention for these generators that makes the product
associative.  Components are plain float64; there is no arbitrary-precision
mode.  Instances should be treated as immutable values.
"""

from __future__ import annotations

import math


class Quaternion:
    """A quaternion w + x*i + y*j + z*k.

    Supports +, -, *, / (division on the right: p / q == p * q.inverse()),
    abs() for the modulus, and exact == on components.  Real numbers mix
    freely with quaternions in arithmetic.
    """

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w=0.0, x=0.0, y=0.0, z=0.0):
        self.w = float(w)
        self.x = float(x)
        self.y = float(y)
        self.z = float(z)

    # -- constructors -------------------------------------------------

    @classmethod
    def from_list(cls, seq) -> "Quaternion":
        w, x, y, z = seq
        return cls(w, x, y, z)

    @classmethod
    def from_complex_pair(cls, a: complex, b: complex) -> "Quaternion":
        """Build w + x*i + y*j + z*k from the split q = a + b*j (a, b complex)."""
        a = complex(a)
        b = complex(b)
        return cls(a.real, a.imag, b.real, b.imag)

    # -- views ---------------------------------------------------------

    def to_list(self) -> list:
        return [self.w, self.x, self.y, self.z]

    def complex_pair(self) -> tuple:
        """The split q = a + b*j with a = w + x*1j, b = y + z*1j."""
        return complex(self.w, self.x), complex(self.y, self.z)

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    # -- involutions and size -------------------------------------------

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def modulus_squared(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def modulus(self) -> float:
        return math.sqrt(self.modulus_squared())

    def inverse(self) -> "Quaternion":
        m2 = self.modulus_squared()
        if m2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return Quaternion(self.w / m2, -self.x / m2, -self.y / m2, -self.z / m2)

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, Quaternion):
            return other
        if isinstance(other, (int, float)):
            return Quaternion(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        w1, x1, y1, z1 = self.w, self.x, self.y, self.z
        w2, x2, y2, z2 = o.w, o.x, o.y, o.z
        return Quaternion(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __abs__(self):
        return self.modulus()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.w, self.x, self.y, self.z) == (o.w, o.x, o.y, o.z)

    def __hash__(self):
        return hash((self.w, self.x, self.y, self.z))

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a*b."""
    return a * b


def qconj(q: Quaternion) -> Quaternion:
    """Conjugate: flips the sign of the three imaginary components."""
    return q.conjugate()


def qmodulus(q: Quaternion) -> float:
    """sqrt(w^2 + x^2 + y^2 + z^2); multiplicative over products."""
    return q.modulus()


def qinv(q: Quaternion) -> Quaternion:
    """Multiplicative inverse conj(q) / |q|^2.

    Raises ZeroDivisionError for the zero quaternion.
    """
    return q.inverse()


def qisclose(a: Quaternion, b: Quaternion, tol: float = 1e-12) -> bool:
    return (a - b).modulus() <= tol * (1.0 + a.modulus() + b.modulus())
