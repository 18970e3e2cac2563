"""Exact quaternions over the rationals: the shipped division-ring
instance for skew linear systems.  Components are Fractions, so inverses
and elimination stay exact."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Quaternion:
    w: Fraction
    x: Fraction
    y: Fraction
    z: Fraction

    @classmethod
    def of(cls, w, x=0, y=0, z=0) -> "Quaternion":
        return cls(Fraction(w), Fraction(x), Fraction(y), Fraction(z))

    @classmethod
    def scalar(cls, c) -> "Quaternion":
        return cls.of(c)

    def __add__(self, q):
        q = _coerce(q)
        return Quaternion(self.w + q.w, self.x + q.x, self.y + q.y, self.z + q.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, q):
        return self + (-_coerce(q))

    def __rsub__(self, q):
        return _coerce(q) + (-self)

    def __mul__(self, q):
        q = _coerce(q)
        a, b, c, d = self.w, self.x, self.y, self.z
        e, f, g, h = q.w, q.x, q.y, q.z
        return Quaternion(
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e,
        )

    def __rmul__(self, q):
        return _coerce(q) * self

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_sq(self) -> Fraction:
        return self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2

    def inverse(self) -> "Quaternion":
        n = self.norm_sq()
        if n == 0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        c = self.conj()
        return Quaternion(c.w / n, c.x / n, c.y / n, c.z / n)

    def is_zero(self) -> bool:
        return self.norm_sq() == 0

    def is_scalar(self) -> bool:
        return self.x == self.y == self.z == 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"Quaternion({self.w}, {self.x}, {self.y}, {self.z})"


def _coerce(v) -> Quaternion:
    if isinstance(v, Quaternion):
        return v
    return Quaternion.of(v)


ZERO = Quaternion.of(0)
ONE = Quaternion.of(1)
