"""Exact Gaussian-rational scalars and unit bookkeeping.

Every coefficient in the operator calculus is an :class:`ExactScalar` times a
monomial in the base symbols ``hbar, q, m, c, mupp`` (``mupp`` is the c-free
anomalous moment, ``mu' = mupp / c``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

__all__ = [
    "ExactScalar",
    "Units",
    "Coefficient",
    "NotMergeable",
    "UNIT_SYMBOLS",
    "ONE",
    "ZERO",
    "I",
    "scalar_arith",
    "coeff_merge",
    "dimension_of",
    "DIM_ENERGY",
    "DIM_NONE",
]

UNIT_SYMBOLS = ("hbar", "q", "m", "c", "mupp")


class NotMergeable(ValueError):
    """Raised when two coefficients carry different units."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class ExactScalar:
    """Complex number with arbitrary-precision rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    @classmethod
    def coerce(cls, x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact")
        return cls(x)

    def __add__(self, other):
        other = ExactScalar.coerce(other)
        return ExactScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-ExactScalar.coerce(other))

    def __rsub__(self, other):
        return ExactScalar.coerce(other) - self

    def __mul__(self, other):
        other = ExactScalar.coerce(other)
        return ExactScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ExactScalar.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("ExactScalar division by zero")
        num = self * other.conj()
        return ExactScalar(num.re / norm, num.im / norm)

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are exact")
        if n < 0:
            return ExactScalar(1) / (self ** -n)
        out = ExactScalar(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "ExactScalar":
        return ExactScalar(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"ExactScalar({self.re!s}, {self.im!s})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        return f"({self.re}{sign}{'' if mag == 1 else mag}i)"

    def to_json(self) -> dict:
        return {
            "re": {"num": self.re.numerator, "den": self.re.denominator},
            "im": {"num": self.im.numerator, "den": self.im.denominator},
        }

    @classmethod
    def from_json(cls, d: dict) -> "ExactScalar":
        return cls(
            Fraction(d["re"]["num"], d["re"]["den"]),
            Fraction(d["im"]["num"], d["im"]["den"]),
        )


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
I = ExactScalar(0, 1)


def scalar_arith(a: ExactScalar, b: ExactScalar | None, kind: str) -> ExactScalar:
    """Dispatch ``add | mul | div | conj`` on exact scalars."""
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    if kind == "conj":
        return a.conj()
    raise ValueError(f"unknown scalar operation {kind!r}")


@dataclass(frozen=True, order=True)
class Units:
    """Integer exponents of hbar, q, m, c and mupp."""

    hbar: int = 0
    q: int = 0
    m: int = 0
    c: int = 0
    mupp: int = 0

    def __add__(self, other: "Units") -> "Units":
        return Units(
            self.hbar + other.hbar,
            self.q + other.q,
            self.m + other.m,
            self.c + other.c,
            self.mupp + other.mupp,
        )

    def __neg__(self) -> "Units":
        return Units(-self.hbar, -self.q, -self.m, -self.c, -self.mupp)

    def __sub__(self, other: "Units") -> "Units":
        return self + (-other)

    def scale(self, k: int) -> "Units":
        return Units(self.hbar * k, self.q * k, self.m * k, self.c * k, self.mupp * k)

    def without_c(self) -> "Units":
        return Units(self.hbar, self.q, self.m, 0, self.mupp)

    def as_tuple(self) -> tuple[int, ...]:
        return (self.hbar, self.q, self.m, self.c, self.mupp)

    def is_dimensionless_symbolically(self) -> bool:
        return not any(self.as_tuple())

    def to_json(self) -> dict:
        return dict(zip(UNIT_SYMBOLS, self.as_tuple()))

    @classmethod
    def from_json(cls, d: dict) -> "Units":
        return cls(*(int(d.get(k, 0)) for k in UNIT_SYMBOLS))

    def __str__(self):
        parts = []
        for name, e in zip(UNIT_SYMBOLS, self.as_tuple()):
            if e == 0:
                continue
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)


@dataclass(frozen=True)
class Coefficient:
    scalar: ExactScalar
    units: Units = Units()

    @classmethod
    def of(cls, value=1, **units) -> "Coefficient":
        return cls(ExactScalar.coerce(value), Units(**units))

    def __mul__(self, other: "Coefficient") -> "Coefficient":
        return Coefficient(self.scalar * other.scalar, self.units + other.units)

    def __neg__(self) -> "Coefficient":
        return Coefficient(-self.scalar, self.units)

    def conj(self) -> "Coefficient":
        return Coefficient(self.scalar.conj(), self.units)

    def is_zero(self) -> bool:
        return self.scalar.is_zero()


def coeff_merge(c1: Coefficient, c2: Coefficient) -> Coefficient:
    """Add two like coefficients; raises :class:`NotMergeable` on a unit mismatch."""
    if c1.units != c2.units:
        raise NotMergeable(f"units differ: [{c1.units}] vs [{c2.units}]")
    return Coefficient(c1.scalar + c2.scalar, c1.units)


# Gaussian units, exponents over (mass, length, time).
F = Fraction
_BASE_DIMS = {
    "hbar": (F(1), F(2), F(-1)),
    "q": (F(1, 2), F(3, 2), F(-1)),
    "m": (F(1), F(0), F(0)),
    "c": (F(0), F(1), F(-1)),
    # mu' B is an energy and [B] = M^1/2 L^-1/2 T^-1; mupp = c mu'
    "mupp": (F(1, 2), F(7, 2), F(-2)),
}
DIM_PI = (F(1), F(1), F(-1))
DIM_FIELD = (F(1, 2), F(-1, 2), F(-1))
DIM_PHI = (F(1, 2), F(1, 2), F(-1))
DIM_ENERGY = (F(1), F(2), F(-2))
DIM_NONE = (F(0), F(0), F(0))
del F


def _vadd(a, b, k=1):
    return tuple(x + k * y for x, y in zip(a, b))


def dimension_of(c: Coefficient, content, grade: int = 0) -> tuple[Fraction, Fraction, Fraction]:
    """Physical dimension (M, L, T exponents) of ``c * content * c**(-grade)``.

    ``content`` is anything exposing ``pi_count``, ``field_count`` and
    ``phi_count`` (an operator monomial does).
    """
    dim = DIM_NONE
    for name, e in zip(UNIT_SYMBOLS, c.units.as_tuple()):
        dim = _vadd(dim, _BASE_DIMS[name], e)
    dim = _vadd(dim, _BASE_DIMS["c"], -grade)
    dim = _vadd(dim, DIM_PI, content.pi_count)
    dim = _vadd(dim, DIM_FIELD, content.field_count)
    dim = _vadd(dim, DIM_PHI, content.phi_count)
    return dim
