"""Dense truncated formal power series in one variable over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

__all__ = ["FPS", "fps_arith"]


class FPS:
    """Power series ``sum_k coeffs[k] x**k`` known exactly through ``x**order``.

    Coefficients beyond ``order`` are unknown, never zero-padded: binary
    operations truncate to the smaller of the two orders.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable = (), order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        cs = cs[: order + 1]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.order = order

    @classmethod
    def constant(cls, value, order: int) -> "FPS":
        return cls([value], order)

    @classmethod
    def x(cls, order: int, power: int = 1) -> "FPS":
        cs = [0] * (order + 1)
        if power <= order:
            cs[power] = 1
        return cls(cs, order)

    def __getitem__(self, k: int) -> Fraction:
        if k > self.order:
            raise IndexError(f"coefficient x^{k} is beyond truncation order {self.order}")
        return self.coeffs[k] if k >= 0 else Fraction(0)

    def truncate(self, order: int) -> "FPS":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return FPS(self.coeffs, order)

    def _coerce(self, other) -> "FPS":
        if isinstance(other, FPS):
            return other
        return FPS.constant(other, self.order)

    def __add__(self, other) -> "FPS":
        other = self._coerce(other)
        n = min(self.order, other.order)
        return FPS((self.coeffs[k] + other.coeffs[k] for k in range(n + 1)), n)

    __radd__ = __add__

    def __neg__(self) -> "FPS":
        return FPS((-c for c in self.coeffs), self.order)

    def __sub__(self, other) -> "FPS":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FPS":
        return self._coerce(other) - self

    def __mul__(self, other) -> "FPS":
        if not isinstance(other, FPS):
            k = Fraction(other)
            return FPS((k * c for c in self.coeffs), self.order)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(n + 1 - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return FPS(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FPS":
        if isinstance(other, FPS):
            return self * other.reciprocal()
        return self * (Fraction(1) / Fraction(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FPS):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*x^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"FPS({' + '.join(terms) or '0'} + O(x^{self.order + 1}))"

    def reciprocal(self) -> "FPS":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("reciprocal needs a nonzero constant term")
        inv0 = 1 / a[0]
        out = [inv0]
        for n in range(1, self.order + 1):
            s = sum((a[k] * out[n - k] for k in range(1, n + 1) if a[k]), Fraction(0))
            out.append(-s * inv0)
        return FPS(out, self.order)

    def sqrt_of_one_plus(self) -> "FPS":
        """sqrt(1 + self); requires a zero constant term."""
        u = self.coeffs
        if u[0] != 0:
            raise ValueError("sqrt_of_one_plus needs a series with zero constant term")
        s = [Fraction(1)]
        for n in range(1, self.order + 1):
            acc = sum((s[k] * s[n - k] for k in range(1, n)), Fraction(0))
            s.append((u[n] - acc) / 2)
        return FPS(s, self.order)

    def compose(self, inner: "FPS") -> "FPS":
        """self(inner(x)); ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("compose needs an inner series with zero constant term")
        n = min(self.order, inner.order)
        out = FPS.constant(0, n)
        inner = inner.truncate(n)
        for c in reversed(self.coeffs[: n + 1]):
            out = out * inner + c
        return out

    def shift_down(self, k: int = 1) -> "FPS":
        """Divide by ``x**k``; the low coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError(f"series is not divisible by x^{k}")
        return FPS(self.coeffs[k:], self.order - k)

    def shift_up(self, k: int = 1) -> "FPS":
        return FPS([0] * k + list(self.coeffs), self.order + k)


def fps_arith(x: FPS, y: FPS | None, kind: str) -> FPS:
    if kind == "mul":
        return x * y
    if kind == "add":
        return x + y
    if kind == "reciprocal":
        return x.reciprocal()
    if kind == "sqrt_of_one_plus":
        return x.sqrt_of_one_plus()
    if kind == "compose":
        return x.compose(y)
    raise ValueError(f"unknown series operation {kind!r}")

