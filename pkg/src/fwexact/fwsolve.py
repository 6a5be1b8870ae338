"""Order-by-order solution of the block-diagonalisation constraint.

``X = sum_j X_j c^-j`` solves

    2 m c^2 X = -X (c sigma.pi) X + c sigma.pi + q [phi, X]

and the anomalous-moment correction ``X'`` solves the extra terms

    - i mu' sigma.E - i mu' X sigma.E X + mu' {X, sigma.B},   mu' = mupp / c.

Both are solved as a forward sweep over orders and compared against the
closed forms built from the integer sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .opalg import (
    Field,
    OpExpr,
    OpMonomial,
    SIGMA_PI,
    commutator_phi,
    format_latex,
    format_text,
    mono_text,
)
from .scalars import Coefficient, ExactScalar, Units
from .sequences import coeff

__all__ = [
    "OpSeries",
    "GradingMismatch",
    "solve_dirac",
    "solve_pauli",
    "closed_form_dirac",
    "closed_form_pauli",
    "compare_series",
    "SeriesDiff",
    "regrade",
    "structure_name",
]

RECURSION = "recursion"
PHYSICAL = "physical"

SIGMA_E = OpExpr.term(1, OpMonomial(Field.SIGMA_E))
SIGMA_B = OpExpr.term(1, OpMonomial(Field.SIGMA_B))


class GradingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class OpSeries:
    """Graded series: ``terms[j]`` is the coefficient of ``c**-j``."""

    grading: str
    terms: Mapping[int, OpExpr] = field(default_factory=dict)

    def __getitem__(self, j: int) -> OpExpr:
        return self.terms.get(j, OpExpr())

    @property
    def orders(self) -> list[int]:
        return sorted(self.terms)

    def __add__(self, other: "OpSeries") -> "OpSeries":
        _same_grading(self, other)
        keys = set(self.terms) | set(other.terms)
        return OpSeries(self.grading, {k: self[k] + other[k] for k in sorted(keys)})

    def __neg__(self) -> "OpSeries":
        return OpSeries(self.grading, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "OpSeries") -> "OpSeries":
        return self + (-other)

    def map(self, fn: Callable[[OpExpr], OpExpr]) -> "OpSeries":
        return OpSeries(self.grading, {k: fn(v) for k, v in self.terms.items()})

    def shift(self, dk: int) -> "OpSeries":
        """Multiply by ``c**-dk``."""
        return OpSeries(self.grading, {k + dk: v for k, v in self.terms.items()})

    def truncate(self, n: int) -> "OpSeries":
        return OpSeries(self.grading, {k: v for k, v in self.terms.items() if k <= n})

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.terms.values())

    def to_json(self) -> dict:
        return {
            "grading": self.grading,
            "orders": {str(k): v.to_json() for k, v in sorted(self.terms.items())},
        }

    @classmethod
    def from_json(cls, d: dict) -> "OpSeries":
        return cls(d["grading"], {int(k): OpExpr.from_json(v) for k, v in d["orders"].items()})

    def to_text(self, name: str = "X") -> str:
        return "\n".join(f"{name}_{k} = {format_text(v)}" for k, v in sorted(self.terms.items()))

    def to_latex(self, name: str = "X") -> str:
        lines = [rf"{name}_{{{k}}} &= {format_latex(v)}" for k, v in sorted(self.terms.items())]
        return "\\begin{align*}\n" + " \\\\\n".join(lines) + "\n\\end{align*}"


def _same_grading(u: OpSeries, v: OpSeries) -> None:
    if u.grading != v.grading:
        raise GradingMismatch(f"cannot combine {u.grading} and {v.grading} series")


def series_mul(u: OpSeries, v: OpSeries, n_max: int) -> OpSeries:
    """Cauchy product truncated at order ``n_max`` (operator order preserved)."""
    _same_grading(u, v)
    out: dict[int, OpExpr] = {}
    for i, ui in u.terms.items():
        if ui.is_zero():
            continue
        for j, vj in v.terms.items():
            if i + j > n_max or vj.is_zero():
                continue
            out[i + j] = out.get(i + j, OpExpr()) + ui * vj
    return OpSeries(u.grading, dict(sorted(out.items())))


def _half_over_m(x: OpExpr) -> OpExpr:
    return x.scale(Fraction(1, 2), m=-1)


def solve_dirac(N: int, phi_sign: int = -1) -> OpSeries:
    """X_1 .. X_N from the Dirac recursion."""
    if N < 1:
        raise ValueError("order must be >= 1")
    X: dict[int, OpExpr] = {1: _half_over_m(SIGMA_PI)}
    if N >= 2:
        X[2] = OpExpr()
    # sigma.pi X_k, reused across orders
    spX: dict[int, OpExpr] = {k: SIGMA_PI * v for k, v in X.items()}
    for n in range(3, N + 1):
        rhs = commutator_phi(X[n - 2], phi_sign).scale(1, q=1)
        for k1 in range(1, n - 1):
            k2 = n - 1 - k1
            if X[k1] and spX[k2]:
                rhs = rhs - X[k1] * spX[k2]
        X[n] = _half_over_m(rhs)
        spX[n] = SIGMA_PI * X[n]
    return OpSeries(RECURSION, {k: X[k] for k in range(1, N + 1)})


def solve_pauli(N: int, X: OpSeries | None = None, phi_sign: int = -1) -> OpSeries:
    """X'_1 .. X'_N from the anomalous-moment recursion (needs X to order N)."""
    if N < 3:
        raise ValueError("order must be >= 3 for the anomalous-moment series")
    if X is None:
        X = solve_dirac(N, phi_sign)
    if max(X.orders) < N:
        raise ValueError("X must be solved at least to the requested order")
    mu = dict(mupp=1)
    Xp: dict[int, OpExpr] = {1: OpExpr(), 2: OpExpr(), 3: _half_over_m(SIGMA_E.scale(ExactScalar(0, -1), **mu))}
    x = lambda k: X[k] if k >= 1 else OpExpr()  # noqa: E731
    xp = lambda k: Xp.get(k, OpExpr()) if k >= 1 else OpExpr()  # noqa: E731
    for n in range(4, N + 1):
        rhs = commutator_phi(xp(n - 2), phi_sign).scale(1, q=1)
        anti = x(n - 3) + xp(n - 3)
        rhs = rhs + (anti * SIGMA_B + SIGMA_B * anti).scale(1, **mu)
        for k1 in range(1, n - 1):
            k2 = n - 1 - k1
            rhs = rhs - (
                x(k1) * SIGMA_PI * xp(k2)
                + xp(k1) * SIGMA_PI * x(k2)
                + xp(k1) * SIGMA_PI * xp(k2)
            )
        inner = OpExpr()
        for k1 in range(1, n - 3):
            k2 = n - 3 - k1
            # the last product is printed with sigma.pi; it is field-bilinear
            # either way and drops out
            inner = inner + (
                x(k1) * SIGMA_E * x(k2)
                + x(k1) * SIGMA_E * xp(k2)
                + xp(k1) * SIGMA_E * x(k2)
                + xp(k1) * SIGMA_PI * xp(k2)
            )
        rhs = rhs - inner.scale(ExactScalar(0, 1), **mu)
        Xp[n] = _half_over_m(rhs)
    return OpSeries(RECURSION, {k: Xp[k] for k in range(1, N + 1)})


def _pow2m(e: int) -> tuple[Fraction, int]:
    """1 / (2m)^e as (scalar, m-exponent)."""
    return Fraction(1, 2 ** e) if e >= 0 else Fraction(2 ** -e), -e


def closed_form_dirac(N: int, seq: Callable[[str, int], int] = coeff) -> OpSeries:
    """X_n written out from the a, b, c sequences (even orders vanish)."""
    out: dict[int, OpExpr] = {}
    for n in range(1, N + 1):
        if n % 2 == 0:
            out[n] = OpExpr()
            continue
        j = (n - 1) // 2
        sgn = (-1) ** j
        terms = []
        s, me = _pow2m(2 * j + 1)
        terms.append(OpExpr.term(seq("a", j) * sgn * s, OpMonomial(Field.NONE, 2 * j + 1, 0), m=me))
        s, me = _pow2m(2 * j)
        if j >= 1:
            terms.append(OpExpr.term(ExactScalar(0, seq("b", j) * sgn * s), OpMonomial(Field.SIGMA_E, 0, 2 * j - 2), q=1, hbar=1, m=me))
        if j >= 2:
            terms.append(OpExpr.term(ExactScalar(0, seq("c", j) * sgn * s), OpMonomial(Field.E_DOT_PI, 1, 2 * j - 4), q=1, hbar=1, m=me))
        out[n] = sum(terms, OpExpr())
    return OpSeries(RECURSION, out)


def closed_form_pauli(N: int, seq: Callable[[str, int], int] = coeff) -> OpSeries:
    """X'_n written out from the b and d sequences."""
    out: dict[int, OpExpr] = {1: OpExpr()}
    for n in range(2, N + 1):
        j, odd = divmod(n, 2)
        sgn = (-1) ** j
        if not odd:
            if j < 2:
                out[n] = OpExpr()
                continue
            s, me = _pow2m(2 * j - 2)
            out[n] = OpExpr.term(2 * seq("b", j - 1) * sgn * s, OpMonomial(Field.B_DOT_PI, 0, 2 * j - 4), mupp=1, m=me)
            continue
        s, me = _pow2m(2 * j - 1)
        expr = OpExpr.term(ExactScalar(0, seq("b", j) * sgn * s), OpMonomial(Field.SIGMA_E, 0, 2 * j - 2), mupp=1, m=me)
        if j >= 2:
            expr = expr + OpExpr.term(
                ExactScalar(0, -seq("d", j) * sgn * s), OpMonomial(Field.E_DOT_PI, 1, 2 * j - 4), mupp=1, m=me
            )
        out[n] = expr
    return OpSeries(RECURSION, out)


def structure_name(m: OpMonomial) -> str:
    if m.phi:
        return "phi"
    if m.field is Field.NONE:
        return "field-free"
    return m.field.json_name


@dataclass
class SeriesDiff:
    """Exact per-order difference ``u - v``."""

    diffs: dict[int, OpExpr]
    lhs: OpSeries
    rhs: OpSeries
    order_max: int

    @property
    def passed(self) -> bool:
        return all(d.is_zero() for d in self.diffs.values())

    @property
    def failing_orders(self) -> list[int]:
        return [k for k, d in sorted(self.diffs.items()) if not d.is_zero()]

    def first_failure(self) -> dict | None:
        for k in self.failing_orders:
            d = self.diffs[k]
            (m, u), _ = next(iter(d.items()))
            pick = lambda e: e.filter(lambda mm, uu: mm == m)  # noqa: E731
            return {
                "order": k,
                "structure": structure_name(m),
                "monomial": mono_text(m),
                "lhs": format_text(pick(self.lhs[k])),
                "rhs": format_text(pick(self.rhs[k])),
            }
        return None


def compare_series(u: OpSeries, v: OpSeries, N: int) -> SeriesDiff:
    _same_grading(u, v)
    lo = min([0, *u.orders, *v.orders])
    diffs = {k: u[k] - v[k] for k in range(lo, N + 1)}
    return SeriesDiff(diffs, u, v, N)


def regrade(s: OpSeries) -> OpSeries:
    """Fold explicit ``c`` exponents from the units into the series grade."""
    if s.grading == PHYSICAL:
        return s
    out: dict[int, OpExpr] = {}
    for k, expr in s.terms.items():
        for (m, u), v in expr.items():
            g = k - u.c
            out[g] = out.get(g, OpExpr()) + OpExpr([(Coefficient(v, u.without_c()), m)])
    return OpSeries(PHYSICAL, dict(sorted(out.items())))


def field_sectors(expr: OpExpr) -> set[str]:
    """Field letters (``""`` for field-free) present in an expression."""
    return {(m.field.letter or "") for m in expr.monomials()}


def iter_terms(s: OpSeries) -> Iterable[tuple[int, OpMonomial, Units, ExactScalar]]:
    for k, expr in sorted(s.terms.items()):
        for (m, u), v in expr.items():
            yield k, m, u, v
