"""Integer coefficient sequences a, b, c, d, their identities and Taylor series.

``a`` is the Catalan sequence; ``b``, ``c`` and ``d`` are built from it by the
factorial and convolution definitions.  Every value is an exact ``int``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .fps import FPS

__all__ = [
    "coeff",
    "seq_table",
    "IDENTITIES",
    "INFORMATIONAL_IDENTITIES",
    "IdentityReport",
    "check_identity",
    "SeriesReport",
    "series_lhs",
    "series_rhs",
    "verify_series",
    "SERIES_NAMES",
]


@lru_cache(maxsize=None)
def _a(j: int) -> int:
    return factorial(2 * j) // (factorial(j) * factorial(j + 1))


@lru_cache(maxsize=None)
def _b(j: int) -> int:
    if j == 0:
        return 0
    return factorial(2 * j - 1) // (factorial(j) * factorial(j - 1))


@lru_cache(maxsize=None)
def _c(j: int) -> int:
    return 2 * sum(_b(j1) * _b(j - j1) for j1 in range(j + 1))


@lru_cache(maxsize=None)
def _aa(k: int) -> int:
    # sum_{j2+j3=k} a_j2 a_j3, by direct convolution
    return sum(_a(i) * _a(k - i) for i in range(k + 1))


@lru_cache(maxsize=None)
def _d(j: int) -> int:
    if j < 2:
        return 0
    n = j - 2
    return sum(2 * (j1 + 1) * _a(j1) * _aa(n - j1) for j1 in range(n + 1))


_SEQ = {"a": _a, "b": _b, "c": _c, "d": _d}


def coeff(seq: str, j: int) -> int:
    """Value of sequence ``seq`` (one of a, b, c, d) at index ``j >= 0``."""
    if j < 0:
        raise ValueError("sequence index must be non-negative")
    try:
        fn = _SEQ[seq]
    except KeyError:
        raise ValueError(f"unknown sequence {seq!r}") from None
    # warm the cache bottom-up so deep indices never hit the recursion limit
    for k in range(0, j, 64):
        fn(k)
    return fn(j)


def seq_table(jmax: int) -> dict[str, list[int]]:
    return {name: [coeff(name, j) for j in range(jmax + 1)] for name in "abcd"}


# ---------------------------------------------------------------------------
# combinatorial identities

def _conv(x: str, y: str, n: int) -> int:
    return sum(coeff(x, i) * coeff(y, n - i) for i in range(n + 1))


def _abb(n: int) -> int:
    return sum(coeff("a", i) * _conv("b", "b", n - i) for i in range(n + 1))


def _id_A(j):
    return [(_conv("a", "a", j - 1), coeff("a", j))]


def _id_B(j):
    lhs = 2 * _conv("a", "b", j - 1)
    mid = coeff("b", j) - coeff("a", j - 1)
    return [(lhs, mid), (mid, 2 * (j - 1) * coeff("a", j - 1))]


def _id_C1(j):
    return [(2 * _conv("a", "c", j - 1), coeff("c", j) - coeff("b", j) + coeff("a", j))]


def _id_C2(j):
    lhs = 2 * _conv("a", "c", j - 1)
    return [(lhs, 4 * _abb(j - 1)), (lhs, coeff("c", j) - 2 * (j - 1) * coeff("a", j - 1))]


def _id_D(j):
    return [(coeff("b", j + 1) + coeff("c", j + 1), 4 * coeff("b", j) + 4 * coeff("c", j) + coeff("a", j))]


def _id_E(j):
    return [(2 * _conv("a", "d", j - 1) + 2 * coeff("a", j - 1), coeff("d", j))]


def _id_F(j):
    return [(coeff("b", j + 1) + coeff("a", j), coeff("d", j + 1))]


# id -> (checker, first admissible j, human-readable form)
IDENTITIES = {
    "A": (_id_A, 1, "sum_{j1+j2=j-1} a_j1 a_j2 = a_j"),
    "B": (_id_B, 1, "2 sum_{j1+j2=j-1} a_j1 b_j2 = b_j - a_{j-1} = 2(j-1) a_{j-1}"),
    "C1": (_id_C1, 1, "2 sum_{j1+j2=j-1} a_j1 c_j2 = c_j - b_j + a_j"),
    "C2": (_id_C2, 1, "2 sum a_j1 c_j2 = 4 sum a_j1 b_j2 b_j3 = c_j - 2(j-1) a_{j-1}"),
    "D": (_id_D, 0, "b_{j+1} + c_{j+1} = 4 b_j + 4 c_j + a_j"),
    "E": (_id_E, 2, "2 sum_{j1+j2=j-1} a_j1 d_j2 + 2 a_{j-1} = d_j"),
    "F": (_id_F, 0, "b_{j+1} + a_j = d_{j+1}"),
}
# printed forms that exact evaluation contradicts; reported, never fatal
INFORMATIONAL_IDENTITIES = frozenset({"C1", "F"})


@dataclass
class IdentityReport:
    id: str
    form: str
    j_min: int
    j_max: int
    failures: list[tuple[int, int, int]] = field(default_factory=list)
    informational: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> tuple[int, int, int] | None:
        return self.failures[0] if self.failures else None

    @property
    def status(self) -> str:
        if self.passed:
            return "pass"
        return "printed-inconsistent" if self.informational else "fail"

    def describe(self) -> str:
        if self.passed:
            return f"identity {self.id}: pass for {self.j_min} <= j <= {self.j_max}"
        j, lhs, rhs = self.first_failure
        return f"identity {self.id}: {self.status} (fails at j={j}: {lhs} != {rhs})"

    def to_json(self) -> dict:
        ff = self.first_failure
        return {
            "id": self.id,
            "form": self.form,
            "j_min": self.j_min,
            "j_max": self.j_max,
            "status": self.status,
            "informational": self.informational,
            "n_failures": len(self.failures),
            "first_failure": None if ff is None else {"j": ff[0], "lhs": ff[1], "rhs": ff[2]},
        }


def check_identity(id: str, j_max: int) -> IdentityReport:
    """Evaluate both sides of identity ``id`` exactly for every admissible ``j <= j_max``."""
    try:
        fn, j_min, form = IDENTITIES[id]
    except KeyError:
        raise ValueError(f"unknown identity {id!r}") from None
    if j_max < j_min:
        raise ValueError(f"identity {id} starts at j={j_min}")
    rep = IdentityReport(id, form, j_min, j_max, informational=id in INFORMATIONAL_IDENTITIES)
    for j in range(j_min, j_max + 1):
        for lhs, rhs in fn(j):
            if lhs != rhs:
                rep.failures.append((j, lhs, rhs))
                break
    return rep


# ---------------------------------------------------------------------------
# Taylor series

SERIES_NAMES = ("a", "b", "c", "d")


def series_lhs(name: str, order: int) -> FPS:
    """Coefficient-weighted sum, exact through ``x**order``."""
    cs = [Fraction(0)] * (order + 1)
    if name == "a":
        # sum_j a_j (-1)^j / 2^(2j+1) x^(2j+1)
        for j in range((order - 1) // 2 + 1):
            cs[2 * j + 1] = Fraction((-1) ** j * coeff("a", j), 2 ** (2 * j + 1))
    elif name == "b":
        # sum_{j>=1} b_j (-1)^j / 2^(2j) x^(2j-2)
        for j in range(1, order // 2 + 2):
            cs[2 * j - 2] = Fraction((-1) ** j * coeff("b", j), 2 ** (2 * j))
    elif name == "c":
        # sum_{j>=2} c_j (-1)^j / 2^(2j) x^(2j-4)
        for j in range(2, order // 2 + 3):
            cs[2 * j - 4] = Fraction((-1) ** j * coeff("c", j), 2 ** (2 * j))
    elif name == "d":
        # sum_{j>=2} d_j (-1)^j / 2^(2j-1) x^(2j-4)
        for j in range(2, order // 2 + 3):
            cs[2 * j - 4] = Fraction((-1) ** j * coeff("d", j), 2 ** (2 * j - 1))
    else:
        raise ValueError(f"unknown series {name!r}")
    return FPS(cs, order)


def series_rhs(name: str, order: int) -> FPS:
    """Closed-form right-hand side expanded through ``x**order``."""
    gamma = FPS.x(order, 2).sqrt_of_one_plus()
    inv_gamma = gamma.reciprocal()
    inv_one_plus = (gamma + 1).reciprocal()
    if name == "a":
        return FPS.x(order) * inv_one_plus
    if name == "b":
        return (inv_one_plus - inv_gamma) * Fraction(1, 2)
    if name == "c":
        diff = inv_one_plus - inv_gamma
        return diff * diff * Fraction(1, 8)
    if name == "d":
        return inv_gamma * inv_one_plus * inv_one_plus
    raise ValueError(f"unknown series {name!r}")


@dataclass
class SeriesReport:
    name: str
    order: int
    first_mismatch: tuple[int, Fraction, Fraction] | None
    # lhs/rhs when the two sides differ by one constant factor
    ratio: Fraction | None = None

    @property
    def passed(self) -> bool:
        return self.first_mismatch is None

    def describe(self) -> str:
        if self.passed:
            return f"series {self.name}: pass through x^{self.order}"
        k, lhs, rhs = self.first_mismatch
        msg = f"series {self.name}: mismatch at x^{k}: {lhs} != {rhs}"
        if self.ratio is not None:
            msg += f" (lhs/rhs = {self.ratio} at every order)"
        return msg

    def to_json(self) -> dict:
        fm = self.first_mismatch
        return {
            "name": self.name,
            "order": self.order,
            "status": "pass" if self.passed else "fail",
            "first_mismatch": None
            if fm is None
            else {"power": fm[0], "lhs": str(fm[1]), "rhs": str(fm[2])},
            "ratio": None if self.ratio is None else str(self.ratio),
        }


def verify_series(name: str, order: int) -> SeriesReport:
    if order < 4:
        raise ValueError("series verification needs order >= 4")
    lhs = series_lhs(name, order)
    rhs = series_rhs(name, order)
    for k in range(order + 1):
        if lhs[k] != rhs[k]:
            return SeriesReport(name, order, (k, lhs[k], rhs[k]), _constant_ratio(lhs, rhs))
    return SeriesReport(name, order, None)


def _constant_ratio(lhs: FPS, rhs: FPS) -> Fraction | None:
    ratio = None
    for x, y in zip(lhs.coeffs, rhs.coeffs):
        if y == 0:
            if x != 0:
                return None
            continue
        r = x / y
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio
