"""Canonical operator calculus for spin-1/2 in weak homogeneous static fields.

Generators are the kinematic momentum ``pi``, the Pauli vector ``sigma``, the
constant fields ``E`` and ``B`` (kept to linear order) and the scalar
potential ``phi`` (reachable only through :func:`commutator_phi`).

Two sectors:

* field-free monomials ``pi^(2n) (sigma.pi)^k``.  With ``n = 0`` the power
  ``(sigma.pi)^k`` is an atom and is never expanded implicitly.  With ``n > 0``
  the monomial is in the pi-basis and ``k <= 1``.  Products in this sector
  are exact, including the field-linear commutator ``[pi^2, sigma.pi]``.
* field-linear monomials ``pi^(2n) x S`` with ``S`` one of ``sigma.F``,
  ``F.pi``, ``(sigma.pi)(F.pi)``, ``(F x pi).sigma`` for ``F`` in ``{E, B}``.
  Here pi components commute (their commutator is field-linear, so any
  reordering error is field-bilinear and dropped).
"""

from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

from .scalars import (
    Coefficient,
    ExactScalar,
    I,
    ONE,
    UNIT_SYMBOLS,
    Units,
)

__all__ = [
    "Field",
    "OpMonomial",
    "OpExpr",
    "PhiProductError",
    "mul",
    "commutator_phi",
    "dagger",
    "expand_sigma_pi",
    "is_hermitian",
    "canonicalize",
    "SIGMA_PI",
    "PHI",
    "mono",
]


class PhiProductError(ValueError):
    """phi has no product rule here; use :func:`commutator_phi`."""


class Field(IntEnum):
    NONE = 0
    SIGMA_E = 1
    SIGMA_B = 2
    E_DOT_PI = 3
    B_DOT_PI = 4
    EXPI_SIGMA = 5
    BXPI_SIGMA = 6

    @property
    def json_name(self) -> str:
        return _FIELD_JSON[self]

    @classmethod
    def from_json(cls, name: str) -> "Field":
        return _FIELD_FROM_JSON[name]

    @property
    def letter(self) -> str | None:
        if self is Field.NONE:
            return None
        return "E" if self in (Field.SIGMA_E, Field.E_DOT_PI, Field.EXPI_SIGMA) else "B"


_FIELD_JSON = {
    Field.NONE: "none",
    Field.SIGMA_E: "sigmaE",
    Field.SIGMA_B: "sigmaB",
    Field.E_DOT_PI: "EdotPi",
    Field.B_DOT_PI: "BdotPi",
    Field.EXPI_SIGMA: "ExPiSigma",
    Field.BXPI_SIGMA: "BxPiSigma",
}
_FIELD_FROM_JSON = {v: k for k, v in _FIELD_JSON.items()}
_DOT = (Field.E_DOT_PI, Field.B_DOT_PI)
_SP_ZERO = (Field.SIGMA_E, Field.SIGMA_B, Field.EXPI_SIGMA, Field.BXPI_SIGMA)


class OpMonomial(NamedTuple):
    """``pi^pi * (sigma.pi)^sp * <field structure>``, or the bare ``phi``.

    Tuple order ``(field, sp, pi, phi)`` is the canonical monomial order.
    """

    field: Field = Field.NONE
    sp: int = 0
    pi: int = 0
    phi: bool = False

    def check(self) -> "OpMonomial":
        f, sp, pi, phi = self
        if sp < 0 or pi < 0 or pi % 2:
            raise ValueError(f"bad powers in {self}")
        if phi and (sp or pi or f is not Field.NONE):
            raise ValueError("phi may only appear as a bare monomial")
        if f in _DOT and sp > 1:
            raise ValueError(f"{f.name} monomials allow sp <= 1")
        if f in _SP_ZERO and sp:
            raise ValueError(f"{f.name} monomials require sp = 0")
        if f is Field.NONE and pi and sp > 1:
            raise ValueError("pi-basis field-free monomials require sp <= 1")
        return self

    # dimension descriptors (see scalars.dimension_of)
    @property
    def pi_count(self) -> int:
        extra = 1 if self.field in (Field.E_DOT_PI, Field.B_DOT_PI, Field.EXPI_SIGMA, Field.BXPI_SIGMA) else 0
        return self.sp + self.pi + extra

    @property
    def field_count(self) -> int:
        return 0 if self.field is Field.NONE else 1

    @property
    def phi_count(self) -> int:
        return int(self.phi)

    @property
    def field_free(self) -> bool:
        return self.field is Field.NONE and not self.phi

    def to_json(self) -> dict:
        return {"sp": self.sp, "pi2n": self.pi, "field": self.field.json_name, "phi": self.phi}

    @classmethod
    def from_json(cls, d: dict) -> "OpMonomial":
        return cls(Field.from_json(d["field"]), int(d["sp"]), int(d["pi2n"]), bool(d["phi"])).check()


def mono(field: Field = Field.NONE, sp: int = 0, pi: int = 0, phi: bool = False) -> OpMonomial:
    return OpMonomial(Field(field), sp, pi, phi).check()


_U0 = Units()
_EPS = Units(hbar=1, q=1, c=-1)  # q hbar / c, from (sigma.pi)^2 = pi^2 - (q hbar/c) sigma.B
_HBAR = Units(hbar=1)

# ---------------------------------------------------------------------------
# commuting (field-linear) sector
#
# A basis element is (n, kind): pi^(2n) times
#   "1": 1            "p": sigma.pi
#   "Ed"/"Bd": F.pi   "Es"/"Bs": sigma.F   "Ep"/"Bp": (sigma.pi)(F.pi)
#   "Ex"/"Bx": (F x pi).sigma
# Each kind is a Pauli form s + v.sigma; scalars {1, Fd}, vectors {p, Fs, Fp, Fx}.

_SCALAR_KINDS = {"1", "Ed", "Bd"}

_KIND_TO_MONO = {
    "1": (Field.NONE, 0),
    "p": (Field.NONE, 1),
    "Es": (Field.SIGMA_E, 0),
    "Bs": (Field.SIGMA_B, 0),
    "Ed": (Field.E_DOT_PI, 0),
    "Bd": (Field.B_DOT_PI, 0),
    "Ep": (Field.E_DOT_PI, 1),
    "Bp": (Field.B_DOT_PI, 1),
    "Ex": (Field.EXPI_SIGMA, 0),
    "Bx": (Field.BXPI_SIGMA, 0),
}
_MONO_TO_KIND = {v: k for k, v in _KIND_TO_MONO.items()}


def _fl(kind: str) -> str | None:
    """Field letter carried by a kind, if any."""
    return None if kind in ("1", "p") else kind[0]


def _to_commuting(m: OpMonomial) -> tuple[int, str]:
    if m.phi:
        raise PhiProductError("phi cannot be multiplied; use commutator_phi")
    if m.field is Field.NONE:
        # (sigma.pi)^2 == pi^2 up to a field-linear term that only ever meets
        # another field factor here
        return m.pi // 2 + m.sp // 2, ("p" if m.sp % 2 else "1")
    return m.pi // 2, _MONO_TO_KIND[(m.field, m.sp)]


def _from_commuting(n: int, kind: str) -> OpMonomial:
    f, sp = _KIND_TO_MONO[kind]
    return OpMonomial(f, sp, 2 * n, False)


def _dot(k1: str, k2: str):
    """v1 . v2 for vector kinds -> list of (scalar, dn, scalar kind)."""
    f1, f2 = _fl(k1), _fl(k2)
    if f1 and f2:
        return []
    if k1 == "p" and k2 == "p":
        return [(1, 1, "1")]
    if k1 == "p" or k2 == "p":
        other = k2 if k1 == "p" else k1
        f = _fl(other)
        tail = other[1]
        if tail == "s":  # pi . F
            return [(1, 0, f + "d")]
        if tail == "p":  # pi . pi (F.pi)
            return [(1, 1, f + "d")]
        return []  # pi . (F x pi)
    return []


def _cross(k1: str, k2: str):
    """v1 x v2 for vector kinds -> list of (scalar, dn, vector kind)."""
    f1, f2 = _fl(k1), _fl(k2)
    if f1 and f2:
        return []
    if k1 == "p" and k2 == "p":
        return []
    if k1 == "p":
        f, tail = _fl(k2), k2[1]
        if tail == "s":  # pi x F = -(F x pi)
            return [(-1, 0, f + "x")]
        if tail == "p":
            return []
        # pi x (F x pi) = pi^2 F - pi (F.pi)
        return [(1, 1, f + "s"), (-1, 0, f + "p")]
    if k2 == "p":
        return [(-s, dn, k) for s, dn, k in _cross("p", k1)]
    return []


def _scale_vec(s_kind: str, v_kind: str):
    """scalar kind times vector kind -> list of (scalar, dn, vector kind)."""
    if s_kind == "1":
        return [(1, 0, v_kind)]
    if _fl(v_kind):
        return []
    # (F.pi) pi
    return [(1, 0, s_kind[0] + "p")]


def _scale_scalar(k1: str, k2: str):
    if k1 == "1":
        return [(1, 0, k2)]
    if k2 == "1":
        return [(1, 0, k1)]
    return []


@lru_cache(maxsize=None)
def _commuting_product(k1: str, k2: str) -> tuple[tuple[ExactScalar, int, str], ...]:
    """(s1 + v1.s)(s2 + v2.s) = s1 s2 + v1.v2 + (s1 v2 + s2 v1 + i v1 x v2).s"""
    out: list[tuple[ExactScalar, int, str]] = []
    s1, s2 = k1 in _SCALAR_KINDS, k2 in _SCALAR_KINDS
    if s1 and s2:
        out += [(ExactScalar(c), dn, k) for c, dn, k in _scale_scalar(k1, k2)]
    elif s1:
        out += [(ExactScalar(c), dn, k) for c, dn, k in _scale_vec(k1, k2)]
    elif s2:
        out += [(ExactScalar(c), dn, k) for c, dn, k in _scale_vec(k2, k1)]
    else:
        out += [(ExactScalar(c), dn, k) for c, dn, k in _dot(k1, k2)]
        out += [(I * c, dn, k) for c, dn, k in _cross(k1, k2)]
    return tuple(out)


def _cmul(x: dict, y: dict) -> dict:
    """Multiply commuting-sector elements {(n, kind): scalar}."""
    out: dict = {}
    for (n1, k1), a in x.items():
        for (n2, k2), b in y.items():
            ab = a * b
            for c, dn, k in _commuting_product(k1, k2):
                key = (n1 + n2 + dn, k)
                out[key] = out.get(key, ExactScalar(0)) + ab * c
    return {k: v for k, v in out.items() if v}


def _cpow_sp(k: int) -> dict:
    return {(k // 2, "p" if k % 2 else "1"): ONE}


# ---------------------------------------------------------------------------
# exact monomial products

Product = tuple[tuple[ExactScalar, Units, OpMonomial], ...]


def _normalize_field_free(n: int, k: int) -> list[tuple[ExactScalar, Units, OpMonomial]]:
    """pi^(2n) (sigma.pi)^k as canonical terms (exact to field-linear order)."""
    if n == 0 or k <= 1:
        return [(ONE, _U0, OpMonomial(Field.NONE, k, 2 * n))]
    return [(s, u, OpMonomial(m.field, m.sp, m.pi + 2 * n)) for s, u, m in _expand_atom(k)]


@lru_cache(maxsize=None)
def _expand_atom(k: int) -> Product:
    """(sigma.pi)^k in the pi-basis.

    (sigma.pi)^(2j)   = pi^(2j) - j eps pi^(2j-2) sigma.B
    (sigma.pi)^(2j+1) = pi^(2j) sigma.pi - j eps pi^(2j-2) ((B.pi) + i (B x pi).sigma)
    with eps = q hbar / c.
    """
    j, r = divmod(k, 2)
    out = [(ONE, _U0, OpMonomial(Field.NONE, r, 2 * j))]
    if j:
        lo = 2 * j - 2
        if r == 0:
            out.append((ExactScalar(-j), _EPS, OpMonomial(Field.SIGMA_B, 0, lo)))
        else:
            out.append((ExactScalar(-j), _EPS, OpMonomial(Field.B_DOT_PI, 0, lo)))
            out.append((ExactScalar(0, -j), _EPS, OpMonomial(Field.BXPI_SIGMA, 0, lo)))
    return tuple(out)


def _sp_pi_commutator(b: int) -> dict:
    """[sigma.pi, pi^(2b)] / eps = -2 i b pi^(2b-2) (B x pi).sigma, commuting form."""
    return {(b - 1, "Bx"): ExactScalar(0, -2 * b)}


@lru_cache(maxsize=None)
def _mono_product(m1: OpMonomial, m2: OpMonomial) -> Product:
    if m1.phi or m2.phi:
        raise PhiProductError("phi cannot be multiplied; use commutator_phi")
    if m1.field is Field.NONE and m2.field is Field.NONE:
        a, k = m1.pi // 2, m1.sp
        b, l = m2.pi // 2, m2.sp
        out = list(_normalize_field_free(a + b, k + l))
        if k and b:
            # pi^(2a) [(sigma.pi)^k, pi^(2b)] (sigma.pi)^l, field-linear
            q = _sp_pi_commutator(b)
            acc: dict = {}
            for i in range(k):
                t = _cmul(_cmul(_cpow_sp(i), q), _cpow_sp(k - 1 - i + l))
                for key, v in t.items():
                    acc[key] = acc.get(key, ExactScalar(0)) + v
            for (n, kind), v in acc.items():
                if v:
                    out.append((v, _EPS, _from_commuting(n + a, kind)))
        return tuple(out)
    n1, k1 = _to_commuting(m1)
    n2, k2 = _to_commuting(m2)
    return tuple(
        (c, _U0, _from_commuting(n1 + n2 + dn, k))
        for c, dn, k in _commuting_product(k1, k2)
    )


@lru_cache(maxsize=None)
def _mono_dagger(m: OpMonomial) -> Product:
    if m.field is Field.NONE and m.pi and m.sp:
        # (pi^(2n) sigma.pi)^dagger = sigma.pi pi^(2n)
        return _mono_product(OpMonomial(Field.NONE, 1, 0), OpMonomial(Field.NONE, 0, m.pi))
    return ((ONE, _U0, m),)


@lru_cache(maxsize=None)
def _mono_commutator_phi(m: OpMonomial, sign: int) -> Product:
    """[phi, m] from [phi, pi_i] = sign * i hbar E_i."""
    if not m.field_free:
        return ()
    n, k = m.pi // 2, m.sp
    acc: dict = {}
    # [phi, pi^(2n)] (sigma.pi)^k
    if n:
        t = _cmul({(n - 1, "Ed"): ExactScalar(2 * n)}, _cpow_sp(k))
        for key, v in t.items():
            acc[key] = acc.get(key, ExactScalar(0)) + v
    # pi^(2n) [phi, (sigma.pi)^k]
    for i in range(k):
        t = _cmul(_cmul({(n, "1"): ONE}, _cpow_sp(i)), {(0, "Es"): ONE})
        t = _cmul(t, _cpow_sp(k - 1 - i))
        for key, v in t.items():
            acc[key] = acc.get(key, ExactScalar(0)) + v
    pref = ExactScalar(0, sign)
    return tuple(
        (pref * v, _HBAR, _from_commuting(nn, kind)) for (nn, kind), v in sorted(acc.items()) if v
    )


# ---------------------------------------------------------------------------
# expressions

class OpExpr:
    """Finite linear combination of monomials with unit-carrying coefficients.

    Canonical by construction: one entry per (monomial, units) pair, zero
    coefficients dropped, terms iterated in monomial order.
    """

    __slots__ = ("_d", "_hash")

    def __init__(self, terms: Iterable = ()):
        d: dict = {}
        for coef, m in terms:
            if not isinstance(coef, Coefficient):
                coef = Coefficient(ExactScalar.coerce(coef))
            key = (m, coef.units)
            d[key] = d.get(key, ExactScalar(0)) + coef.scalar
        self._d = {k: v for k, v in sorted(d.items()) if v}
        self._hash = None

    @classmethod
    def _from_dict(cls, d: dict) -> "OpExpr":
        obj = cls.__new__(cls)
        obj._d = {k: v for k, v in sorted(d.items()) if v}
        obj._hash = None
        return obj

    @classmethod
    def term(cls, value=1, monomial: OpMonomial | None = None, **units) -> "OpExpr":
        return cls([(Coefficient(ExactScalar.coerce(value), Units(**units)), monomial or OpMonomial())])

    @classmethod
    def zero(cls) -> "OpExpr":
        return cls()

    @property
    def terms(self) -> list[tuple[Coefficient, OpMonomial]]:
        return [(Coefficient(v, u), m) for (m, u), v in self._d.items()]

    def items(self):
        """((monomial, units), scalar) pairs in canonical order."""
        return self._d.items()

    def __len__(self):
        return len(self._d)

    def __iter__(self):
        return iter(self.terms)

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self):
        return bool(self._d)

    def __eq__(self, other):
        if not isinstance(other, OpExpr):
            return NotImplemented
        return self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._d.items()))
        return self._hash

    def coefficient(self, m: OpMonomial, units: Units = _U0) -> ExactScalar:
        return self._d.get((m, units), ExactScalar(0))

    def __add__(self, other: "OpExpr") -> "OpExpr":
        d = dict(self._d)
        for k, v in other._d.items():
            d[k] = d.get(k, ExactScalar(0)) + v
        return OpExpr._from_dict(d)

    def __neg__(self) -> "OpExpr":
        return OpExpr._from_dict({k: -v for k, v in self._d.items()})

    def __sub__(self, other: "OpExpr") -> "OpExpr":
        return self + (-other)

    def scale(self, value=1, **units) -> "OpExpr":
        """Multiply every term by a scalar and a unit monomial."""
        s = ExactScalar.coerce(value)
        u = Units(**units)
        if s.is_zero():
            return OpExpr()
        return OpExpr._from_dict({(m, uu + u): v * s for (m, uu), v in self._d.items()})

    def __mul__(self, other):
        if isinstance(other, OpExpr):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def map_units(self, fn) -> "OpExpr":
        d: dict = {}
        for (m, u), v in self._d.items():
            key = (m, fn(u))
            d[key] = d.get(key, ExactScalar(0)) + v
        return OpExpr._from_dict(d)

    def filter(self, pred) -> "OpExpr":
        return OpExpr._from_dict({k: v for k, v in self._d.items() if pred(k[0], k[1])})

    def monomials(self) -> set[OpMonomial]:
        return {m for m, _ in self._d}

    def dagger(self) -> "OpExpr":
        return dagger(self)

    def to_json(self) -> list[dict]:
        return [
            {"coeff": v.to_json(), "units": u.to_json(), "mono": m.to_json()}
            for (m, u), v in self._d.items()
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "OpExpr":
        return cls(
            (Coefficient(ExactScalar.from_json(t["coeff"]), Units.from_json(t["units"])), OpMonomial.from_json(t["mono"]))
            for t in data
        )

    def __repr__(self):
        return f"OpExpr({format_text(self)})"

    def __str__(self):
        return format_text(self)


def canonicalize(terms) -> OpExpr:
    """Canonical form of an expression or of a raw ``(Coefficient, OpMonomial)`` list."""
    if isinstance(terms, OpExpr):
        return OpExpr(terms.terms)
    return OpExpr(terms)


def _apply_bilinear(x: OpExpr, y: OpExpr) -> OpExpr:
    d: dict = {}
    for (m1, u1), a in x._d.items():
        for (m2, u2), b in y._d.items():
            ab = a * b
            uu = u1 + u2
            for c, du, m in _mono_product(m1, m2):
                key = (m, uu + du if du != _U0 else uu)
                d[key] = d.get(key, ExactScalar(0)) + ab * c
    return OpExpr._from_dict(d)


def mul(x: OpExpr, y: OpExpr) -> OpExpr:
    """Canonical product; field-bilinear terms are dropped."""
    return _apply_bilinear(x, y)


def _apply_linear(x: OpExpr, fn, conj: bool = False) -> OpExpr:
    d: dict = {}
    for (m, u), v in x._d.items():
        vv = v.conj() if conj else v
        for c, du, mm in fn(m):
            key = (mm, u + du)
            d[key] = d.get(key, ExactScalar(0)) + vv * c
    return OpExpr._from_dict(d)


def dagger(x: OpExpr) -> OpExpr:
    return _apply_linear(x, _mono_dagger, conj=True)


def commutator_phi(x: OpExpr, sign: int = -1) -> OpExpr:
    """``[phi, x]`` built from the primitive rule ``[phi, pi_i] = sign * i hbar E_i``.

    ``sign = -1`` follows from ``E = -grad(phi)`` and ``p = -i hbar grad``.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    return _apply_linear(x, lambda m: _mono_commutator_phi(m, sign))


def _expand_mono(m: OpMonomial) -> Product:
    if m.field is Field.NONE and not m.phi and m.sp >= 2:
        return tuple(_normalize_field_free(m.pi // 2, m.sp)) if m.pi else _expand_atom(m.sp)
    return ((ONE, _U0, m),)


def expand_sigma_pi(x: OpExpr) -> OpExpr:
    """Rewrite every atomic ``(sigma.pi)^k``, ``k >= 2``, into the pi-basis.

    The emitted ``sigma.B``-type terms carry an explicit ``q hbar c^-1``.
    """
    return _apply_linear(x, _expand_mono)


def is_hermitian(x: OpExpr) -> tuple[bool, OpExpr]:
    residue = (x - dagger(x)).scale(Fraction(1, 2))
    return residue.is_zero(), residue


# ---------------------------------------------------------------------------
# common atoms

SIGMA_PI = OpExpr.term(1, OpMonomial(Field.NONE, 1, 0))
PHI = OpExpr.term(1, OpMonomial(phi=True))
ONE_OP = OpExpr.term(1, OpMonomial())


# ---------------------------------------------------------------------------
# rendering

_TEXT_STRUCT = {
    Field.SIGMA_E: "(σ·E)",
    Field.SIGMA_B: "(σ·B)",
    Field.E_DOT_PI: "(E·π)",
    Field.B_DOT_PI: "(B·π)",
    Field.EXPI_SIGMA: "(E×π)·σ",
    Field.BXPI_SIGMA: "(B×π)·σ",
}

_TEX_STRUCT = {
    Field.SIGMA_E: r"(\boldsymbol{\sigma}\cdot\mathbf{E})",
    Field.SIGMA_B: r"(\boldsymbol{\sigma}\cdot\mathbf{B})",
    Field.E_DOT_PI: r"(\mathbf{E}\cdot\boldsymbol{\pi})",
    Field.B_DOT_PI: r"(\mathbf{B}\cdot\boldsymbol{\pi})",
    Field.EXPI_SIGMA: r"(\mathbf{E}\times\boldsymbol{\pi})\cdot\boldsymbol{\sigma}",
    Field.BXPI_SIGMA: r"(\mathbf{B}\times\boldsymbol{\pi})\cdot\boldsymbol{\sigma}",
}

_TEXT_UNITS = {"hbar": "ħ", "q": "q", "m": "m", "c": "c", "mupp": "μ''"}
_TEX_UNITS = {"hbar": r"\hbar", "q": "q", "m": "m", "c": "c", "mupp": r"\mu''"}


def mono_text(m: OpMonomial) -> str:
    if m.phi:
        return "φ"
    parts = []
    if m.pi:
        parts.append(f"π^{m.pi}")
    if m.sp == 1:
        parts.append("(σ·π)")
    elif m.sp:
        parts.append(f"(σ·π)^{m.sp}")
    if m.field is not Field.NONE:
        parts.append(_TEXT_STRUCT[m.field])
    return " ".join(parts) or "1"


def _units_text(u: Units) -> str:
    out = []
    for name, e in zip(UNIT_SYMBOLS, u.as_tuple()):
        if e:
            out.append(_TEXT_UNITS[name] + ("" if e == 1 else f"^{e}"))
    return " ".join(out)


def format_text(x: OpExpr) -> str:
    if x.is_zero():
        return "0"
    pieces = []
    for (m, u), v in x.items():
        s = str(v)
        ut = _units_text(u)
        body = " ".join(p for p in (ut, mono_text(m) if m != OpMonomial() else "") if p)
        if body and s in ("1", "-1"):
            s = s[:-1]
        pieces.append(f"{s} {body}".replace("- ", "-").strip() if body else s)
    out = pieces[0]
    for p in pieces[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def mono_latex(m: OpMonomial) -> str:
    if m.phi:
        return r"\phi"
    parts = []
    if m.pi:
        parts.append(rf"\boldsymbol{{\pi}}^{{{m.pi}}}")
    if m.sp == 1:
        parts.append(r"(\boldsymbol{\sigma}\cdot\boldsymbol{\pi})")
    elif m.sp:
        parts.append(rf"(\boldsymbol{{\sigma}}\cdot\boldsymbol{{\pi}})^{{{m.sp}}}")
    if m.field is not Field.NONE:
        parts.append(_TEX_STRUCT[m.field])
    return r"\,".join(parts)


def _frac_latex(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return rf"\frac{{{f.numerator}}}{{{f.denominator}}}"


def _term_latex(v: ExactScalar, u: Units, m: OpMonomial) -> tuple[str, str]:
    """(sign, body) for one term."""
    if v.im == 0:
        mag, sign, imag = v.re, v.re < 0, ""
    elif v.re == 0:
        mag, sign, imag = v.im, v.im < 0, "i"
    else:
        sign, mag, imag = False, None, ""
    num, den = [], []
    for name, e in zip(UNIT_SYMBOLS, u.as_tuple()):
        sym = _TEX_UNITS[name]
        if e > 0:
            num.append(sym if e == 1 else f"{sym}^{{{e}}}")
        elif e < 0:
            den.append(sym if e == -1 else f"{sym}^{{{-e}}}")
    if mag is None:
        lead = rf"\left({_frac_latex(v.re)}{'+' if v.im > 0 else '-'}{_frac_latex(abs(v.im))}i\right)"
        numer = " ".join(num) or "1"
        denom = " ".join(den)
        unit = rf"\frac{{{numer}}}{{{denom}}}" if den else (" ".join(num))
        body = lead + unit
    else:
        mag = abs(mag)
        numer = " ".join(([str(mag.numerator)] if mag.numerator != 1 or not (num or imag) else []) + ([imag] if imag else []) + num)
        denom_parts = ([str(mag.denominator)] if mag.denominator != 1 else []) + den
        if denom_parts:
            body = rf"\frac{{{numer or '1'}}}{{{' '.join(denom_parts)}}}"
        else:
            body = numer or "1"
    ml = mono_latex(m)
    if ml:
        body = body + r"\," + ml if body != "1" else ml
    return ("-" if sign else "+"), body


def format_latex(x: OpExpr) -> str:
    if x.is_zero():
        return "0"
    out = []
    for i, ((m, u), v) in enumerate(x.items()):
        sign, body = _term_latex(v, u, m)
        if i == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)
