from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from _gen import exprs, field_free_monomials
from fwexact.opalg import (
    PHI,
    SIGMA_PI,
    Field,
    OpExpr,
    OpMonomial,
    PhiProductError,
    canonicalize,
    commutator_phi,
    dagger,
    expand_sigma_pi,
    format_latex,
    format_text,
    is_hermitian,
    mono,
    mul,
)
from fwexact.scalars import Coefficient, ExactScalar

I = ExactScalar(0, 1)
SE = OpExpr.term(1, OpMonomial(Field.SIGMA_E))
SB = OpExpr.term(1, OpMonomial(Field.SIGMA_B))


def t(value, field=Field.NONE, sp=0, pi=0, **units):
    return OpExpr.term(value, OpMonomial(field, sp, pi), **units)


def test_compact_square():
    assert mul(SIGMA_PI, SIGMA_PI) == t(1, sp=2)


def test_pauli_identity_with_field():
    assert mul(SE, SIGMA_PI) == t(1, Field.E_DOT_PI) + t(I, Field.EXPI_SIGMA)
    # pi x E = -E x pi
    assert mul(SIGMA_PI, SE) == t(1, Field.E_DOT_PI) - t(I, Field.EXPI_SIGMA)


def test_anticommutator_sigma_pi_sigma_b():
    assert mul(SIGMA_PI, SB) + mul(SB, SIGMA_PI) == t(2, Field.B_DOT_PI)


def test_bilinear_truncation():
    assert mul(SE, SE).is_zero()
    assert mul(SB, t(1, Field.E_DOT_PI, 1, 2)).is_zero()


def test_phi_cannot_multiply():
    with pytest.raises(PhiProductError):
        mul(PHI, SIGMA_PI)


def test_commutator_phi_examples():
    assert commutator_phi(SIGMA_PI) == t(-I, Field.SIGMA_E, hbar=1)
    assert commutator_phi(t(1, pi=2)) == t(-2 * I, Field.E_DOT_PI, hbar=1)
    assert commutator_phi(SE).is_zero()
    assert commutator_phi(PHI).is_zero()
    assert commutator_phi(SIGMA_PI, sign=1) == t(I, Field.SIGMA_E, hbar=1)
    with pytest.raises(ValueError):
        commutator_phi(SIGMA_PI, sign=2)


def test_commutator_phi_odd_power_pattern():
    # [phi, (sigma.pi)^3] = -i hbar (pi^2 sigma.E + 2 (sigma.pi)(E.pi))
    got = commutator_phi(t(1, sp=3))
    assert got == t(-I, Field.SIGMA_E, 0, 2, hbar=1) + t(-2 * I, Field.E_DOT_PI, 1, 0, hbar=1)


def test_commutator_phi_even_power_pattern():
    # [phi, (sigma.pi)^4] = -4 i hbar pi^2 (E.pi)
    assert commutator_phi(t(1, sp=4)) == t(-4 * I, Field.E_DOT_PI, 0, 2, hbar=1)


def test_dagger_examples():
    x = t(I, Field.SIGMA_E, q=1, hbar=1)
    assert dagger(x) == t(-I, Field.SIGMA_E, q=1, hbar=1)
    y = t(1, Field.E_DOT_PI, 1)
    assert dagger(y) == y
    assert dagger(t(1, sp=3)) == t(1, sp=3)


def test_dagger_pi_basis_odd():
    # (pi^2 sigma.pi)^dagger = sigma.pi pi^2 = pi^2 sigma.pi + [sigma.pi, pi^2]
    x = t(1, sp=1, pi=2)
    d = dagger(x)
    assert d != x
    assert d == x + t(-2 * I, Field.BXPI_SIGMA, q=1, hbar=1, c=-1)
    assert dagger(d) == x


def test_expand_examples():
    eps = dict(q=1, hbar=1, c=-1)
    assert expand_sigma_pi(t(1, sp=2)) == t(1, pi=2) - t(1, Field.SIGMA_B, **eps)
    assert expand_sigma_pi(t(1, sp=3)) == (
        t(1, sp=1, pi=2) - t(1, Field.B_DOT_PI, **eps) - t(I, Field.BXPI_SIGMA, **eps)
    )
    assert expand_sigma_pi(SIGMA_PI) == SIGMA_PI


def test_expanded_cube_is_hermitian():
    ok, res = is_hermitian(expand_sigma_pi(t(1, sp=3)))
    assert ok, res


def test_is_hermitian_examples():
    assert is_hermitian(t(F(1, 2), pi=2, m=-1))[0]
    x = t(I, Field.E_DOT_PI, q=1, hbar=1)
    ok, res = is_hermitian(x)
    assert not ok and res == x
    ep = t(1, Field.E_DOT_PI)
    assert is_hermitian(mul(SIGMA_PI, ep) + mul(ep, SIGMA_PI))[0]


def test_monomial_grammar():
    with pytest.raises(ValueError):
        mono(Field.SIGMA_E, sp=1)
    with pytest.raises(ValueError):
        mono(Field.E_DOT_PI, sp=2)
    with pytest.raises(ValueError):
        mono(Field.NONE, sp=2, pi=2)
    with pytest.raises(ValueError):
        mono(Field.NONE, pi=3)
    with pytest.raises(ValueError):
        mono(sp=1, phi=True)


def test_canonical_form():
    m = OpMonomial(Field.NONE, 1)
    raw = [(Coefficient.of(1), m), (Coefficient.of(2, q=1), m), (Coefficient.of(-1), m)]
    x = canonicalize(raw)
    assert x == t(2, sp=1, q=1)
    assert len(x) == 1
    assert canonicalize(x) == x


def test_json_roundtrip():
    x = commutator_phi(t(F(3, 7), sp=5, m=-5)) + t(I, Field.BXPI_SIGMA, 0, 4, mupp=1)
    assert OpExpr.from_json(x.to_json()) == x
    assert x.to_json()[0]["mono"].keys() == {"sp", "pi2n", "field", "phi"}


def test_rendering():
    assert format_text(t(1, sp=2)) == "(σ·π)^2"
    assert format_text(OpExpr()) == "0"
    assert "m^-1" in format_text(t(F(1, 2), pi=2, m=-1))
    assert r"\frac{1}{2 m}" in format_latex(t(F(1, 2), sp=1, m=-1))


# ---------------------------------------------------------------------------
# properties

@settings(max_examples=300, deadline=None)
@given(exprs(), exprs(), exprs())
def test_mul_associative(x, y, z):
    assert mul(mul(x, y), z) == mul(x, mul(y, z))


@settings(max_examples=300, deadline=None)
@given(exprs(), exprs())
def test_dagger_antihomomorphism(x, y):
    assert dagger(mul(x, y)) == mul(dagger(y), dagger(x))
    assert dagger(dagger(x)) == x


@settings(max_examples=300, deadline=None)
@given(exprs(field_free_monomials), exprs(field_free_monomials))
def test_leibniz(x, y):
    assert commutator_phi(mul(x, y)) == mul(commutator_phi(x), y) + mul(x, commutator_phi(y))


@settings(max_examples=300, deadline=None)
@given(exprs(max_terms=5))
def test_canonicalize_idempotent(x):
    assert canonicalize(canonicalize(x)) == canonicalize(x) == x
    assert canonicalize(list(reversed(x.terms))) == x


@settings(max_examples=300, deadline=None)
@given(exprs(), exprs())
def test_expand_linear_and_hermiticity_preserving(x, y):
    assert expand_sigma_pi(x + y) == expand_sigma_pi(x) + expand_sigma_pi(y)
    h = x + dagger(x)
    assert is_hermitian(expand_sigma_pi(h))[0]
    assert expand_sigma_pi(expand_sigma_pi(x)) == expand_sigma_pi(x)


@settings(max_examples=300, deadline=None)
@given(exprs(), exprs())
def test_closure(x, y):
    for m in mul(x, y).monomials():
        assert m.check() == m
