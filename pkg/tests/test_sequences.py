from fractions import Fraction as F

import pytest

from fwexact.sequences import (
    IDENTITIES,
    check_identity,
    coeff,
    seq_table,
    series_lhs,
    series_rhs,
    verify_series,
)


def test_values():
    t = seq_table(4)
    assert t["a"] == [1, 1, 2, 5, 14]
    assert t["b"][:4] == [0, 1, 3, 10]
    assert (coeff("c", 2), coeff("c", 3), coeff("c", 4)) == (2, 12, 58)
    assert (coeff("d", 2), coeff("d", 3), coeff("d", 4)) == (2, 8, 30)
    assert coeff("c", 0) == coeff("c", 1) == coeff("d", 0) == coeff("d", 1) == 0


def test_b_is_odd_multiple_of_catalan():
    for j in range(1, 150):
        assert coeff("b", j) == (2 * j - 1) * coeff("a", j - 1)


def test_deep_index_and_integrality():
    v = coeff("d", 500)
    assert isinstance(v, int) and v > 0
    assert all(isinstance(coeff(s, 300), int) for s in "abcd")


def test_bad_arguments():
    with pytest.raises(ValueError):
        coeff("e", 1)
    with pytest.raises(ValueError):
        coeff("a", -1)
    with pytest.raises(ValueError):
        check_identity("Z", 5)
    with pytest.raises(ValueError):
        check_identity("E", 1)


def test_identity_examples():
    a = [coeff("a", j) for j in range(4)]
    assert a[0] * a[2] + a[1] * a[1] + a[2] * a[0] == 5 == a[3]
    assert check_identity("A", 3).passed
    assert coeff("b", 3) + coeff("c", 3) == 22 == 4 * coeff("b", 2) + 4 * coeff("c", 2) + coeff("a", 2)
    assert check_identity("D", 2).passed


def test_printed_f_fails_at_one():
    rep = check_identity("F", 4)
    assert rep.status == "printed-inconsistent"
    assert (1, 4, 2) in rep.failures
    assert (2, 12, 8) in rep.failures
    assert "printed-inconsistent" in rep.describe()


def test_c1_and_c2_disagree_at_two():
    c1 = check_identity("C1", 6)
    assert c1.first_failure == (2, 0, 1)
    assert c1.informational
    assert check_identity("C2", 60).passed


@pytest.mark.parametrize("id", ["A", "B", "C2", "D", "E"])
def test_authoritative_identities(id):
    rep = check_identity(id, 120)
    assert rep.passed, rep.describe()
    assert rep.to_json()["status"] == "pass"


def test_every_identity_has_a_form():
    assert set(IDENTITIES) == {"A", "B", "C1", "C2", "D", "E", "F"}


def test_series_examples():
    a = series_lhs("a", 6)
    assert (a[1], a[3], a[5]) == (F(1, 2), F(-1, 8), F(1, 16))
    b = series_lhs("b", 6)
    assert (b[0], b[2], b[4]) == (F(-1, 4), F(3, 16), F(-5, 32))
    d = series_lhs("d", 6)
    assert (d[0], d[2], d[4]) == (F(1, 4), F(-1, 4), F(15, 64))


@pytest.mark.parametrize("name", ["a", "b", "d"])
def test_series_pass(name):
    rep = verify_series(name, 60)
    assert rep.passed, rep.describe()
    assert series_lhs(name, 20) == series_rhs(name, 20)


def test_series_c_printed_factor():
    rep = verify_series("c", 40)
    assert not rep.passed
    assert rep.ratio == 4
    # with 1/2 in place of the printed 1/8 the identity holds
    diff = series_rhs("c", 40) * 4
    assert series_lhs("c", 40) == diff


def test_series_order_floor():
    with pytest.raises(ValueError):
        verify_series("a", 3)
