import random
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from psb.exactnum import ONE, SQRT3, ZERO, Quad, quad_key, rat_key

rats = st.fractions(min_value=-50, max_value=50, max_denominator=60)
quads = st.builds(Quad, rats, rats)
nonzero = quads.filter(bool)


def test_difference_of_squares():
    assert Quad(1, 1) * Quad(1, -1) == Quad(-2, 0)


def test_inverse_of_sqrt3():
    assert SQRT3.inverse() == Quad(0, Fraction(1, 3))


def test_componentwise_addition():
    assert Quad(Fraction(1, 2)) + Quad(0, Fraction(1, 2)) == Quad(Fraction(1, 2), Fraction(1, 2))


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()
    with pytest.raises(ZeroDivisionError):
        Quad(1, 1) / 0


def test_compare_examples():
    assert Quad(2).cmp(SQRT3) == 1
    assert SQRT3.cmp(Quad(Fraction(12, 7))) == 1
    assert Quad(3, -2).cmp(Quad(3, -2)) == 0
    assert Quad(-2, 1) < 0 < Quad(2, -1)


def test_key_is_canonical():
    assert quad_key(Quad(Fraction(1, 2))) == quad_key(Quad(Fraction(2, 4)))
    assert quad_key(SQRT3) != quad_key(Quad(Fraction("1.7320508075688772")))


def test_parse_forms():
    assert Quad.parse("-2*sqrt3") == Quad(0, -2)
    assert Quad.parse("3/2*sqrt3") == Quad(0, Fraction(3, 2))
    assert Quad.parse("1/2 - √3") == Quad(Fraction(1, 2), -1)
    assert Quad.parse("sqrt3") == SQRT3
    assert Quad.parse("0.25") == Quad(Fraction(1, 4))
    assert Quad.parse(str(Quad(Fraction(-7, 3), Fraction(5, 2)))) == Quad(Fraction(-7, 3), Fraction(5, 2))
    with pytest.raises(ValueError):
        Quad.parse("")


def test_rejects_floats():
    with pytest.raises(TypeError):
        Quad(0.5)


def test_hash_matches_rationals():
    assert hash(Quad(Fraction(3, 4))) == hash(Fraction(3, 4))
    assert Quad(5) == 5 and Quad(Fraction(1, 3)) == Fraction(1, 3)


@given(quads, quads, quads)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO


@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == ONE
    assert a / a == ONE


@given(quads, quads, quads)
def test_order_transitive_and_additive(a, b, c):
    if a <= b and b <= c:
        assert a <= c
    assert (a < b) == (a + c < b + c)
    assert sum(x is True for x in (a < b, a == b, a > b)) == 1


@given(quads)
def test_norm_and_conjugate(a):
    assert a * a.conjugate() == Quad(a.norm())
    assert (a.norm() == 0) == (not a)


def _decimal_sign(q: Quad) -> int:
    with localcontext() as ctx:
        ctx.prec = 100
        v = Decimal(q.r.numerator) / Decimal(q.r.denominator) + (
            Decimal(q.s.numerator) / Decimal(q.s.denominator)
        ) * Decimal(3).sqrt()
    return (v > 0) - (v < 0)


def test_sign_agrees_with_100_digit_decimals():
    rng = random.Random(7)
    for _ in range(100_000):
        if rng.random() < 0.3:
            # near-cancelling pairs  p/q - s*sqrt3 with p/q a convergent-like guess
            s = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**3))
            r = Fraction(int(s * Fraction(17320508075688772, 10**16) * 10**6) + rng.randint(-2, 2), 10**6)
            q = Quad(r if rng.random() < 0.5 else -r, -s if rng.random() < 0.5 else s)
        else:
            q = Quad(Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**6)),
                     Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**6)))
        assert q.sign() == _decimal_sign(q)


def test_keys_have_no_collisions_on_a_million_values():
    rng = random.Random(11)
    values = set()
    while len(values) < 1_000_000:
        values.add((Fraction(rng.randint(-5000, 5000), rng.randint(1, 300)),
                    Fraction(rng.randint(-5000, 5000), rng.randint(1, 300))))
    keys = {rat_key(r) + rat_key(s) for r, s in values}
    assert len(keys) == len(values)


@given(quads, quads)
def test_key_injective(a, b):
    assert (quad_key(a) == quad_key(b)) == (a == b)


def test_to_decimal():
    assert str(SQRT3.to_decimal(30)) == "1.73205080756887729352744634151"
    assert Quad(Fraction(1, 4)).to_decimal(5) == Decimal("0.25")
