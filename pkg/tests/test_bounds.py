import math
from decimal import Decimal
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psb import bounds as Bd
from psb.bounds import (
    CONSTANT_THRESHOLDS,
    LogBound,
    construction_constant,
    construction_constant_bound,
    fv_lower,
    knuth_lower,
    knuth_upper,
    log2_table_B,
    matousek_lower,
    prior_report,
    table_bound_consistent,
    unrolled_lower,
)
from psb.enumeration import TABLE_B, macmahon_P


def test_logbound_folds_powers_of_two():
    b = LogBound.log2(24)
    assert b.rational == 3 and b.terms == {3: 1}
    assert LogBound.log2(1024).is_rational() and LogBound.log2(1024).rational == 10
    assert LogBound.log2(1) == LogBound(0)


def test_logbound_arithmetic():
    a = LogBound.log2(3) + LogBound.log2(5, F(1, 2)) + 2
    assert a.exact() == "2 + 1*log2(3) + 1/2*log2(5)"
    assert (a * 2 + a * -2) == LogBound(0)
    assert (a / 2).terms == {3: F(1, 2), 5: F(1, 4)}
    assert LogBound.log2(9, 1).exact() == "1*log2(9)"
    assert LogBound(F(-1, 3)).exact() == "-1/3"
    with pytest.raises(ValueError):
        LogBound.log2(0)


def test_evaluate_examples():
    b = LogBound.log2(3)
    assert b.evaluate(10, "down") == Decimal("1.584962500")
    assert b.evaluate(10, "up") == Decimal("1.584962501")
    assert LogBound(F(1, 3)).evaluate(5, "down") == Decimal("0.33333")
    assert LogBound(F(1, 3)).evaluate(5, "up") == Decimal("0.33334")
    assert LogBound(F(1, 2)).evaluate(5, "up") == Decimal("0.5")
    with pytest.raises(ValueError):
        b.evaluate(5, "sideways")


int_terms = st.dictionaries(st.integers(2, 10**6), st.fractions(max_denominator=50).filter(bool), max_size=4)


@settings(max_examples=100)
@given(st.fractions(max_denominator=1000), int_terms, st.integers(5, 60))
def test_directed_rounding_brackets(q, terms, digits):
    b = LogBound(q, terms)
    lo, hi = b.evaluate(digits, "down"), b.evaluate(digits, "up")
    assert lo <= hi
    iv = b.interval(digits + 20)
    assert F(lo) <= Bd._mpf_fraction(iv._mpi_[1]) and F(hi) >= Bd._mpf_fraction(iv._mpi_[0])


@settings(max_examples=60)
@given(int_terms, st.integers(5, 40))
def test_more_digits_tighten(terms, d):
    b = LogBound(0, terms)
    assert b.evaluate(d, "down") <= b.evaluate(d + 10, "down") <= b.evaluate(d + 10, "up") <= b.evaluate(d, "up")


def test_precision_env(monkeypatch):
    monkeypatch.setenv("PSB_PRECISION", "12")
    assert Bd.default_digits() == 12
    assert len(LogBound.log2(3).evaluate().as_tuple().digits) == 12
    monkeypatch.setenv("PSB_PRECISION", "3")
    with pytest.raises(ValueError):
        Bd.default_digits()
    monkeypatch.delenv("PSB_PRECISION")
    assert Bd.default_digits() == 50


def test_rect4_constant_is_one_sixth():
    assert construction_constant_bound("rect4") == LogBound(F(1, 6))


@pytest.mark.parametrize("name", sorted(CONSTANT_THRESHOLDS))
def test_constants_reach_thresholds(name):
    assert construction_constant(name) >= CONSTANT_THRESHOLDS[name]


def test_constant_order():
    vals = [construction_constant(n) for n in ("rect4", "hex6", "rect8", "rect12", "hex12")]
    assert vals == sorted(vals)


def test_knuth_examples():
    assert knuth_lower(3) == log2_table_B(3) == LogBound(1)
    assert knuth_lower(6) == LogBound(3) + log2_table_B(3)
    assert knuth_lower(12) == LogBound(15) + knuth_lower(6)
    assert float(knuth_lower(6)) <= 9.83


def test_matousek_examples():
    assert matousek_lower(9) == LogBound(F(39, 4))
    assert matousek_lower(3) == LogBound(1)
    assert matousek_lower(27) == LogBound(F(243, 4)) + matousek_lower(9) * 3


def test_fv_examples():
    assert fv_lower(9) == LogBound.log2(980) + LogBound(3)
    assert fv_lower(3) == LogBound(1)
    assert fv_lower(27) == LogBound.log2(macmahon_P(9, 9, 9).value) + fv_lower(9) * 3


def test_knuth_upper():
    for n in range(3, 16):
        assert table_bound_consistent(log2_table_B(n), n)
        diff = knuth_upper(n) + log2_table_B(n) * -1
        assert diff.evaluate(20, "down") >= 0
    assert abs(float(knuth_upper(1000) / 10**6) - 0.7924812) < 1e-3
    with pytest.raises(ValueError):
        knuth_upper(2)


@pytest.mark.parametrize("n", range(1, 16))
def test_lower_bounds_below_table(n):
    for lb in (knuth_lower(n), matousek_lower(n), fv_lower(n)):
        assert table_bound_consistent(lb, n)
    for name in ("rect4", "hex6", "rect8", "rect12", "hex12"):
        assert table_bound_consistent(Bd._unrolled(name, n), n)


def test_rect4_unrolled_structure():
    # 36 lines: m = 9, so one level of nine-line bundles above the base table
    lb = Bd._unrolled("rect4", 36)
    assert lb == Bd._junction_log2("rect4", 9) + log2_table_B(9) * 4
    assert Bd._unrolled("rect4", 11) == log2_table_B(11)


def test_hex6_unrolled():
    rep = unrolled_lower("hex6", 324)
    assert rep.normalized >= Decimal("0.10")
    assert rep.to_dict()["name"] == "hex6" and rep.to_dict()["n"] == 324


@pytest.mark.parametrize("name", ["hex12", "rect12"])
def test_unrolled_beats_matousek(name):
    assert unrolled_lower(name, 1296, 20).normalized > prior_report("matousek", 1296, 20).normalized


def test_prior_reports_normalized():
    assert prior_report("knuth", 1024, 10).normalized < Decimal("0.17")
    m = [prior_report("matousek", 3**e, 10).normalized for e in range(2, 7)]
    assert m == sorted(m) and m[-1] < Decimal("0.125")
