from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dcsit_gdof import lp
from dcsit_gdof.achievability import (
    PowerSplit,
    Source,
    case_constraints_mixed,
    case_constraints_strong,
    closed_form_lower,
    maximin_search,
    three_slot_ledger,
)
from dcsit_gdof.core import AlphaPair, RegionCase, canonicalize, classify_region
from dcsit_gdof.errors import DomainError


def optimum(prog):
    sol = lp.solve(prog)
    assert sol.optimal
    return sol


def test_strong_split_matching_closed_form():
    sol = optimum(case_constraints_strong(AlphaPair(1.2, 1.2), PowerSplit(2.2 / 3, 2.2 / 3)))
    assert sol.value == pytest.approx(4.4 / 3, abs=1e-9)
    assert sol.point == pytest.approx((2.2 / 3, 2.2 / 3), abs=1e-9)


def test_strong_split_infeasible_when_interference_unrecoverable():
    assert case_constraints_strong(AlphaPair(1.2, 1.2), PowerSplit(0, 0)) is None


def test_strong_split_at_two_two_fails_predicate():
    # alpha1 + alpha2 = 4 > A1 + A2 + 1 = 3, so the recoverability condition
    # rules this split out even though its caps alone would allow d = (1, 1).
    assert case_constraints_strong(AlphaPair(2, 2), PowerSplit(1, 1)) is None


def test_mixed_split_examples():
    a = AlphaPair(1.5, 0.5)
    sol = optimum(case_constraints_mixed(a, PowerSplit(5 / 6, 1 / 3)))
    assert sol.value == pytest.approx(5 / 3, abs=1e-9)
    assert sol.point == pytest.approx((5 / 6, 5 / 6), abs=1e-9)
    worse = optimum(case_constraints_mixed(a, PowerSplit(0.9, 4 / 15)))
    assert worse.value < 5 / 3 - 1e-6
    assert case_constraints_mixed(a, PowerSplit(0, 0)) is None


def test_case_constraints_guard_region_and_box():
    with pytest.raises(DomainError):
        case_constraints_strong(AlphaPair(1.5, 0.5), PowerSplit(0.5, 0.2))
    with pytest.raises(DomainError):
        case_constraints_mixed(AlphaPair(2, 2), PowerSplit(1, 1))
    with pytest.raises(DomainError):
        case_constraints_strong(AlphaPair(1.2, 1.2), PowerSplit(1.3, 0.5))


def test_closed_form_lower_examples():
    assert closed_form_lower(AlphaPair(F(1), F(1))) == (F(4, 3), None)
    assert closed_form_lower(AlphaPair(F(3, 2), F(1, 2))) == (F(5, 3), F(7, 6))
    assert closed_form_lower(AlphaPair(2, 2)) == (2, 2)
    assert closed_form_lower(AlphaPair(1.5, 0.2)) is None


def test_closed_forms_meet_on_alpha2_one():
    for a1 in (1.1, 1.5, 2.0, 2.9):
        left = closed_form_lower(AlphaPair(a1, 1.0)).sum_gdof
        right = closed_form_lower(AlphaPair(a1, 1.0 + 1e-12)).sum_gdof
        assert left == pytest.approx((3 + a1) / 3, abs=1e-9)
        assert right == pytest.approx(left, abs=1e-9)


def test_maximin_mixed_example():
    res = maximin_search(AlphaPair(1.5, 0.5), 0.01)
    assert abs(res.sum_gdof - 5 / 3) <= 0.04
    assert abs(res.best.a1 - 5 / 6) <= 0.02 and abs(res.best.a2 - 1 / 3) <= 0.02


def test_maximin_strong_capped_by_private_rows():
    # With A1 + A2 >= alpha1 + alpha2 - 1 = 1.6 the rows d1 <= 2.4 - 2 A1 and
    # d2 <= 2.2 - 2 A2 add up to at most 4.6 - 3.2 = 1.4.
    res = maximin_search(AlphaPair(1.4, 1.2), 0.01)
    assert res.sum_gdof == pytest.approx(1.4, abs=1e-9)


def test_maximin_two_two_has_single_degenerate_split():
    # only A1 = A2 = 1.5 meets alpha1 + alpha2 <= A1 + A2 + 1, and it zeroes
    # both private rows alpha_i + 1 - 2 A_i
    res = maximin_search(AlphaPair(2, 2), 0.01)
    assert res.feasible_points == 1
    assert res.best == PowerSplit(1.5, 1.5)
    assert res.sum_gdof == pytest.approx(0.0, abs=1e-9)


def test_maximin_no_feasible_split():
    res = maximin_search(AlphaPair(2.1, 2.0), 0.01)
    assert res.best is None and np.isnan(res.sum_gdof)


def test_maximin_guards():
    with pytest.raises(DomainError):
        maximin_search(AlphaPair(0.5, 0.5), 0.01)
    with pytest.raises(DomainError):
        maximin_search(AlphaPair(1.5, 0.5), 0.2)


@pytest.mark.parametrize("pair", [(1.5, 0.5), (1.3, 1.25), (2.5, 0.8)])
def test_maximin_backends_agree(pair):
    a = AlphaPair(*pair)
    results = [maximin_search(a, 0.02, name) for name in sorted(lp.BACKENDS)]
    assert all(r == results[0] for r in results)


strong_or_mixed = st.tuples(
    st.floats(min_value=1.01, max_value=3), st.floats(min_value=0, max_value=3)
).map(lambda t: canonicalize(AlphaPair(*t))[0]).filter(
    lambda a: classify_region(a) in (RegionCase.BOTH_STRONG, RegionCase.MIXED_COVERED)
)


@given(strong_or_mixed, st.floats(0, 1), st.floats(0, 1))
def test_recovered_interference_within_caps(a, u1, u2):
    p = PowerSplit(u1 * a.alpha1, u2 * a.alpha2)
    region = classify_region(a)
    build = case_constraints_strong if region is RegionCase.BOTH_STRONG else case_constraints_mixed
    if build(a, p) is None:
        return
    assert a.alpha2 - p.a2 <= min(a.alpha2, 1) + 1e-9
    assert a.alpha1 - p.a1 <= min(a.alpha1, 1) + 1e-9


@pytest.mark.parametrize(
    "pair, d1, d2",
    [((F(1), F(1)), F(2, 3), F(2, 3)), ((0, 0), 1, 1), ((F(3, 5), F(3, 10)), F(9, 10), F(4, 5))],
)
def test_ledger_examples(pair, d1, d2):
    led = three_slot_ledger(AlphaPair(*pair))
    assert (led.d1, led.d2) == (d1, d2)
    assert len(led.entries) == 8
    assert sum(e.source is Source.DELAYED for e in led.entries) == 2


@given(st.fractions(0, 1), st.fractions(0, 1))
def test_ledger_entries_nonnegative_and_bounded(x, y):
    a, _ = canonicalize(AlphaPair(x, y))
    led = three_slot_ledger(a)
    for e in led.entries:
        assert e.gdof >= 0
        if e.source is Source.IMMEDIATE:
            assert e.gdof <= 1
    assert led.d1 + led.d2 == 2 - (a.alpha1 + a.alpha2) / 3


def test_ledger_region_guard():
    with pytest.raises(DomainError):
        three_slot_ledger(AlphaPair(1.5, 0.5))


@pytest.mark.xfail(strict=True, reason="split violates alpha1 + alpha2 <= A1 + A2 + 1")
def test_strong_split_two_two_reaches_two():
    sol = optimum(case_constraints_strong(AlphaPair(2, 2), PowerSplit(1, 1)))
    assert sol.value == pytest.approx(2) and sol.point == pytest.approx((1, 1))


@pytest.mark.xfail(strict=True, reason="the split search cannot reach the closed form here")
@pytest.mark.parametrize("pair, want", [((2, 2), 2.0), ((1.4, 1.2), 4.6 / 3)])
def test_maximin_reaches_closed_form(pair, want):
    assert abs(maximin_search(AlphaPair(*pair), 0.01).sum_gdof - want) <= 0.04
