"""Tests for the counting lower bound and the closed-form upper bounds."""

import math
import random

import pytest

from basisforge.bounds import (
    SmallCaseExcludedError,
    appendix_upper_bounds,
    bound_report,
    bound_table,
    lower_bound,
)
from basisforge.groups import GroupSpec, parse_group_spec


def test_lower_bound_examples():
    assert lower_bound(parse_group_spec("Z3^2"), 1, "difference") == 4
    assert lower_bound(parse_group_spec("Z2^2"), 2, "additive") == 3
    assert lower_bound(parse_group_spec("Z9"), 1, "additive") == 4


def test_lower_bound_trivial_group():
    g = GroupSpec(())
    assert lower_bound(g, 1, "additive") == 1
    assert lower_bound(g, 1, "difference") == 1


def test_lower_bound_matches_float_formula():
    rng = random.Random(5)
    for _ in range(300):
        N = rng.randint(1, 10**6)
        g = rng.randint(1, 50)
        lb_add = lower_bound(N, g, "additive")
        if g == 1:
            target = math.sqrt(2 * N + 0.25) - 0.5
        else:
            target = math.sqrt(g * N)
        assert lb_add >= target - 1e-9
        assert lb_add - 1 < target + 1e-9
        lb_diff = lower_bound(N, g, "difference")
        target = math.sqrt(g * (N - 1) + 0.25) + 0.5
        assert lb_diff >= target - 1e-9
        assert lb_diff - 1 < target + 1e-9 or lb_diff == 1


def test_lower_bound_rejects_bad_g():
    with pytest.raises(ValueError):
        lower_bound(4, 0, "additive")
    with pytest.raises(ValueError):
        lower_bound(4, 1, "sums")


def test_appendix_additive_z7_squared():
    entries = appendix_upper_bounds(7, 1, 1, "additive")
    by_name = {e.name: e for e in entries}
    assert by_name["triple-of-lines"].value == 18  # 3 * (7 - 1)
    assert by_name["triple-of-lines"].preconditions_met
    assert 6 in by_name["triple-of-lines"].g_values


def test_appendix_difference_z3_fourth():
    entries = appendix_upper_bounds(3, 1, 2, "difference")
    by_name = {e.name: e for e in entries}
    assert by_name["parabola"].value == 36  # 9 + 9*3, exact integer
    assert by_name["parabola"].exact
    assert by_name["pair-of-lines"].value == 16
    # the split through (3,1,1) is gated off: that case is excluded
    assert not by_name["split-pair-parabola"].preconditions_met
    # floor(12 + 36*sqrt(3)) = 74
    assert by_name["split-pair-parabola"].value == 74
    report = bound_report(parse_group_spec("Z3^4"), 1, "difference")
    assert report.lower == 10
    assert report.best_upper == 16


def test_appendix_excluded_cases():
    with pytest.raises(SmallCaseExcludedError):
        appendix_upper_bounds(2, 1, 1, "additive")
    with pytest.raises(SmallCaseExcludedError):
        appendix_upper_bounds(3, 1, 1, "difference")


def test_appendix_even_prime_difference_gated():
    entries = appendix_upper_bounds(2, 2, 1, "difference")
    assert all(not e.preconditions_met for e in entries)
    # but the additive side applies where the slope count fits
    add_entries = appendix_upper_bounds(2, 2, 1, "additive")
    by_name = {e.name: e for e in add_entries}
    assert by_name["pair-of-lines"].preconditions_met
    assert by_name["pair-of-lines"].value == 2 * (4 - 1)
    # k=3 needs p^n >= 3, which fails at (2,2,1)
    assert not by_name["triple-of-lines"].preconditions_met


def test_radical_floor_is_exact():
    # 5^{(1-1/2)*1} = sqrt(5): floor(5 + 9 sqrt 5) = 25
    entries = appendix_upper_bounds(5, 1, 1, "difference")
    by_name = {e.name: e for e in entries}
    assert by_name["parabola"].value == 5 + math.isqrt(81 * 5)
    assert not by_name["parabola"].exact


def test_bound_report_non_family_group():
    report = bound_report(parse_group_spec("Z6"), 1, "difference")
    assert report.uppers == []
    assert report.lower == lower_bound(6, 1, "difference")


def test_bound_report_trivial_group():
    report = bound_report(GroupSpec(()), 1, "difference")
    assert report.lower == 1


def test_bound_table_rows():
    rows = bound_table([(5, 1)], [1], [1, 2], ["difference"])
    assert len(rows) == 2
    for row in rows:
        assert row.group.moduli == (5, 5)
        assert row.lower >= 1
        csv_row = row.csv_row()
        assert len(csv_row) == 8


def test_best_upper_respects_gates():
    report = bound_report(parse_group_spec("Z2^4"), 1, "difference")
    # difference catalogue is odd-p only: no applicable uppers at p = 2
    assert report.best_upper is None
