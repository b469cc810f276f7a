"""Tests for 2-group classification and the partition census."""

import random

import pytest

from basisforge.admissibility import (
    ADMISSIBLE,
    INADMISSIBLE,
    WEAKLY_ONLY,
    TwoGroupShape,
    classify,
    classify_group,
    group_of_partition,
    partition_census,
    partition_count_pentagonal,
    partitions,
    shape_of_2group,
)
from basisforge.groups import GroupSpec, parse_group_spec


def test_shape_examples():
    s = shape_of_2group(parse_group_spec("Z4^2xZ2"))
    assert s.even_part == ((1, 2),) and s.odd_part == () and s.v == 1
    s = shape_of_2group(parse_group_spec("Z64xZ8xZ2^2"))
    assert s.even_part == ((3, 1),) and s.odd_part == ((1, 1),) and s.v == 2
    with pytest.raises(ValueError):
        shape_of_2group(parse_group_spec("Z3"))


def test_shape_order():
    s = shape_of_2group(parse_group_spec("Z64xZ8xZ2^2"))
    assert 2**s.order_exponent == 64 * 8 * 2 * 2


def test_classify_examples():
    assert classify_group(parse_group_spec("Z2")) == INADMISSIBLE
    assert classify(TwoGroupShape((), (), 0)) == ADMISSIBLE  # trivial group
    assert classify(TwoGroupShape(((3, 1),), (), 1)) == WEAKLY_ONLY


def test_classify_small_exponents_excluded():
    # Z_4 and Z_16 blocks do not count toward the inequalities
    assert classify_group(parse_group_spec("Z4xZ2^2")) == INADMISSIBLE
    assert classify_group(parse_group_spec("Z16xZ2")) == INADMISSIBLE
    assert classify_group(parse_group_spec("Z8xZ2")) == ADMISSIBLE


def _verdicts(shape):
    big_even = sum(u for s, u in shape.even_part if s not in (1, 2))
    odd_total = sum(c for _, c in shape.odd_part)
    weak = big_even + odd_total >= shape.v
    adm = 2 * (big_even // 2) + odd_total >= shape.v
    return weak, adm


def _random_shape(rng):
    even = {}
    for _ in range(rng.randint(0, 3)):
        even[rng.randint(1, 5)] = rng.randint(1, 4)
    odd = {}
    for _ in range(rng.randint(0, 3)):
        odd[rng.randint(1, 5)] = rng.randint(1, 4)
    return TwoGroupShape(tuple(sorted(even.items())), tuple(sorted(odd.items())), rng.randint(0, 8))


def test_admissible_implies_weakly_fuzz():
    rng = random.Random(11)
    for _ in range(500):
        shape = _random_shape(rng)
        weak, adm = _verdicts(shape)
        verdict = classify(shape)
        if verdict == ADMISSIBLE:
            assert adm and weak
        elif verdict == WEAKLY_ONLY:
            assert weak and not adm
        else:
            assert not weak and not adm


def test_even_sum_makes_notions_coincide_fuzz():
    rng = random.Random(13)
    seen = 0
    for _ in range(800):
        shape = _random_shape(rng)
        big_even = sum(u for s, u in shape.even_part if s not in (1, 2))
        if big_even % 2 != 0:
            continue
        seen += 1
        assert classify(shape) != WEAKLY_ONLY
    assert seen > 50


def test_partitions_count_matches_pentagonal():
    pent = partition_count_pentagonal(30)
    for n in range(0, 31):
        assert sum(1 for _ in partitions(n)) == pent[n]


def test_census_n1():
    stats = partition_census(1)
    assert stats.total == 1 and stats.admissible == 0 and stats.weakly_admissible == 0


def test_census_n4_hand_oracle():
    # partitions of 4: Z16, Z8xZ2, Z4^2, Z4xZ2^2, Z2^4 -> 3 admissible
    stats = partition_census(4)
    assert stats.total == 5
    assert stats.admissible == 3
    verdicts = {
        tuple(group_of_partition(p).moduli): classify_group(group_of_partition(p))
        for p in partitions(4)
    }
    assert verdicts[(16,)] == ADMISSIBLE
    assert verdicts[(8, 2)] == ADMISSIBLE
    assert verdicts[(4, 4)] == ADMISSIBLE
    assert verdicts[(4, 2, 2)] == INADMISSIBLE
    assert verdicts[(2, 2, 2, 2)] == INADMISSIBLE


def test_census_n5_classical_value():
    assert partition_census(5).total == 7


def test_census_counts_monotone_window():
    r20 = partition_census(20).ratio
    r30 = partition_census(30).ratio
    r40 = partition_census(40).ratio
    assert r30 >= r20
    assert r40 >= r30


def test_census_invariant_ordering():
    for n in (3, 7, 12):
        stats = partition_census(n)
        assert stats.admissible <= stats.weakly_admissible <= stats.total


def test_census_cap():
    from basisforge.caps import CapExceededError

    with pytest.raises(CapExceededError):
        partition_census(91)


def test_group_of_partition():
    assert group_of_partition([3, 1]).moduli == (8, 2)
    assert group_of_partition([]) == GroupSpec(())
