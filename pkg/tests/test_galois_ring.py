"""Tests for Galois ring arithmetic, units, and Teichmuller systems."""

import itertools

import pytest

from basisforge.galois_ring import (
    GaloisRing,
    construct_ring,
    from_group_element,
    is_unit,
    ring_add,
    ring_inverse,
    ring_mul,
    teichmuller,
    to_group_element,
    unit_count,
)


def test_construct_ring_examples():
    assert construct_ring(2, 2, 1).f == (1, 1)
    assert construct_ring(2, 2, 2).f == (1, 1, 1)
    assert construct_ring(3, 1, 2).f == (1, 0, 1)


def test_construct_ring_rejects_composite():
    with pytest.raises(ValueError):
        construct_ring(4, 1, 1)
    with pytest.raises(ValueError):
        construct_ring(2, 0, 1)


def test_construct_ring_reducible_modulus_rejected():
    # x^2 + 2x + 1 = (x+1)^2 mod 3
    with pytest.raises(ValueError):
        GaloisRing(3, 1, 2, (1, 2, 1))


def test_mul_examples():
    R = construct_ring(2, 2, 2)
    assert R.mul((0, 1), (0, 1)) == (3, 3)
    assert R.mul((3, 1), R.one) == (3, 1)
    R3 = construct_ring(3, 1, 2)
    assert R3.mul((0, 1), (0, 1)) == (2, 0)


def test_ring_axioms_exhaustive():
    for (p, s, n) in [(2, 2, 2), (3, 2, 1), (2, 3, 1), (3, 1, 2)]:
        R = construct_ring(p, s, n)
        els = list(R.elements())
        assert len(els) == R.size
        for a, b in itertools.product(els, repeat=2):
            assert R.mul(a, b) == R.mul(b, a)
            assert R.add(a, b) == R.add(b, a)
        for a, b, c in itertools.product(els[:6], els[:6], els):
            assert R.mul(a, R.mul(b, c)) == R.mul(R.mul(a, b), c)
            assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))


def test_is_unit_examples():
    R = construct_ring(2, 2, 2)
    assert not is_unit(R, (2, 2))
    assert is_unit(R, (1, 0))
    R9 = construct_ring(3, 2, 1)
    assert not is_unit(R9, (3,))


def test_unit_count_formula():
    for (p, s, n) in [(2, 2, 2), (3, 2, 1), (2, 3, 1), (3, 1, 2), (5, 1, 2), (2, 2, 3)]:
        R = construct_ring(p, s, n)
        assert sum(1 for a in R.elements() if is_unit(R, a)) == unit_count(R)


def test_ring_inverse_examples():
    R4 = construct_ring(2, 2, 1)
    assert ring_inverse(R4, R4.one) == R4.one
    assert ring_inverse(R4, (3,)) == (3,)
    R9 = construct_ring(3, 2, 1)
    assert ring_inverse(R9, (2,)) == (5,)


def test_ring_inverse_exhaustive():
    for (p, s, n) in [(2, 2, 2), (3, 2, 1), (2, 3, 2), (5, 2, 1)]:
        R = construct_ring(p, s, n)
        for a in R.elements():
            if is_unit(R, a):
                assert R.mul(a, ring_inverse(R, a)) == R.one
            else:
                with pytest.raises(ValueError):
                    ring_inverse(R, a)


def test_teichmuller_gr41():
    R = construct_ring(2, 2, 1)
    system = teichmuller(R)
    assert system.xi == (1,)
    assert set(system.elements) == {(0,), (1,)}


def test_teichmuller_invariants():
    for (p, s, n) in [(2, 2, 2), (2, 2, 3), (3, 1, 2), (3, 2, 2), (2, 3, 2)]:
        R = construct_ring(p, s, n)
        system = teichmuller(R)
        m = p**n - 1
        assert len(system.elements) == p**n
        assert system.elements[0] == R.zero
        assert R.pow(system.xi, m) == R.one
        for d in range(1, m):
            if m % d == 0:
                assert R.pow(system.xi, d) != R.one
        # transversal of R/pR and pairwise unit differences
        residues = {tuple(c % p for c in e) for e in system.elements}
        assert len(residues) == p**n
        for a, b in itertools.combinations(system.elements, 2):
            assert is_unit(R, R.sub(a, b))


def test_to_group_element_round_trip():
    R = construct_ring(2, 2, 2)
    assert to_group_element(R, (3, 1)) == (3, 1)
    assert to_group_element(R, R.zero) == (0, 0)
    for a in R.elements():
        assert from_group_element(R, to_group_element(R, a)) == a
    # additive isomorphism on all pairs
    g = R.group
    for a, b in itertools.product(R.elements(), repeat=2):
        assert to_group_element(R, ring_add(R, a, b)) == g.op(
            to_group_element(R, a), to_group_element(R, b)
        )


def test_ring_mul_alias():
    R = construct_ring(3, 1, 2)
    assert ring_mul(R, (0, 1), (0, 1)) == (2, 0)
