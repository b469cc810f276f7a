"""Tests for exact representation counting and certification."""

import numpy as np
import pytest

from basisforge.caps import CapExceededError
from basisforge.constructions import BasisSet, teichmuller_rds_basis
from basisforge.groups import parse_group_spec
from basisforge.verify import check_g_basis, check_rds, representation_counts


def _basis(spec, elems, kind=None, g=None):
    g_obj = parse_group_spec(spec)
    return BasisSet(g_obj, frozenset(elems), kind, g, {"family": "test"})


def test_counts_examples():
    z3 = parse_group_spec("Z3")
    assert list(representation_counts(z3, [(0,)], "additive")) == [1, 0, 0]
    assert list(representation_counts(z3, [(0,), (1,)], "difference")) == [2, 1, 1]
    # ordered pairs: 0+1 and 1+0 both count
    assert list(representation_counts(z3, [(0,), (1,)], "additive")) == [1, 2, 1]


def test_counts_full_group():
    g = parse_group_spec("Z4xZ2")
    elems = list(g.elements())
    for kind in ("additive", "difference"):
        counts = representation_counts(g, elems, kind)
        assert all(c == g.order for c in counts)


class _WrappedSpec:
    """GroupSpec hidden behind the black-box surface, to hit the slow path."""

    def __init__(self, g):
        self._g = g
        self.identity = g.identity

    def op(self, a, b):
        return self._g.op(a, b)

    def inverse(self, a):
        return self._g.inverse(a)

    def elements(self):
        return self._g.elements()


def test_black_box_path_agrees_with_spec_path():
    import random

    rng = random.Random(3)
    g = parse_group_spec("Z4xZ3")
    elems = list(g.elements())
    for _ in range(10):
        A = rng.sample(elems, rng.randint(1, 8))
        for kind in ("additive", "difference"):
            fast = representation_counts(g, A, kind)
            slow = representation_counts(_WrappedSpec(g), A, kind)
            assert np.array_equal(fast, slow)


def test_counts_reject_foreign_elements():
    with pytest.raises(ValueError):
        representation_counts(parse_group_spec("Z3"), [(5,)], "additive")
    with pytest.raises(ValueError):
        representation_counts(parse_group_spec("Z3"), [(0,)], "sums")


def test_cap_exceeded():
    g = parse_group_spec("Z1021")
    with pytest.raises(CapExceededError):
        representation_counts(g, [(0,)], "additive", cap=512)


def test_certificate_full_group():
    g = parse_group_spec("Z3^2")
    cert = check_g_basis(_basis("Z3^2", list(g.elements())), "difference", 4)
    assert cert.passed
    assert cert.min_count == g.order
    assert sum(k * v for k, v in cert.histogram.items()) == g.order**2


def test_certificate_fail_with_argmin():
    basis = teichmuller_rds_basis(2, complete=False)
    cert = check_g_basis(basis, "difference", 1)
    assert not cert.passed
    # the miss is inside the doubled subgroup, away from 0
    assert cert.argmin != (0, 0)
    assert all(c % 2 == 0 for c in cert.argmin)


def test_certificate_histogram_conservation():
    basis = _basis("Z5", [(0,), (1,), (3,)])
    cert = check_g_basis(basis, "additive", 1)
    assert sum(k * v for k, v in cert.histogram.items()) == 9
    assert cert.verdict == "pass"


def test_trivial_group_certificate():
    basis = _basis("Z2", [(0,), (1,)])
    cert = check_g_basis(basis, "difference", 2)
    assert cert.passed and cert.min_count == 2


def test_check_rds_examples():
    # Teichmuller system of GR(4,2) vs the doubled subgroup
    basis = teichmuller_rds_basis(2, complete=False)
    assert check_rds(basis, [(2, 0), (0, 2)], 1).passed
    # two-element system in Z_4
    basis = _basis("Z4", [(0,), (1,)])
    assert check_rds(basis, [(2,)], 1).passed
    # wrong lambda fails with a witness
    res = check_rds(basis, [(2,)], 2)
    assert not res.passed
    assert res.witness is not None and res.expected == 2


def test_check_rds_parabola_field():
    from basisforge.constructions import parabola_basis_odd

    basis = parabola_basis_odd(3, 1, 1, complete=False)
    assert check_rds(basis, [(0, 1)], 1).passed


def test_rejects_bad_g():
    basis = _basis("Z3", [(0,)])
    with pytest.raises(ValueError):
        check_g_basis(basis, "difference", 0)
