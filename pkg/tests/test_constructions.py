"""Tests for the basis constructions, combinators, and searches."""

import itertools
import json

import numpy as np
import pytest

from basisforge.caps import CapExceededError
from basisforge.constructions import (
    BasisSet,
    StarGroupModel,
    UnattainableTargetError,
    even_power_recursion,
    exhaustive_min,
    greedy_basis,
    parabola_basis_odd,
    pcp_lines,
    pcp_multi,
    product_compose,
    quotient_compose,
    star_basis,
    star_basis_standard,
    teichmuller_rds_basis,
)
from basisforge.galois_ring import construct_ring, is_unit
from basisforge.groups import (
    GroupSpec,
    add,
    negate,
    parse_group_spec,
    quotient_by_subgroup,
)
from basisforge.verify import check_g_basis, representation_counts

DIFF = "difference"
ADD = "additive"


# ---------------------------------------------------------------------------
# parabola
# ---------------------------------------------------------------------------


def test_parabola_unit_rows_covered_once():
    for (p, s, n) in [(3, 1, 1), (3, 1, 2), (5, 1, 1), (3, 2, 1)]:
        basis = parabola_basis_odd(p, s, n, complete=False)
        R = construct_ring(p, s, n)
        counts = representation_counts(basis.group, basis.elements, DIFF)
        unit_positions = 0
        for idx, x in enumerate(basis.group.elements()):
            if is_unit(R, x[:n]):
                assert counts[idx] == 1
                unit_positions += 1
        unit_total = p ** ((s - 1) * n) * (p**n - 1)
        assert unit_positions == unit_total * R.size
        assert basis.size == R.size


def test_parabola_312_exact_cover():
    basis = parabola_basis_odd(3, 1, 2, complete=False)
    assert basis.size == 9
    R = construct_ring(3, 1, 2)
    counts = representation_counts(basis.group, basis.elements, DIFF)
    ones = sum(1 for idx, x in enumerate(basis.group.elements()) if counts[idx] == 1)
    unit_rows = sum(
        1 for x in basis.group.elements() if is_unit(R, x[:2])
    )
    assert unit_rows == 72
    for idx, x in enumerate(basis.group.elements()):
        if is_unit(R, x[:2]):
            assert counts[idx] == 1


def test_parabola_complete_is_basis():
    basis = parabola_basis_odd(3, 1, 2, complete=True)
    cert = check_g_basis(basis, DIFF, 1)
    assert cert.passed


def test_parabola_rejects_even_prime():
    with pytest.raises(ValueError):
        parabola_basis_odd(2, 1, 1)


# ---------------------------------------------------------------------------
# Teichmuller relative difference set
# ---------------------------------------------------------------------------


def test_t4rds_n1_counts():
    basis = teichmuller_rds_basis(1, complete=False)
    counts = representation_counts(basis.group, basis.elements, DIFF)
    assert list(counts) == [2, 1, 0, 1]


def test_t4rds_complete_sizes():
    for n in (1, 2, 3):
        basis = teichmuller_rds_basis(n, complete=True)
        assert check_g_basis(basis, DIFF, 1).passed
        # Teichmuller part is 2^n; greedy cover size is recorded, not asserted
        assert basis.size >= 2**n


# ---------------------------------------------------------------------------
# star model
# ---------------------------------------------------------------------------


def test_star_model_group_laws():
    model = StarGroupModel(1)
    elems = list(model.elements())
    assert len(elems) == 16
    for a in elems:
        assert model.op(a, model.inverse(a)) == model.identity
        for b in elems:
            assert model.op(a, b) == model.op(b, a)
    for a, b, c in itertools.product(elems[:6], elems[:6], elems):
        assert model.op(a, model.op(b, c)) == model.op(model.op(a, b), c)


def test_star_basis_verifies():
    for n in (1, 2):
        model, basis = star_basis(n)
        cert = check_g_basis(basis, DIFF, 1)
        assert cert.passed
        bound = 4**n + basis.provenance["t_size"] * basis.provenance["w_size"]
        assert basis.size <= bound


def test_star_parabola_alone_covers_units_once():
    model = StarGroupModel(2)
    R = model.ring
    S = {(x, R.mul(x, x)) for x in R.elements()}
    counts = representation_counts(model, S, DIFF)
    elems = list(model.elements())
    covered = [i for i, c in enumerate(counts) if c >= 1]
    exactly_one = 0
    for i, (x, y) in enumerate(elems):
        if is_unit(R, x):
            assert counts[i] == 1
            exactly_one += 1
    assert exactly_one == 192
    # identity sees every self-pair
    idx0 = elems.index(model.identity)
    assert counts[idx0] == len(S)


def test_star_basis_standard_coordinates():
    basis = star_basis_standard(1)
    assert basis.group.moduli == (8, 2)
    assert check_g_basis(basis, DIFF, 1).passed


# ---------------------------------------------------------------------------
# line unions
# ---------------------------------------------------------------------------


def _line_membership_counts(p, s, n, k, x):
    """How many chosen slopes pass through (a, b)."""
    R = construct_ring(p, s, n)
    from basisforge.constructions import _alphas
    from basisforge.galois_ring import teichmuller

    alphas = _alphas(teichmuller(R), k)
    a, b = x[: n], x[n:]
    return sum(1 for al in alphas if R.mul(al, a) == tuple(b))


@pytest.mark.parametrize("p,s,n,k", [(5, 1, 1, 2), (7, 1, 1, 3)])
def test_pcp_lines_exact_case_counts(p, s, n, k):
    basis = pcp_lines(p, s, n, k)
    q = p ** (s * n)
    assert basis.size == k * (q - 1)
    counts = {
        kind: representation_counts(basis.group, basis.elements, kind)
        for kind in (ADD, DIFF)
    }
    # symmetric set: additive and difference certificates coincide
    assert np.array_equal(counts[ADD], counts[DIFF])
    assert {negate(basis.group, e) for e in basis.elements} == set(basis.elements)
    for idx, x in enumerate(basis.group.elements()):
        lines = _line_membership_counts(p, s, n, k, x)
        if x == basis.group.identity:
            assert counts[DIFF][idx] == basis.size
        elif lines == 0:
            assert counts[DIFF][idx] == k * (k - 1)
        else:
            assert lines == 1
            assert counts[DIFF][idx] == q - 2 + (k - 1) * (k - 2)
    for kind in (ADD, DIFF):
        assert check_g_basis(basis, kind, k * (k - 1)).passed


def test_pcp_lines_small_case_excluded():
    with pytest.raises(ValueError):
        pcp_lines(2, 1, 1, 2)
    with pytest.raises(ValueError):
        pcp_lines(3, 1, 1, 2)


def test_pcp_multi_z5xz7():
    G = parse_group_spec("Z5xZ7")
    basis = pcp_multi(G, 4)
    assert basis.group.order == 1225
    assert basis.size <= 136
    counts = representation_counts(basis.group, basis.elements, DIFF)
    assert counts[0] == basis.size
    assert counts[0] >= 16
    for kind in (ADD, DIFF):
        assert check_g_basis(basis, kind, 2).passed


def test_pcp_multi_single_block_matches_lines():
    basis_multi = pcp_multi(parse_group_spec("Z7"), 3)
    basis_lines = pcp_lines(7, 1, 1, 3)
    assert basis_multi.elements == basis_lines.elements
    assert basis_multi.g_claimed == 2  # (k-1)(k-2) for one block


def test_pcp_multi_bad_k():
    with pytest.raises(ValueError):
        pcp_multi(parse_group_spec("Z5xZ7"), 2)
    with pytest.raises(ValueError):
        pcp_multi(parse_group_spec("Z5xZ7"), 5)  # k > 5^1 - 1


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------


def test_quotient_compose_trivial_subgroup():
    g = parse_group_spec("Z6")
    q = quotient_by_subgroup(g, [])
    inner = BasisSet(g, frozenset({g.identity}), DIFF, 1, {})
    outer_elems = frozenset(q.project(a) for a in g.elements())
    outer = BasisSet(q.quotient, outer_elems, DIFF, 1, {})
    composed = quotient_compose(inner, outer, q)
    assert composed.size == 6
    assert check_g_basis(composed, DIFF, 1).passed


def test_quotient_compose_z4():
    g = parse_group_spec("Z4")
    q = quotient_by_subgroup(g, [(2,)])
    inner = BasisSet(g, frozenset({(0,), (2,)}), DIFF, 1, {})
    outer = BasisSet(q.quotient, frozenset({(0,), (1,)}), DIFF, 1, {})
    composed = quotient_compose(inner, outer, q)
    assert composed.size <= 4
    assert composed.g_claimed == 1
    assert check_g_basis(composed, DIFF, 1).passed


def test_quotient_compose_z9_multiplicities():
    g = parse_group_spec("Z9")
    q = quotient_by_subgroup(g, [(3,)])
    inner = BasisSet(g, frozenset({(0,), (3,), (6,)}), DIFF, 1, {})
    outer = BasisSet(q.quotient, frozenset(q.quotient.elements()), DIFF, 2, {})
    composed = quotient_compose(inner, outer, q)
    cert = check_g_basis(composed, DIFF, 2)
    assert cert.passed
    assert composed.g_claimed == 2


def test_quotient_compose_kind_mismatch():
    g = parse_group_spec("Z4")
    q = quotient_by_subgroup(g, [(2,)])
    inner = BasisSet(g, frozenset({(0,), (2,)}), ADD, 1, {})
    outer = BasisSet(q.quotient, frozenset({(0,), (1,)}), DIFF, 1, {})
    with pytest.raises(ValueError):
        quotient_compose(inner, outer, q)


def test_product_compose_examples():
    z2 = parse_group_spec("Z2")
    z3 = parse_group_spec("Z3")
    full2 = BasisSet(z2, frozenset(z2.elements()), DIFF, 2, {})
    full3 = BasisSet(z3, frozenset(z3.elements()), DIFF, 3, {})
    prod = product_compose(full2, full3)
    assert prod.group.moduli == (2, 3)
    assert prod.size == 6
    counts = representation_counts(prod.group, prod.elements, DIFF)
    assert all(c == 6 for c in counts)

    zero = BasisSet(z2, frozenset({(0,)}), DIFF, None, {})
    some3 = BasisSet(z3, frozenset({(0,), (1,)}), DIFF, None, {})
    lifted = product_compose(zero, some3)
    assert lifted.elements == {(0, 0), (0, 1)}


def test_product_compose_pcp_twice():
    b = pcp_lines(5, 1, 1, 2)
    prod = product_compose(b, b)
    assert prod.group.order == 625
    assert prod.size <= 64
    assert prod.g_claimed == 4
    assert check_g_basis(prod, DIFF, 4).passed
    assert check_g_basis(prod, ADD, 4).passed


# ---------------------------------------------------------------------------
# even-power recursions
# ---------------------------------------------------------------------------


def test_recursion_base_case_delegates():
    rec = even_power_recursion(1, 2, "Z2_2s_n")
    base = teichmuller_rds_basis(2, complete=True)
    assert rec.elements == base.elements


def test_recursion_small_flagged_instances():
    b = even_power_recursion(2, 1, "Z2s_2n")
    assert b.group.moduli == (4, 4)
    assert check_g_basis(b, DIFF, 1).passed
    b = even_power_recursion(3, 1, "Z2s_2n")
    assert b.group.moduli == (8, 8)
    assert not b.provenance["bound_asserted"]
    assert check_g_basis(b, DIFF, 1).passed
    b = even_power_recursion(2, 1, "Z2_2s_n")
    assert b.group.moduli == (16,)
    assert check_g_basis(b, DIFF, 1).passed


def test_recursion_deeper_chains():
    b = even_power_recursion(4, 1, "Z2s_2n")  # Z_16^2 via Z_4^2 twice
    assert b.group.moduli == (16, 16)
    assert check_g_basis(b, DIFF, 1).passed
    b = even_power_recursion(3, 2, "Z2_2s_n")  # Z_64^2
    assert b.group.moduli == (64, 64)
    assert check_g_basis(b, DIFF, 1).passed


def test_recursion_cap():
    with pytest.raises(CapExceededError):
        even_power_recursion(6, 4, "Z2_2s_n", cap=2**16)
    with pytest.raises(ValueError):
        even_power_recursion(1, 1, "Z2s_2n")
    with pytest.raises(ValueError):
        even_power_recursion(2, 2, "nope")


# ---------------------------------------------------------------------------
# greedy and exhaustive
# ---------------------------------------------------------------------------


def test_greedy_z2_squared_minimum():
    basis = greedy_basis(parse_group_spec("Z2^2"), 1, DIFF)
    assert basis.size == 3
    assert check_g_basis(basis, DIFF, 1).passed


def test_greedy_trivial_group():
    basis = greedy_basis(GroupSpec(()), 1, ADD)
    assert basis.elements == {()}


def test_greedy_z7():
    basis = greedy_basis(parse_group_spec("Z7"), 1, DIFF)
    assert basis.size >= 3
    assert check_g_basis(basis, DIFF, 1).passed


def test_greedy_unattainable():
    with pytest.raises(UnattainableTargetError) as exc:
        greedy_basis(parse_group_spec("Z3"), 4, DIFF)
    assert exc.value.max_attainable == 3


def test_greedy_matches_target_multiplicity():
    for g_target in (1, 2, 3):
        basis = greedy_basis(parse_group_spec("Z3^2"), g_target, ADD)
        assert check_g_basis(basis, ADD, g_target).passed


def test_exhaustive_trivial():
    size, witness = exhaustive_min(GroupSpec(()), 1, ADD)
    assert size == 1 and witness.elements == {()}


def test_exhaustive_lex_first_witness():
    size, witness = exhaustive_min(parse_group_spec("Z2^2"), 1, DIFF)
    assert size == 3
    assert witness.sorted_elements() == [(0, 0), (1, 0), (0, 1)]


def test_exhaustive_branch_and_bound_path():
    # |G| = 18 > 16 forces the DFS path; check against a direct subset scan
    g = parse_group_spec("Z18")
    size, witness = exhaustive_min(g, 1, DIFF)
    assert check_g_basis(witness, DIFF, 1).passed
    assert size == witness.size

    def brute_min():
        elems = list(range(18))
        for k in range(1, 19):
            for comb in itertools.combinations(elems, k):
                covered = {(a - b) % 18 for a in comb for b in comb}
                if len(covered) == 18:
                    return k

    assert size == brute_min()


def test_exhaustive_cap():
    with pytest.raises(CapExceededError):
        exhaustive_min(parse_group_spec("Z64"), 1, DIFF)
    with pytest.raises(UnattainableTargetError):
        exhaustive_min(parse_group_spec("Z3"), 5, ADD)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def test_basis_json_round_trip():
    basis = pcp_lines(5, 1, 1, 2)
    doc = basis.to_json_dict()
    text = json.dumps(doc)
    back = BasisSet.from_json_dict(json.loads(text))
    assert back.group.moduli == basis.group.moduli
    assert back.elements == basis.elements
    assert back.kind == basis.kind
    assert back.g_claimed == basis.g_claimed


def test_basis_rejects_foreign_elements():
    with pytest.raises(ValueError):
        BasisSet(parse_group_spec("Z2"), frozenset({(5,)}))
