"""Symbolic decomposition plans for 1-difference bases of powers G^n.

A plan is a tree whose leaves are atomic constructions (even-power
recursions, the star-product basis, parabola bases, greedy covers) and whose
internal nodes are quotient or product compositions.  Building a plan only
manipulates group shapes; materializing one runs the constructions and
composes concrete bases, which only succeeds when every intermediate group
fits the enumeration cap.

The two planners mirror the two admissibility regimes for the 2-part:

* ``weakly_admissible``: target G^{2n}; needs the 2-part of G to satisfy the
  weak block inequality.
* ``admissible``: target G^n; needs the 2-part to satisfy the floored block
  inequality and have square order, and the odd part to be a square.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .admissibility import ADMISSIBLE, WEAKLY_ONLY, classify, shape_of_2group
from .caps import check_cap
from .constructions import (
    DIFFERENCE,
    VARIANT_DOUBLED_RANK,
    VARIANT_SQUARE_EXPONENT,
    BasisSet,
    even_power_recursion,
    greedy_basis,
    parabola_basis_odd,
    product_compose,
    quotient_compose,
    star_basis_standard,
)
from .groups import GroupSpec, QuotientData, primary_decomposition

WEAKLY_THEOREM = "weakly_admissible"
ADMISSIBLE_THEOREM = "admissible"


class HypothesisError(ValueError):
    """The group does not satisfy the planner's admissibility hypothesis."""


@dataclass
class PlanNode:
    group: GroupSpec
    op: str  # "atomic" | "quotient" | "product"
    construction: str | None = None
    params: dict = field(default_factory=dict)
    scales: tuple[int, ...] | None = None  # quotient nodes: subgroup scale per coordinate
    inner: "PlanNode | None" = None
    outer: "PlanNode | None" = None
    factors: list["PlanNode"] = field(default_factory=list)
    size_bound: str | None = None
    bound_asserted: bool = True


@dataclass
class DecompositionPlan:
    theorem: str
    n: int
    source_group: GroupSpec
    target: GroupSpec
    root: PlanNode
    hypothesis: dict = field(default_factory=dict)

    def steps(self) -> list[dict]:
        """The plan as a postorder step list (children before parents)."""
        out: list[dict] = []

        def walk(node: PlanNode) -> int:
            child_ids = {}
            if node.op == "quotient":
                child_ids["inner"] = walk(node.inner)
                child_ids["outer"] = walk(node.outer)
            elif node.op == "product":
                child_ids["factors"] = [walk(f) for f in node.factors]
            step = {
                "id": len(out),
                "op": node.op,
                "group": list(node.group.moduli),
                "size_bound": node.size_bound,
                "bound_asserted": node.bound_asserted,
            }
            if node.op == "atomic":
                step["construction"] = node.construction
                step["params"] = node.params
            elif node.op == "quotient":
                step["subgroup_scales"] = list(node.scales)
                step["inner"] = child_ids["inner"]
                step["outer"] = child_ids["outer"]
            else:
                step["factors"] = child_ids["factors"]
            out.append(step)
            return step["id"]

        walk(self.root)
        return out

    def to_json_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "n": self.n,
            "source_group": list(self.source_group.moduli),
            "target": list(self.target.moduli),
            "hypothesis": self.hypothesis,
            "steps": self.steps(),
        }


# ---------------------------------------------------------------------------
# node builders
# ---------------------------------------------------------------------------


def _trivial_node() -> PlanNode:
    return PlanNode(GroupSpec(()), "atomic", "trivial", {}, size_bound="1")


def _star_node(m: int) -> PlanNode:
    group = GroupSpec((8,) * m + (2,) * m)
    return PlanNode(
        group,
        "atomic",
        "star8",
        {"n": m},
        size_bound=f"4^{m} + 3*2^(3*{m}/2) + 9*2^{m}",
        bound_asserted=True,
    )


def _parabola_node(p: int, s: int, m: int) -> PlanNode:
    group = GroupSpec((p**s,) * (2 * m))
    return PlanNode(
        group,
        "atomic",
        "parabola",
        {"p": p, "s": s, "n": m},
        size_bound=f"{p}^({s}*{m}) + 9*{p}^(({s}-1/2)*{m})",
        bound_asserted=True,
    )


def _even_block_node(e: int, m: int) -> PlanNode:
    """Atom covering Z_{2^e}^m for e >= 2 (m even when e is odd)."""
    if e < 2 or m < 1:
        raise ValueError(f"no atomic construction for Z_(2^{e})^{m}")
    if e % 2 == 0:
        s = e // 2
        group = GroupSpec((2**e,) * m)
        return PlanNode(
            group,
            "atomic",
            "recursion",
            {"variant": VARIANT_SQUARE_EXPONENT, "s": s, "n": m},
            size_bound=f"2^({s}*{m}) + (2^{s + 1}-1)*2^(({s}-1/2)*{m})",
            bound_asserted=(s == 1 or m >= 4),
        )
    if m % 2 != 0:
        raise ValueError(f"odd-exponent block Z_(2^{e})^{m} needs even multiplicity")
    half = m // 2
    group = GroupSpec((2**e,) * m)
    return PlanNode(
        group,
        "atomic",
        "recursion",
        {"variant": VARIANT_DOUBLED_RANK, "s": e, "n": half},
        size_bound=f"2^({e}*{half}) + (2^{e}-1)*2^(({e}-1/2)*{half})",
        bound_asserted=(e == 2 or half >= 9),
    )


def _product_node(factors: list[PlanNode]) -> PlanNode:
    live = [f for f in factors if f.group.order > 1]
    if not live:
        return _trivial_node()
    if len(live) == 1:
        return live[0]
    moduli = tuple(m for f in live for m in f.group.moduli)
    bound = " * ".join(f"({f.size_bound})" for f in live)
    return PlanNode(
        GroupSpec(moduli),
        "product",
        factors=live,
        size_bound=bound,
        bound_asserted=all(f.bound_asserted for f in live),
    )


def _quotient_node(layout: list[tuple[int, int, int]], inner: PlanNode, outer: PlanNode) -> PlanNode:
    """Quotient step over the group described by ``layout``.

    layout lists (modulus, scale, count) blocks in coordinate order; the
    subgroup is the product of scale * Z_modulus over all coordinates.
    Collapses to inner/outer when the quotient/subgroup is trivial.
    """
    moduli = []
    scales = []
    for modulus, sc, count in layout:
        if count <= 0:
            continue
        if modulus % sc != 0:
            raise ValueError(f"scale {sc} does not divide modulus {modulus}")
        moduli.extend([modulus] * count)
        scales.extend([sc] * count)
    group = GroupSpec(tuple(moduli))
    if all(sc == 1 for sc in scales):
        if inner.group.moduli != group.moduli:
            raise RuntimeError("trivial quotient: inner plan does not match the group")
        return inner
    if all(sc == m for sc, m in zip(scales, moduli)):
        if outer.group.moduli != group.moduli:
            raise RuntimeError("trivial subgroup: outer plan does not match the group")
        return outer
    sub_moduli = tuple(m // sc for m, sc in zip(moduli, scales) if m // sc > 1)
    if inner.group.moduli != sub_moduli:
        raise RuntimeError(f"inner plan group {inner.group} != subgroup shape {sub_moduli}")
    quot_moduli = tuple(sorted((sc for sc in scales if sc > 1), reverse=True))
    if outer.group.moduli != quot_moduli:
        raise RuntimeError(f"outer plan group {outer.group} != quotient shape {quot_moduli}")
    bound = f"({inner.size_bound}) * ({outer.size_bound})"
    return PlanNode(
        group,
        "quotient",
        scales=tuple(scales),
        inner=inner,
        outer=outer,
        size_bound=bound,
        bound_asserted=inner.bound_asserted and outer.bound_asserted,
    )


# ---------------------------------------------------------------------------
# the two planners for the 2-part
# ---------------------------------------------------------------------------


def _two_part_weakly(mult: dict[int, int], power: int) -> PlanNode:
    """Chain for (2-part)^power under the weak block inequality.

    mult maps each 2-exponent e to its multiplicity in G; every block of the
    power group has multiplicity mult[e] * power.
    """
    m = {e: c * power for e, c in mult.items()}
    big = sorted((e for e in m if e >= 6), reverse=True)
    m1 = m.get(1, 0)
    m2 = m.get(2, 0)
    m3 = m.get(3, 0)
    m4 = m.get(4, 0)
    m5 = m.get(5, 0)
    eights = sum(m[e] for e in big) + m5 + m3

    # outer chain over Z_8^eights x Z_2^{m1}
    inner2 = _star_node(m1) if m1 else _trivial_node()
    outer2 = _even_block_node(3, eights - m1) if eights - m1 > 0 else _trivial_node()
    outer = _quotient_node(
        [(8, 1, m1), (8, 8, eights - m1), (2, 1, m1)],
        _product_node([inner2]),
        outer2,
    )

    # inner product over the scaled-down blocks, in coordinate order
    inner_factors = [_even_block_node(e - 3, m[e]) for e in big]
    if m5:
        inner_factors.append(_even_block_node(2, m5))
    if m4:
        inner_factors.append(_even_block_node(4, m4))
    if m2:
        inner_factors.append(_even_block_node(2, m2))
    inner = _product_node(inner_factors)

    layout = [(2**e, 8, m[e]) for e in big]
    layout += [(32, 8, m5), (16, 1, m4), (8, 8, m3), (4, 1, m2), (2, 2, m1)]
    return _quotient_node(layout, inner, outer)


def _two_part_admissible(mult: dict[int, int], n: int) -> PlanNode:
    """Chain for (2-part)^n under the floored block inequality + square order."""
    big = sorted((e for e in mult if e >= 6 and e % 2 == 0), reverse=True)
    odd_big = sorted((e for e in mult if e >= 5 and e % 2 == 1), reverse=True)
    U = sum(mult[e] for e in big)
    x = U % 2
    e_star = min(big) if big else None
    h1 = mult.get(1, 0) * n
    h2 = mult.get(3, 0) * n
    l1 = mult.get(2, 0) * n
    l2 = mult.get(4, 0) * n
    vsum = sum(mult[e] for e in odd_big) * n
    Mn = (U - x) * n // 2  # floor(U/2) * n
    xn = x * n
    q2n = 2 * Mn + vsum + h2 - h1  # even by the square-order hypothesis

    # third level: Z_8^{2Mn + vsum + h2} x Z_2^{h1} -> star + recursion
    inner3 = _star_node(h1) if h1 else _trivial_node()
    outer3 = _even_block_node(3, q2n) if q2n > 0 else _trivial_node()
    level3 = _quotient_node(
        [(8, 1, h1), (8, 8, 2 * Mn + vsum + h2 - h1), (2, 1, h1)],
        inner3,
        outer3,
    )

    # second level: held-out top block, the 2^6 blocks, Z_16, Z_8, Z_4, Z_2
    inner2_factors = []
    if xn:
        inner2_factors.append(_even_block_node(e_star, xn))
    if Mn:
        inner2_factors.append(_even_block_node(3, 2 * Mn))
    if l2:
        inner2_factors.append(_even_block_node(4, l2))
    if l1:
        inner2_factors.append(_even_block_node(2, l1))
    inner2 = _product_node(inner2_factors)
    layout2 = [(2**e_star if e_star else 4, 1, xn), (64, 8, 2 * Mn), (16, 1, l2)]
    layout2 += [(8, 8, vsum + h2), (4, 1, l1), (2, 2, h1)]
    level2 = _quotient_node(layout2, inner2, level3)

    # first level: scale the big blocks down by 2^6 (odd ones by 2^3)
    inner1_factors = []
    layout1 = []
    blocks = sorted(
        [(e, "even") for e in big] + [(e, "odd") for e in odd_big],
        key=lambda t: -t[0],
    )
    for e, parity in blocks:
        count = mult[e] * n
        if parity == "even":
            keep = count - xn if e == e_star else count
            held = count - keep
            if keep:
                layout1.append((2**e, 64, keep))
                if e > 6:
                    inner1_factors.append(_even_block_node(e - 6, keep))
            if held:
                layout1.append((2**e, 2**e, held))
        else:
            layout1.append((2**e, 8, count))
            inner1_factors.append(_even_block_node(e - 3, count))
    layout1 += [(16, 16, l2), (8, 8, h2), (4, 4, l1), (2, 2, h1)]
    inner1 = _product_node(inner1_factors)
    return _quotient_node(layout1, inner1, level2)


# ---------------------------------------------------------------------------
# public planner
# ---------------------------------------------------------------------------


def plan_decomposition(G: GroupSpec, theorem: str, n: int) -> DecompositionPlan:
    """Plan a 1-difference basis of G^{2n} (weakly_admissible) or G^n (admissible).

    Raises HypothesisError, naming the violated inequality, when the 2-part
    (or, for the admissible regime, square-order / odd-square structure)
    does not qualify.
    """
    if theorem not in (WEAKLY_THEOREM, ADMISSIBLE_THEOREM):
        raise ValueError(f"theorem must be {WEAKLY_THEOREM} or {ADMISSIBLE_THEOREM}")
    if n < 1:
        raise ValueError("n must be >= 1")

    primaries = primary_decomposition(G)
    two_mult = {e: c for p, e, c in primaries if p == 2}
    odd_blocks = [(p, e, c) for p, e, c in primaries if p != 2]
    two_spec = GroupSpec(tuple(2**e for e in sorted(two_mult, reverse=True) for _ in range(two_mult[e])))
    shape = shape_of_2group(two_spec)
    verdict = classify(shape)

    big_even = sum(u for s, u in shape.even_part if s not in (1, 2))
    odd_total = sum(c for _, c in shape.odd_part)
    hypothesis = {
        "two_part": list(two_spec.moduli),
        "verdict": verdict,
        "weak_sum": big_even + odd_total,
        "floored_sum": 2 * (big_even // 2) + odd_total,
        "z2_rank": shape.v,
    }

    if theorem == WEAKLY_THEOREM:
        if verdict not in (ADMISSIBLE, WEAKLY_ONLY):
            raise HypothesisError(
                f"2-part {two_spec} is not weakly admissible: "
                f"{big_even} + {odd_total} < {shape.v}"
            )
        power = 2 * n
        two_node = _two_part_weakly(two_mult, power) if two_mult else _trivial_node()
    else:
        if verdict != ADMISSIBLE:
            raise HypothesisError(
                f"2-part {two_spec} is not admissible: "
                f"2*floor({big_even}/2) + {odd_total} = "
                f"{2 * (big_even // 2) + odd_total} < {shape.v}"
            )
        if shape.order_exponent % 2 != 0:
            raise HypothesisError(
                f"2-part {two_spec} has non-square order 2^{shape.order_exponent}"
            )
        bad = [(p, e, c) for p, e, c in odd_blocks if c % 2 != 0]
        if bad:
            raise HypothesisError(
                f"odd part is not a square: block Z_{bad[0][0]}^{bad[0][1]} "
                f"has odd multiplicity {bad[0][2]}"
            )
        power = n
        two_node = _two_part_admissible(two_mult, n) if two_mult else _trivial_node()

    odd_nodes = []
    for p, e, c in odd_blocks:
        total = c * power  # always even here
        odd_nodes.append(_parabola_node(p, e, total // 2))
    root = _product_node([two_node] + odd_nodes)
    return DecompositionPlan(theorem, n, G, root.group, root, hypothesis)


# ---------------------------------------------------------------------------
# materialization
# ---------------------------------------------------------------------------


def materialize_plan(plan: DecompositionPlan, cap: int | None = None) -> BasisSet:
    """Run every step of the plan and return the composed, concrete basis."""
    basis = _materialize_node(plan.root, cap)
    if basis.group.moduli != plan.target.moduli:
        raise RuntimeError(f"materialized group {basis.group} != plan target {plan.target}")
    return basis


def _materialize_node(node: PlanNode, cap: int | None) -> BasisSet:
    check_cap("plan materialization", node.group.order, cap)
    if node.op == "atomic":
        return _materialize_atom(node, cap)
    if node.op == "product":
        mats = [_materialize_node(f, cap) for f in node.factors]
        out = mats[0]
        for b in mats[1:]:
            out = product_compose(out, b)
        return out
    # quotient
    group = node.group
    scales = node.scales
    gens = []
    for i, (sc, m) in enumerate(zip(scales, group.moduli)):
        if sc < m:
            coords = [0] * group.rank
            coords[i] = sc
            gens.append(tuple(coords))
    q = QuotientData(group, gens, cap=cap)
    outer = _materialize_node(node.outer, cap)
    if q.quotient.moduli != outer.group.moduli:
        raise RuntimeError(f"quotient {q.quotient} does not match outer group {outer.group}")
    inner_plain = _materialize_node(node.inner, cap)
    sub_positions = [i for i, (sc, m) in enumerate(zip(scales, group.moduli)) if m // sc > 1]
    if inner_plain.group.moduli != tuple(group.moduli[i] // scales[i] for i in sub_positions):
        raise RuntimeError("inner basis does not match the subgroup shape")
    embedded = set()
    for e in inner_plain.elements:
        coords = [0] * group.rank
        for val, i in zip(e, sub_positions):
            coords[i] = (val * scales[i]) % group.moduli[i]
        embedded.add(tuple(coords))
    inner = BasisSet(group, frozenset(embedded), inner_plain.kind, inner_plain.g_claimed, inner_plain.provenance)
    return quotient_compose(inner, outer, q)


def _materialize_atom(node: PlanNode, cap: int | None) -> BasisSet:
    name = node.construction
    p = node.params
    if name == "trivial":
        return BasisSet(GroupSpec(()), frozenset({()}), DIFFERENCE, 1, {"family": "trivial"})
    if name == "recursion":
        return even_power_recursion(p["s"], p["n"], p["variant"], cap=cap)
    if name == "star8":
        return star_basis_standard(p["n"], cap=cap)
    if name == "parabola":
        return parabola_basis_odd(p["p"], p["s"], p["n"], complete=True, cap=cap)
    if name == "greedy":
        return greedy_basis(GroupSpec(tuple(p["group"])), p["g"], p["kind"], cap=cap)
    raise ValueError(f"unknown atomic construction {name!r}")
