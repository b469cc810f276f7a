"""Explicit constructions of g-additive and g-difference bases.

The atoms (parabola sets, Teichmuller relative difference sets, line unions
over one or several Galois rings, the star-product set) come with exact
guarantees on where they cover; the combinators (quotient and product
composition, the even-power recursions) assemble them into bases of larger
groups.  Constructions never self-certify: every guarantee flag here is
meant to be confirmed by :mod:`basisforge.verify`, which is the oracle.

Greedy search and exhaustive minimization close the gaps that the closed
constructions leave (small complement subgroups, and exact minima for tiny
groups).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .bounds import lower_bound
from .caps import CapExceededError, check_cap
from .galois_ring import (
    GaloisRing,
    RingElement,
    TeichmullerSystem,
    construct_ring,
    teichmuller,
)
from .groups import (
    GroupElement,
    GroupSpec,
    QuotientData,
    add,
    black_box_decompose,
    element_index,
    index_element,
    sub,
)

ADDITIVE = "additive"
DIFFERENCE = "difference"
BOTH = "both"


class UnattainableTargetError(ValueError):
    """The requested multiplicity cannot be met even by the full group."""

    def __init__(self, target_g: int, max_attainable: int):
        super().__init__(
            f"target g={target_g} is unattainable; the maximum attainable minimum "
            f"count is {max_attainable} (the full group)"
        )
        self.target_g = target_g
        self.max_attainable = max_attainable


@dataclass(frozen=True)
class BasisSet:
    """A candidate set in a group, with its construction provenance.

    ``group`` is a GroupSpec, or a black-box model for sets living in a
    group given only by its operation.  ``kind``/``g_claimed`` record what
    the construction promises ("both" when the set is symmetric and the
    additive and difference guarantees coincide); they are claims, not
    certificates.
    """

    group: object
    elements: frozenset
    kind: str | None = None
    g_claimed: int | None = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.group, GroupSpec):
            for e in self.elements:
                if not self.group.contains(e):
                    raise ValueError(f"element {e!r} is not in {self.group}")

    @property
    def size(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list[GroupElement]:
        if isinstance(self.group, GroupSpec):
            return sorted(self.elements, key=lambda e: element_index(self.group, e))
        return sorted(self.elements)

    def to_json_dict(self) -> dict:
        if not isinstance(self.group, GroupSpec):
            raise ValueError("only GroupSpec-based basis sets serialize to JSON")
        return {
            "group": list(self.group.moduli),
            "kind": self.kind,
            "g_claimed": self.g_claimed,
            "provenance": self.provenance,
            "elements": [list(e) for e in self.sorted_elements()],
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "BasisSet":
        group = GroupSpec(tuple(doc["group"]))
        return BasisSet(
            group,
            frozenset(tuple(e) for e in doc["elements"]),
            doc.get("kind"),
            doc.get("g_claimed"),
            doc.get("provenance") or {},
        )


def _merge_kinds(k1: str | None, k2: str | None) -> str | None:
    if k1 is None or k2 is None:
        return None
    s1 = {ADDITIVE, DIFFERENCE} if k1 == BOTH else {k1}
    s2 = {ADDITIVE, DIFFERENCE} if k2 == BOTH else {k2}
    common = s1 & s2
    if not common:
        raise ValueError(f"kind mismatch: cannot compose {k1} with {k2}")
    if common == {ADDITIVE, DIFFERENCE}:
        return BOTH
    return common.pop()


def _merge_g(g1: int | None, g2: int | None) -> int | None:
    if g1 is None or g2 is None:
        return None
    return g1 * g2


# ---------------------------------------------------------------------------
# atoms over Galois rings
# ---------------------------------------------------------------------------


def _concat(x: RingElement, y: RingElement) -> GroupElement:
    return tuple(x) + tuple(y)


def parabola_basis_odd(p: int, s: int, n: int, complete: bool = True, cap: int | None = None) -> BasisSet:
    """The parabola {(x, x^2)} over GR(p^s, n), in Z_{p^s}^{2n}, p odd.

    The parabola alone hits every (a, b) with a a unit exactly once.  With
    ``complete`` the leftover subgroup pR x R is covered by the product of
    two greedy 1-difference bases, giving a full 1-difference basis.
    """
    if p == 2:
        raise ValueError("the parabola construction needs an odd prime")
    R = construct_ring(p, s, n)
    group = GroupSpec((R.q,) * (2 * n))
    check_cap("parabola construction", group.order, cap)
    elems = {_concat(x, R.mul(x, x)) for x in R.elements()}
    prov = {"family": "parabola", "p": p, "s": s, "n": n, "complete": complete}
    if not complete:
        return BasisSet(group, frozenset(elems), DIFFERENCE, None, prov)

    outer_cover = greedy_basis(GroupSpec((R.q,) * n), 1, DIFFERENCE, cap=cap)
    if s == 1:
        inner_embedded = [(0,) * n]
    else:
        inner_cover = greedy_basis(GroupSpec((p ** (s - 1),) * n), 1, DIFFERENCE, cap=cap)
        inner_embedded = [tuple((p * c) % R.q for c in e) for e in inner_cover.elements]
    for d1 in inner_embedded:
        for d2 in outer_cover.elements:
            elems.add(tuple(d1) + tuple(d2))
    return BasisSet(group, frozenset(elems), DIFFERENCE, 1, prov)


def teichmuller_rds_basis(n: int, complete: bool = True, cap: int | None = None) -> BasisSet:
    """Teichmuller system of GR(4, n) in Z_4^n: a relative difference set.

    Nonzero differences hit Z_4^n minus the doubled subgroup exactly once.
    With ``complete`` the forbidden subgroup 2 Z_4^n (a copy of Z_2^n) is
    covered by an embedded greedy 1-difference basis.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    group = GroupSpec((4,) * n)
    check_cap("Teichmuller construction", group.order, cap)
    R = construct_ring(2, 2, n)
    system = teichmuller(R)
    elems = {tuple(t) for t in system.elements}
    prov = {"family": "t4rds", "n": n, "complete": complete}
    if not complete:
        return BasisSet(group, frozenset(elems), DIFFERENCE, None, prov)
    cover = greedy_basis(GroupSpec((2,) * n), 1, DIFFERENCE, cap=cap)
    for e in cover.elements:
        elems.add(tuple((2 * c) % 4 for c in e))
    return BasisSet(group, frozenset(elems), DIFFERENCE, 1, prov)


class StarGroupModel:
    """(R x R, *) over R = GR(4, n): (x1,y1)*(x2,y2) = (x1+x2, y1+y2+x1*x2).

    An abelian group of order 16^n with identity (0, 0); the inverse of
    (x, y) is (-x, x^2 - y).  Satisfies the black-box group surface.
    """

    def __init__(self, n: int):
        self.ring = construct_ring(2, 2, n)
        self.n = n
        self.order = self.ring.size**2
        self.identity = (self.ring.zero, self.ring.zero)

    def op(self, a, b):
        (x1, y1), (x2, y2) = a, b
        R = self.ring
        return (R.add(x1, x2), R.add(R.add(y1, y2), R.mul(x1, x2)))

    def inverse(self, a):
        x, y = a
        R = self.ring
        return (R.neg(x), R.sub(R.mul(x, x), y))

    def elements(self) -> Iterator:
        for x in self.ring.elements():
            for y in self.ring.elements():
                yield (x, y)


def star_basis(n: int, cap: int | None = None) -> tuple[StarGroupModel, BasisSet]:
    """A 1-difference basis of the star-product group over GR(4, n).

    The parabola {(x, x^2)} covers (units) x R exactly once under the star
    difference; the complement 2R x R is covered by T x W with T a greedy
    1-difference basis of (2R, +) and W a complete Teichmuller basis of
    (R, +).
    """
    model = StarGroupModel(n)
    check_cap("star construction", model.order, cap)
    R = model.ring
    elems = {(x, R.mul(x, x)) for x in R.elements()}
    parabola_size = len(elems)

    t_cover = greedy_basis(GroupSpec((2,) * n), 1, DIFFERENCE, cap=cap)
    T = [tuple((2 * c) % 4 for c in e) for e in t_cover.sorted_elements()]
    w_cover = teichmuller_rds_basis(n, complete=True, cap=cap)
    W = [tuple(e) for e in w_cover.sorted_elements()]
    for t in T:
        for w in W:
            elems.add((t, w))
    prov = {
        "family": "star8",
        "n": n,
        "parabola_size": parabola_size,
        "t_size": len(T),
        "w_size": len(W),
    }
    return model, BasisSet(model, frozenset(elems), DIFFERENCE, 1, prov)


def star_basis_standard(n: int, cap: int | None = None) -> BasisSet:
    """star_basis(n) rewritten in standard Z_8^n x Z_2^n coordinates."""
    model, basis = star_basis(n, cap=cap)
    spec, to_coords, _ = black_box_decompose(model, cap=cap)
    expected = GroupSpec((8,) * n + (2,) * n)
    if spec.moduli != expected.moduli:
        raise RuntimeError(f"star group decomposed to {spec}, expected {expected}")
    elems = frozenset(to_coords[e] for e in basis.elements)
    prov = dict(basis.provenance)
    prov["coordinates"] = "standard"
    return BasisSet(spec, elems, DIFFERENCE, 1, prov)


def _alphas(system: TeichmullerSystem, k: int) -> list[RingElement]:
    nonzero = system.nonzero()
    if k <= len(nonzero):
        return list(nonzero[:k])
    if k == len(nonzero) + 1:
        return list(nonzero) + [system.ring.zero]
    raise ValueError(f"cannot pick {k} members from a Teichmuller system of {len(nonzero) + 1}")


def pcp_lines(p: int, s: int, n: int, k: int, cap: int | None = None) -> BasisSet:
    """Union of k punctured lines {(x, alpha x)} over GR(p^s, n).

    With slopes from the Teichmuller system (pairwise unit differences) the
    union is simultaneously a k(k-1)-additive and k(k-1)-difference basis of
    Z_{p^s}^{2n}, and it is symmetric (S = -S).
    """
    lo, hi = 2, min(p**n, p ** (s * n) // 2)
    if not lo <= k <= hi:
        raise ValueError(
            f"k={k} out of range [2, min(p^n, p^(sn)/2)] = [2, {hi}] for (p,s,n)=({p},{s},{n})"
        )
    R = construct_ring(p, s, n)
    group = GroupSpec((R.q,) * (2 * n))
    check_cap("line-union construction", group.order, cap)
    system = teichmuller(R)
    alphas = _alphas(system, k)
    elems = set()
    for a in alphas:
        for x in R.elements():
            if x == R.zero:
                continue
            elems.add(_concat(x, R.mul(a, x)))
    prov = {"family": "pcp", "p": p, "s": s, "n": n, "k": k}
    return BasisSet(group, frozenset(elems), BOTH, k * (k - 1), prov)


def _prime_power(m: int) -> tuple[int, int]:
    p = None
    for d in range(2, m + 1):
        if m % d == 0:
            p = d
            break
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise ValueError("modulus is not a prime power")
    return p, e


def _block_structure(g: GroupSpec) -> list[tuple[int, int, int]]:
    """Contiguous equal-modulus blocks (p_i, s_i, n_i); prime powers must be distinct."""
    blocks = []
    for m, run in itertools.groupby(g.moduli):
        p, s = _prime_power(m)
        blocks.append((p, s, len(list(run))))
    if len({p**s for p, s, _ in blocks}) != len(blocks):
        raise ValueError("blocks must have distinct prime-power moduli")
    return blocks


def pcp_multi(G: GroupSpec, k: int, cap: int | None = None) -> BasisSet:
    """Line unions across several Galois rings, one block per prime power.

    For G a product of m distinct prime-power blocks and m+2 <= k <=
    min_i (p_i^{n_i} - 1), builds a symmetric subset of G x G that is a
    (k-m)(k-m-1)-additive and (k-m)(k-m-1)-difference basis.  For each
    proper subset I of the blocks, k slope vectors cover the elements
    vanishing exactly on I.
    """
    blocks = _block_structure(G)
    m = len(blocks)
    if m == 0:
        raise ValueError("group must have at least one block")
    hi = min(p**ni - 1 for p, _, ni in blocks)
    lo = m + 2
    if not lo <= k <= hi:
        raise ValueError(f"k={k} out of range [{lo}, {hi}] for {m} blocks")
    group2 = GroupSpec(G.moduli + G.moduli)
    check_cap("multi-block line construction", group2.order, cap)

    rings = [construct_ring(p, s, ni) for p, s, ni in blocks]
    systems = [teichmuller(R) for R in rings]
    alphas = [_alphas(sys_i, k) for sys_i in systems]

    elems = set()
    for live in itertools.chain.from_iterable(
        itertools.combinations(range(m), v) for v in range(1, m + 1)
    ):
        # "live" blocks run over nonzero ring elements; the rest are pinned to 0
        live_set = set(live)
        nonzero_lists = []
        for i in live:
            Ri = rings[i]
            nonzero_lists.append([x for x in Ri.elements() if x != Ri.zero])
        for j in range(k):
            for choice in itertools.product(*nonzero_lists):
                a_parts = []
                b_parts = []
                for i in range(m):
                    if i in live_set:
                        x = choice[live.index(i)]
                        a_parts.append(x)
                        b_parts.append(rings[i].mul(alphas[i][j], x))
                    else:
                        a_parts.append(rings[i].zero)
                        b_parts.append(rings[i].zero)
                flat_a = tuple(itertools.chain.from_iterable(a_parts))
                flat_b = tuple(itertools.chain.from_iterable(b_parts))
                elems.add(flat_a + flat_b)
    g_val = (k - m) * (k - m - 1)
    prov = {"family": "pcpmulti", "blocks": blocks, "k": k}
    return BasisSet(group2, frozenset(elems), BOTH, g_val, prov)


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------


def quotient_compose(inner: BasisSet, outer: BasisSet, q: QuotientData) -> BasisSet:
    """{a + lift(b)}: compose a basis of the subgroup with one of the quotient.

    ``inner`` lives in the ambient group (its elements inside the subgroup);
    ``outer`` lives in q.quotient.  The result inherits the product of the
    two guarantees.
    """
    if not isinstance(inner.group, GroupSpec) or inner.group.moduli != q.group.moduli:
        raise ValueError("inner basis must live in the ambient group of the quotient")
    if not isinstance(outer.group, GroupSpec) or outer.group.moduli != q.quotient.moduli:
        raise ValueError(
            f"outer basis group {outer.group} does not match quotient {q.quotient}"
        )
    kind = _merge_kinds(inner.kind, outer.kind)
    lifted = [q.lift(b) for b in outer.sorted_elements()]
    elems = {add(q.group, a, lb) for a in inner.elements for lb in lifted}
    prov = {
        "family": "quotient_compose",
        "inner": inner.provenance,
        "outer": outer.provenance,
        "subgroup_order": q.subgroup_order,
    }
    return BasisSet(q.group, frozenset(elems), kind, _merge_g(inner.g_claimed, outer.g_claimed), prov)


def product_compose(b1: BasisSet, b2: BasisSet) -> BasisSet:
    """Cartesian product of two bases, in the concatenated group."""
    if not isinstance(b1.group, GroupSpec) or not isinstance(b2.group, GroupSpec):
        raise ValueError("product composition needs GroupSpec-based bases")
    kind = _merge_kinds(b1.kind, b2.kind)
    group = GroupSpec(b1.group.moduli + b2.group.moduli)
    elems = {tuple(a) + tuple(b) for a in b1.elements for b in b2.elements}
    prov = {"family": "product_compose", "factors": [b1.provenance, b2.provenance]}
    return BasisSet(group, frozenset(elems), kind, _merge_g(b1.g_claimed, b2.g_claimed), prov)


# ---------------------------------------------------------------------------
# even-power recursions
# ---------------------------------------------------------------------------

VARIANT_SQUARE_EXPONENT = "Z2_2s_n"  # targets Z_{2^{2s}}^n
VARIANT_DOUBLED_RANK = "Z2s_2n"  # targets Z_{2^s}^{2n}


def _embed_scaled(basis: BasisSet, ambient: GroupSpec, scales: tuple[int, ...], pad: int = 0) -> BasisSet:
    """Map a basis into ``ambient`` by per-coordinate scaling plus zero padding."""
    elems = set()
    for e in basis.elements:
        coords = tuple((c * sc) % m for c, sc, m in zip(e, scales, ambient.moduli))
        coords = coords + (0,) * pad
        elems.add(coords)
    return BasisSet(ambient, frozenset(elems), basis.kind, basis.g_claimed, basis.provenance)


def even_power_recursion(s: int, n: int, variant: str, cap: int | None = None) -> BasisSet:
    """Materialize the inductive 1-difference bases for 2-power groups.

    variant Z2_2s_n: target Z_{2^{2s}}^n, peeling one Z_4^n quotient per
    induction step down to the Teichmuller base case.  variant Z2s_2n:
    target Z_{2^s}^{2n}, peeling Z_4^{2n} quotients in steps of two, with
    the star-product basis of Z_8^n x Z_2^n closing the odd-exponent case.

    The recorded size bound is only asserted under the original
    preconditions (n >= 4 for Z2_2s_n, n >= 9 for Z2s_2n); smaller n still
    materializes a valid basis, flagged ``bound_asserted: False``.
    """
    if variant == VARIANT_SQUARE_EXPONENT:
        if s < 1 or n < 1:
            raise ValueError("need s >= 1 and n >= 1")
        target = GroupSpec((2 ** (2 * s),) * n)
        check_cap("even-power recursion", target.order, cap)
        bound_expr = f"2^({s}*{n}) + (2^{s + 1} - 1) * 2^(({s} - 1/2)*{n})"
        asserted = s == 1 or n >= 4  # the base case holds for every n
        if s == 1:
            basis = teichmuller_rds_basis(n, complete=True, cap=cap)
        else:
            q = QuotientData(target, [_unit_vector(target, i, 4) for i in range(n)], cap=cap)
            inner_plain = even_power_recursion(s - 1, n, variant, cap=cap)
            inner = _embed_scaled(inner_plain, target, (4,) * n)
            outer = teichmuller_rds_basis(n, complete=True, cap=cap)
            if q.quotient.moduli != outer.group.moduli:
                raise RuntimeError(f"quotient {q.quotient} does not match {outer.group}")
            basis = quotient_compose(inner, outer, q)
    elif variant == VARIANT_DOUBLED_RANK:
        if s < 2 or n < 1:
            raise ValueError("need s >= 2 and n >= 1")
        target = GroupSpec((2**s,) * (2 * n))
        check_cap("even-power recursion", target.order, cap)
        bound_expr = f"2^({s}*{n}) + (2^{s} - 1) * 2^(({s} - 1/2)*{n})"
        asserted = s == 2 or n >= 9  # the base case holds for every n
        if s == 2:
            basis = teichmuller_rds_basis(2 * n, complete=True, cap=cap)
        elif s == 3:
            q = QuotientData(target, [_unit_vector(target, i, 2) for i in range(n)], cap=cap)
            inner_plain = teichmuller_rds_basis(n, complete=True, cap=cap)
            elems = set()
            for e in inner_plain.elements:
                coords = tuple((2 * c) % 8 for c in e) + (0,) * n
                elems.add(coords)
            inner = BasisSet(target, frozenset(elems), DIFFERENCE, 1, inner_plain.provenance)
            outer = star_basis_standard(n, cap=cap)
            if q.quotient.moduli != outer.group.moduli:
                raise RuntimeError(f"quotient {q.quotient} does not match {outer.group}")
            basis = quotient_compose(inner, outer, q)
        else:
            q = QuotientData(target, [_unit_vector(target, i, 4) for i in range(2 * n)], cap=cap)
            inner_plain = even_power_recursion(s - 2, n, variant, cap=cap)
            inner = _embed_scaled(inner_plain, target, (4,) * (2 * n))
            outer = teichmuller_rds_basis(2 * n, complete=True, cap=cap)
            if q.quotient.moduli != outer.group.moduli:
                raise RuntimeError(f"quotient {q.quotient} does not match {outer.group}")
            basis = quotient_compose(inner, outer, q)
    else:
        raise ValueError(f"unknown variant {variant!r}")

    prov = {
        "family": "recursion",
        "variant": variant,
        "s": s,
        "n": n,
        "size_bound": bound_expr,
        "bound_asserted": asserted,
        "chain": basis.provenance,
    }
    return BasisSet(basis.group, basis.elements, DIFFERENCE, 1, prov)


def _unit_vector(g: GroupSpec, i: int, value: int) -> GroupElement:
    coords = [0] * g.rank
    coords[i] = value % g.moduli[i]
    return tuple(coords)


# ---------------------------------------------------------------------------
# greedy search and exhaustive minimization
# ---------------------------------------------------------------------------


def greedy_basis(group: GroupSpec, target_g: int, kind: str, cap: int | None = None) -> BasisSet:
    """Greedy covering: grow from {0}, each step adding the element that most
    increases sum_x min(r(x), target_g), ties broken by smallest index.

    Deterministic; stops as soon as min_x r(x) >= target_g.  Not guaranteed
    minimal, but always valid, and validity is the verifier's to confirm.
    """
    if kind not in (ADDITIVE, DIFFERENCE):
        raise ValueError(f"kind must be additive or difference, got {kind!r}")
    if target_g < 1:
        raise ValueError("target_g must be >= 1")
    N = group.order
    check_cap("greedy search", N, cap)
    if target_g > N:
        raise UnattainableTargetError(target_g, N)

    elems = list(group.elements())
    pos = {e: i for i, e in enumerate(elems)}
    counts = [0] * N
    counts[0] = 1  # pairs from {0} cover the identity once, either kind
    chosen = [elems[0]]
    in_set = [False] * N
    in_set[0] = True
    g = target_g

    def delta_for(c: GroupElement) -> dict[int, int]:
        d: dict[int, int] = {}
        if kind == DIFFERENCE:
            for a in chosen:
                i1 = pos[sub(group, c, a)]
                i2 = pos[sub(group, a, c)]
                d[i1] = d.get(i1, 0) + 1
                d[i2] = d.get(i2, 0) + 1
            d[0] = d.get(0, 0) + 1
        else:
            for a in chosen:
                i1 = pos[add(group, c, a)]
                d[i1] = d.get(i1, 0) + 2
            i2 = pos[add(group, c, c)]
            d[i2] = d.get(i2, 0) + 1
        return d

    while min(counts) < g:
        best_gain = -1
        best_idx = -1
        best_delta = None
        for ci in range(N):
            if in_set[ci]:
                continue
            d = delta_for(elems[ci])
            gain = 0
            for idx, extra in d.items():
                gain += min(counts[idx] + extra, g) - min(counts[idx], g)
            if gain > best_gain:
                best_gain, best_idx, best_delta = gain, ci, d
        if best_idx < 0:
            raise RuntimeError("greedy search exhausted the group (unreachable)")
        if best_gain <= 0:
            # no single element helps; take the smallest unused one anyway so
            # the search always terminates (at worst with the full group)
            best_idx = next(ci for ci in range(N) if not in_set[ci])
            best_delta = delta_for(elems[best_idx])
        for idx, extra in best_delta.items():
            counts[idx] += extra
        chosen.append(elems[best_idx])
        in_set[best_idx] = True

    prov = {"family": "greedy", "group": list(group.moduli), "g": target_g, "kind": kind}
    return BasisSet(group, frozenset(chosen), kind, target_g, prov)


SUBSET_ENUM_LIMIT = 16
BRANCH_AND_BOUND_LIMIT = 32


def exhaustive_min(group: GroupSpec, target_g: int, kind: str) -> tuple[int, BasisSet]:
    """Exact minimum basis size with the lexicographically first witness.

    Subset enumeration up to |G| = 16; branch-and-bound with the counting
    lower bound and a pairing-budget prune up to |G| = 32.
    """
    if kind not in (ADDITIVE, DIFFERENCE):
        raise ValueError(f"kind must be additive or difference, got {kind!r}")
    if target_g < 1:
        raise ValueError("target_g must be >= 1")
    N = group.order
    if N > BRANCH_AND_BOUND_LIMIT:
        raise CapExceededError("exhaustive minimization", N, BRANCH_AND_BOUND_LIMIT)
    if target_g > N:
        raise UnattainableTargetError(target_g, N)

    elems = list(group.elements())
    pos = {e: i for i, e in enumerate(elems)}
    if kind == DIFFERENCE:
        table = [[pos[sub(group, a, b)] for b in elems] for a in elems]
    else:
        table = [[pos[add(group, a, b)] for b in elems] for a in elems]

    g = target_g
    start_size = max(1, lower_bound(group, g, kind))

    def found(indices: tuple[int, ...]) -> BasisSet:
        witness = frozenset(elems[i] for i in indices)
        prov = {"family": "exhaustive_min", "group": list(group.moduli), "g": g, "kind": kind}
        return BasisSet(group, witness, kind, g, prov)

    if N <= SUBSET_ENUM_LIMIT:
        for k in range(start_size, N + 1):
            for comb in itertools.combinations(range(N), k):
                counts = [0] * N
                for i in comb:
                    row = table[i]
                    for j in comb:
                        counts[row[j]] += 1
                if min(counts) >= g:
                    return k, found(comb)
        raise RuntimeError("full group is always a basis (unreachable)")

    for k in range(start_size, N + 1):
        counts = [0] * N
        cur: list[int] = []

        def dfs(start: int) -> tuple[int, ...] | None:
            depth = len(cur)
            if depth == k:
                return tuple(cur) if min(counts) >= g else None
            remaining = k - depth
            if min(counts) + 2 * remaining < g:
                return None
            for c in range(start, N - remaining + 1):
                row = table[c]
                touched = []
                for i in cur:
                    a = table[i][c]
                    b = row[i]
                    counts[a] += 1
                    counts[b] += 1
                    touched.append(a)
                    touched.append(b)
                self_idx = row[c]
                counts[self_idx] += 1
                touched.append(self_idx)
                cur.append(c)
                hit = dfs(c + 1)
                if hit is not None:
                    return hit
                cur.pop()
                for t in touched:
                    counts[t] -= 1
            return None

        result = dfs(0)
        if result is not None:
            return k, found(result)
    raise RuntimeError("full group is always a basis (unreachable)")
