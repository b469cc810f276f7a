"""Counting lower bounds and the closed-form upper-bound catalogue.

All verdicts are exact: integer ceilings/floors come from integer square
roots, never floating point, and bounds containing a radical term c*sqrt(K)
are floored through isqrt(c^2 * K).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .groups import GroupSpec

ADDITIVE = "additive"
DIFFERENCE = "difference"


def _order_of(group_or_order) -> int:
    if isinstance(group_or_order, GroupSpec):
        return group_or_order.order
    return int(group_or_order)


def lower_bound(group_or_order, g: int, kind: str) -> int:
    """Smallest integer consistent with the counting bound for a (kind, g)-basis.

    additive:  |A| >= sqrt(2|G| + 1/4) - 1/2 for g = 1, else sqrt(g |G|);
    difference: |A| >= sqrt(g(|G| - 1) + 1/4) + 1/2.
    """
    if g < 1:
        raise ValueError("g must be >= 1")
    N = _order_of(group_or_order)
    if kind == ADDITIVE:
        if g == 1:
            # least k with k^2 + k >= 2N
            k = max(0, math.isqrt(2 * N) - 2)
            while k * k + k < 2 * N:
                k += 1
            return k
        # least k with k^2 >= g*N
        k = math.isqrt(g * N)
        if k * k < g * N:
            k += 1
        return k
    if kind == DIFFERENCE:
        # least k >= 1 with k^2 - k >= g(N - 1)
        target = g * (N - 1)
        k = max(1, math.isqrt(target))
        while k * k - k < target:
            k += 1
        return k
    raise ValueError(f"unknown kind {kind!r}")


def _floor_radical(const: int, coeff: int, pow_base: int, pow_exp2: int) -> int:
    """floor(const + coeff * base^(pow_exp2 / 2)) exactly.

    pow_exp2 is twice the exponent, so the radical term is
    coeff * sqrt(base^pow_exp2).
    """
    return const + math.isqrt(coeff * coeff * pow_base**pow_exp2)


@dataclass
class UpperBoundEntry:
    name: str
    kind: str
    g_values: tuple[int, ...]
    value: int
    exact: bool  # False when the closed form has an irrational term (value is its floor)
    preconditions_met: bool
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "g_values": list(self.g_values),
            "value": self.value,
            "exact_integer": self.exact,
            "preconditions_met": self.preconditions_met,
            "note": self.note,
        }


class SmallCaseExcludedError(ValueError):
    """(p, s, n) is one of the two tiny cases with its own exact table."""

    def __init__(self, p: int, s: int, n: int):
        super().__init__(
            f"(p,s,n)=({p},{s},{n}) is excluded from the closed-form catalogue; "
            "use exhaustive search (search-min) instead"
        )


EXCLUDED_SMALL_CASES = ((2, 1, 1), (3, 1, 1))


def _k_ok(p: int, s: int, n: int, k: int) -> bool:
    # line constructions need k alphas with pairwise unit differences and
    # enough room: 2 <= k <= min(p^n, p^{sn}/2)
    return 2 <= k and 2 * k <= p ** (s * n) and k <= p**n


def appendix_upper_bounds(p: int, s: int, n: int, kind: str) -> list[UpperBoundEntry]:
    """Catalogue of closed-form upper bounds for Z_{p^s}^{2n}, g in 1..6.

    Every formula is listed with a flag telling whether its preconditions
    hold at (p, s, n); the difference-kind catalogue only applies to odd p.
    Values with radical terms are floored exactly.
    """
    if (p, s, n) in EXCLUDED_SMALL_CASES:
        raise SmallCaseExcludedError(p, s, n)
    if kind not in (ADDITIVE, DIFFERENCE):
        raise ValueError(f"unknown kind {kind!r}")
    Q = p**s
    entries: list[UpperBoundEntry] = []

    def line_value(k: int, m: int) -> int:
        return k * (p ** (s * m) - 1)

    if kind == ADDITIVE:
        entries.append(
            UpperBoundEntry("pair-of-lines", kind, (1, 2), line_value(2, n), True, _k_ok(p, s, n, 2))
        )
        entries.append(
            UpperBoundEntry("triple-of-lines", kind, (3, 4, 5, 6), line_value(3, n), True, _k_ok(p, s, n, 3))
        )
        if n >= 2:
            v = 4 * (Q - 1) * (p ** (s * (n - 1)) - 1)
            ok = _k_ok(p, s, 1, 2) and _k_ok(p, s, n - 1, 2)
            entries.append(UpperBoundEntry("split-2x2", kind, (1, 2, 3, 4), v, True, ok))
            v = 6 * (Q - 1) * (p ** (s * (n - 1)) - 1)
            ok = _k_ok(p, s, 1, 3) and _k_ok(p, s, n - 1, 2)
            entries.append(UpperBoundEntry("split-3x2", kind, (5, 6), v, True, ok))
        if n >= 3:
            v1 = 6 * (p ** (2 * s) - 1) * (p ** (s * (n - 2)) - 1)
            ok1 = _k_ok(p, s, 2, 3) and _k_ok(p, s, n - 2, 2)
            entries.append(UpperBoundEntry("split-deep-a", kind, (1, 2, 3, 4, 5, 6), v1, True, ok1))
            v2 = 8 * (Q - 1) ** 2 * (p ** (s * (n - 2)) - 1)
            ok2 = _k_ok(p, s, 1, 2) and _k_ok(p, s, n - 2, 2)
            entries.append(UpperBoundEntry("split-deep-b", kind, (1, 2, 3, 4, 5, 6), v2, True, ok2))
        return entries

    # difference kind: the catalogue is proved for odd p only
    odd = p % 2 == 1
    # parabola bound p^{sn} + 9 p^{(s - 1/2)n}: radical when n is odd
    const = p ** (s * n)
    v = _floor_radical(const, 9, p, (2 * s - 1) * n)
    exact = n % 2 == 0
    entries.append(UpperBoundEntry("parabola", kind, (1,), v, exact, odd))
    entries.append(
        UpperBoundEntry("pair-of-lines", kind, (1, 2), line_value(2, n), True, odd and _k_ok(p, s, n, 2))
    )
    entries.append(
        UpperBoundEntry("triple-of-lines", kind, (3, 4, 5, 6), line_value(3, n), True, odd and _k_ok(p, s, n, 3))
    )
    if n >= 2:
        # 2(p^s - 1)(p^{s(n-1)} + 9 p^{(s-1/2)(n-1)})
        c = 2 * (Q - 1)
        v = _floor_radical(c * p ** (s * (n - 1)), 9 * c, p, (2 * s - 1) * (n - 1))
        exact = (n - 1) % 2 == 0
        ok = odd and _k_ok(p, s, 1, 2)
        entries.append(UpperBoundEntry("split-pair-parabola", kind, (1, 2), v, exact, ok))
        if not exact:
            # ceiling the radical factor before multiplying, for comparison
            inner = p ** (s * (n - 1)) + _ceil_radical(9, p, (2 * s - 1) * (n - 1))
            alt = c * inner
            if alt != v:
                entries.append(
                    UpperBoundEntry(
                        "split-pair-parabola(per-factor)", kind, (1, 2), alt, True, ok,
                        note="radical factor rounded before multiplying",
                    )
                )
        v = 4 * (Q - 1) * (p ** (s * (n - 1)) - 1)
        ok = odd and _k_ok(p, s, 1, 2) and _k_ok(p, s, n - 1, 2)
        entries.append(UpperBoundEntry("split-2x2", kind, (1, 2, 3, 4), v, True, ok))
        v = 6 * (Q - 1) * (p ** (s * (n - 1)) - 1)
        ok = odd and _k_ok(p, s, 1, 3) and _k_ok(p, s, n - 1, 2)
        entries.append(UpperBoundEntry("split-3x2", kind, (5, 6), v, True, ok))
    if n >= 3:
        v1 = 6 * (p ** (2 * s) - 1) * (p ** (s * (n - 2)) - 1)
        ok1 = odd and _k_ok(p, s, 2, 3) and _k_ok(p, s, n - 2, 2)
        entries.append(UpperBoundEntry("split-deep-a", kind, (1, 2, 3, 4, 5, 6), v1, True, ok1))
        v2 = 8 * (Q - 1) ** 2 * (p ** (s * (n - 2)) - 1)
        ok2 = odd and _k_ok(p, s, 1, 2) and _k_ok(p, s, n - 2, 2)
        entries.append(UpperBoundEntry("split-deep-b", kind, (1, 2, 3, 4, 5, 6), v2, True, ok2))
    return entries


def _ceil_radical(coeff: int, base: int, exp2: int) -> int:
    sq = coeff * coeff * base**exp2
    r = math.isqrt(sq)
    return r if r * r == sq else r + 1


@dataclass
class BoundReport:
    """Lower bound, applicable upper bounds, and any achieved size for one target."""

    group: GroupSpec
    g: int
    kind: str
    lower: int
    uppers: list[UpperBoundEntry] = field(default_factory=list)
    achieved: int | None = None
    achieved_source: str | None = None

    @property
    def best_upper(self) -> int | None:
        vals = [u.value for u in self.uppers if u.preconditions_met and self.g in u.g_values]
        return min(vals) if vals else None

    def to_json_dict(self) -> dict:
        return {
            "group": list(self.group.moduli),
            "g": self.g,
            "kind": self.kind,
            "lower": self.lower,
            "uppers": [u.to_json_dict() for u in self.uppers],
            "best_upper": self.best_upper,
            "achieved": self.achieved,
            "achieved_source": self.achieved_source,
        }

    def csv_row(self) -> list:
        applicable = sorted(
            u.name for u in self.uppers if u.preconditions_met and self.g in u.g_values
        )
        return [
            str(self.group),
            self.g,
            self.kind,
            self.lower,
            self.best_upper if self.best_upper is not None else "",
            ";".join(applicable),
            self.achieved if self.achieved is not None else "",
            self.achieved_source or "",
        ]


CSV_COLUMNS = [
    "group",
    "g",
    "kind",
    "lower",
    "best_upper",
    "upper_sources",
    "achieved",
    "achieved_source",
]


def _as_power_family(group: GroupSpec) -> tuple[int, int, int] | None:
    """Recognize Z_{p^s}^{2n}: equal prime-power moduli, even count."""
    if group.rank == 0 or group.rank % 2 != 0:
        return None
    m = group.moduli[0]
    if any(x != m for x in group.moduli):
        return None
    p = None
    for d in range(2, m + 1):
        if m % d == 0:
            p = d
            break
    s = 0
    mm = m
    while mm % p == 0:
        mm //= p
        s += 1
    if mm != 1:
        return None
    return p, s, group.rank // 2


def bound_report(group: GroupSpec, g: int, kind: str) -> BoundReport:
    """Lower bound for any group; the closed-form uppers when the group is
    a Z_{p^s}^{2n} family member."""
    report = BoundReport(group, g, kind, lower_bound(group, g, kind))
    fam = _as_power_family(group)
    if fam is not None and fam[:3] not in EXCLUDED_SMALL_CASES:
        report.uppers = appendix_upper_bounds(*fam, kind)
    return report


def bound_table(
    ps_pairs: list[tuple[int, int]], n_values: list[int], g_values: list[int], kinds: list[str]
) -> list[BoundReport]:
    """Reports for every combination over the Z_{p^s}^{2n} family."""
    out = []
    for p, s in ps_pairs:
        for n in n_values:
            group = GroupSpec((p**s,) * (2 * n))
            for kind in kinds:
                for g in g_values:
                    out.append(bound_report(group, g, kind))
    return out
