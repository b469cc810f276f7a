"""Classification of finite abelian 2-groups and the exact partition census.

A 2-group decomposes into blocks Z_{2^{2s_i}}^{u_i} (even exponents),
Z_{2^{2r_j+1}}^{v_j} (odd exponents >= 3) and Z_2^v.  The classifier
evaluates two inequalities against the Z_2-rank v:

    weakly admissible:  sum_{s_i not in {1,2}} u_i + sum_j v_j >= v
    admissible:         2 * floor(sum_{s_i not in {1,2}} u_i / 2) + sum_j v_j >= v

The census walks every partition of n (each one names an abelian group of
order 2^n: part i with multiplicity a_i gives a Z_{2^i}^{a_i} factor),
classifies it, and cross-checks the partition count against the pentagonal
recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .caps import check_cap
from .groups import GroupSpec

ADMISSIBLE = "admissible"
WEAKLY_ONLY = "weakly_admissible_only"
INADMISSIBLE = "inadmissible"


@dataclass(frozen=True)
class TwoGroupShape:
    """Block decomposition of a finite abelian 2-group.

    even_part lists (s_i, u_i) for factors Z_{2^{2 s_i}}^{u_i} with s_i
    ascending; odd_part lists (r_j, v_j) for factors Z_{2^{2 r_j + 1}}^{v_j}
    with r_j ascending; v is the multiplicity of Z_2.
    """

    even_part: tuple[tuple[int, int], ...]
    odd_part: tuple[tuple[int, int], ...]
    v: int

    def __post_init__(self):
        for part in (self.even_part, self.odd_part):
            halves = [h for h, _ in part]
            if any(h < 1 for h in halves) or halves != sorted(set(halves)):
                raise ValueError("block exponents must be distinct, ascending, >= 1")
            if any(c < 1 for _, c in part):
                raise ValueError("block multiplicities must be >= 1")
        if self.v < 0:
            raise ValueError("v must be >= 0")

    @property
    def order_exponent(self) -> int:
        return (
            sum(2 * s * u for s, u in self.even_part)
            + sum((2 * r + 1) * c for r, c in self.odd_part)
            + self.v
        )


def shape_of_2group(g: GroupSpec) -> TwoGroupShape:
    """Sort the moduli of a 2-group into the block decomposition."""
    even: dict[int, int] = {}
    odd: dict[int, int] = {}
    v = 0
    for m in g.moduli:
        e = m.bit_length() - 1
        if m != 1 << e:
            raise ValueError(f"modulus {m} is not a power of 2")
        if e == 1:
            v += 1
        elif e % 2 == 0:
            even[e // 2] = even.get(e // 2, 0) + 1
        else:
            odd[(e - 1) // 2] = odd.get((e - 1) // 2, 0) + 1
    return TwoGroupShape(
        tuple(sorted(even.items())),
        tuple(sorted(odd.items())),
        v,
    )


def classify(shape: TwoGroupShape) -> str:
    """admissible / weakly_admissible_only / inadmissible for a 2-group shape."""
    big_even = sum(u for s, u in shape.even_part if s not in (1, 2))
    odd_total = sum(c for _, c in shape.odd_part)
    if 2 * (big_even // 2) + odd_total >= shape.v:
        return ADMISSIBLE
    if big_even + odd_total >= shape.v:
        return WEAKLY_ONLY
    return INADMISSIBLE


def classify_group(g: GroupSpec) -> str:
    return classify(shape_of_2group(g))


def _classify_exponents(parts: list[int]) -> str:
    # fast path for the census: parts are the 2-power exponents
    big_even = 0
    odd_total = 0
    v = 0
    for e in parts:
        if e == 1:
            v += 1
        elif e % 2 == 0:
            if e >= 6:
                big_even += 1
        else:
            odd_total += 1
    if 2 * (big_even // 2) + odd_total >= v:
        return ADMISSIBLE
    if big_even + odd_total >= v:
        return WEAKLY_ONLY
    return INADMISSIBLE


def partitions(n: int) -> Iterator[list[int]]:
    """All partitions of n as descending part lists (accelerated ascent order)."""
    if n == 0:
        yield []
        return
    a = [0] * (n + 1)
    k = 1
    y = n - 1
    while k != 0:
        x = a[k - 1] + 1
        k -= 1
        while 2 * x <= y:
            a[k] = x
            y -= x
            k += 1
        el = k + 1
        while x <= y:
            a[k] = x
            a[el] = y
            yield a[: k + 2][::-1]
            x += 1
            y -= 1
        a[k] = x + y
        y = x + y - 1
        yield a[: k + 1][::-1]


def partition_count_pentagonal(n: int) -> list[int]:
    """p(0..n) by Euler's pentagonal recurrence, exact integers."""
    p = [0] * (n + 1)
    p[0] = 1
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 == 1 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


@dataclass(frozen=True)
class PartitionStats:
    """Census of abelian groups of order 2^n by admissibility."""

    n: int
    total: int
    admissible: int
    weakly_admissible: int

    def __post_init__(self):
        if not self.admissible <= self.weakly_admissible <= self.total:
            raise ValueError("census counts out of order")

    @property
    def ratio(self) -> float:
        return self.admissible / self.total if self.total else 1.0


def partition_census(n: int, cap_n: int = 90) -> PartitionStats:
    """Classify every abelian group of order 2^n via its partition."""
    if n < 0:
        raise ValueError("n must be >= 0")
    check_cap("partition enumeration", n, cap_n)
    total = 0
    admissible = 0
    weakly = 0
    for parts in partitions(n):
        total += 1
        verdict = _classify_exponents(parts)
        if verdict == ADMISSIBLE:
            admissible += 1
            weakly += 1
        elif verdict == WEAKLY_ONLY:
            weakly += 1
    return PartitionStats(n, total, admissible, weakly)


def group_of_partition(parts: list[int]) -> GroupSpec:
    """The abelian 2-group named by a partition (part e -> factor Z_{2^e})."""
    return GroupSpec(tuple(2**e for e in sorted(parts, reverse=True)))
