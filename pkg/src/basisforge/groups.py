"""Finite abelian groups as explicit products of cyclic groups.

A group is a :class:`GroupSpec` -- an ordered list of cyclic moduli -- and an
element is a plain tuple of residues, one per modulus.  The empty spec is the
trivial group.  Everything here is exact integer arithmetic; no implicit
reordering of coordinates ever happens.

A GroupSpec doubles as a "black-box group" (``identity``, ``op``,
``inverse``, ``elements()``, ``order``); :func:`order_census` and
:func:`black_box_decompose` accept any object with that surface, which is how
groups defined by an opaque operation (see the star-product model in
:mod:`basisforge.constructions`) get identified with a concrete product of
cyclic groups.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator

from .caps import check_cap

GroupElement = tuple[int, ...]


class NonAbelianError(ValueError):
    """A black-box model turned out not to commute; carries a witness pair."""

    def __init__(self, a, b):
        super().__init__(f"model is not abelian: op({a!r}, {b!r}) != op({b!r}, {a!r})")
        self.witness = (a, b)


@dataclass(frozen=True)
class GroupSpec:
    """Product of cyclic groups Z_{m_1} x ... x Z_{m_r}, in this order."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        if any(m < 2 for m in self.moduli):
            raise ValueError(f"all moduli must be >= 2, got {self.moduli}")

    @cached_property
    def order(self) -> int:
        return math.prod(self.moduli)

    @cached_property
    def rank(self) -> int:
        return len(self.moduli)

    @cached_property
    def _weights(self) -> tuple[int, ...]:
        # mixed-radix weights: coordinate 0 is least significant
        w = []
        acc = 1
        for m in self.moduli:
            w.append(acc)
            acc *= m
        return tuple(w)

    @property
    def identity(self) -> GroupElement:
        return (0,) * self.rank

    @property
    def zero(self) -> GroupElement:
        return self.identity

    def contains(self, a: GroupElement) -> bool:
        return len(a) == self.rank and all(0 <= ai < mi for ai, mi in zip(a, self.moduli))

    def op(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return add(self, a, b)

    def inverse(self, a: GroupElement) -> GroupElement:
        return negate(self, a)

    def elements(self) -> Iterator[GroupElement]:
        """All elements in element_index order (coordinate 0 fastest)."""
        if self.rank == 0:
            yield ()
            return
        for rev in itertools.product(*(range(m) for m in reversed(self.moduli))):
            yield rev[::-1]

    def __str__(self) -> str:
        if not self.moduli:
            return "1"
        parts = []
        for m, run in itertools.groupby(self.moduli):
            e = len(list(run))
            parts.append(f"Z{m}" if e == 1 else f"Z{m}^{e}")
        return "x".join(parts)


_FACTOR_RE = re.compile(r"Z(\d+)(?:\^(\d+))?\Z")


def parse_group_spec(text: str) -> GroupSpec:
    """Parse a spec string like ``Z8^2xZ2`` into a GroupSpec.

    Grammar: factor ("x" factor)*, factor = "Z" int ("^" int)?.  An exponent
    repeats the modulus, so Z4^3 means Z4 x Z4 x Z4.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty group spec")
    moduli: list[int] = []
    for part in text.split("x"):
        m = _FACTOR_RE.match(part.strip())
        if not m:
            raise ValueError(f"malformed group factor {part!r} (expected e.g. Z8 or Z4^3)")
        modulus = int(m.group(1))
        exponent = int(m.group(2)) if m.group(2) else 1
        if modulus < 2:
            raise ValueError(f"modulus must be >= 2, got Z{modulus}")
        if exponent < 1:
            raise ValueError(f"exponent must be >= 1, got ^{exponent}")
        moduli.extend([modulus] * exponent)
    return GroupSpec(tuple(moduli))


def _check_dim(g: GroupSpec, a: GroupElement):
    if len(a) != g.rank:
        raise ValueError(f"element {a!r} has {len(a)} coordinates, group has {g.rank}")


def add(g: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    _check_dim(g, a)
    _check_dim(g, b)
    return tuple((x + y) % m for x, y, m in zip(a, b, g.moduli))


def sub(g: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    _check_dim(g, a)
    _check_dim(g, b)
    return tuple((x - y) % m for x, y, m in zip(a, b, g.moduli))


def negate(g: GroupSpec, a: GroupElement) -> GroupElement:
    _check_dim(g, a)
    return tuple((-x) % m for x, m in zip(a, g.moduli))


def scale(g: GroupSpec, k: int, a: GroupElement) -> GroupElement:
    _check_dim(g, a)
    return tuple((k * x) % m for x, m in zip(a, g.moduli))


def element_index(g: GroupSpec, a: GroupElement) -> int:
    """Mixed-radix rank of ``a``: sum of a_i * prod_{j<i} m_j."""
    _check_dim(g, a)
    return sum(x * w for x, w in zip(a, g._weights))


def index_element(g: GroupSpec, idx: int) -> GroupElement:
    if not 0 <= idx < g.order:
        raise ValueError(f"index {idx} out of range for group of order {g.order}")
    coords = []
    for m in g.moduli:
        idx, r = divmod(idx, m)
        coords.append(r)
    return tuple(coords)


def element_order(g: GroupSpec, a: GroupElement) -> int:
    """Least k >= 1 with k*a = 0: lcm over coordinates of m_i / gcd(m_i, a_i)."""
    _check_dim(g, a)
    return math.lcm(1, *(m // math.gcd(m, x) for x, m in zip(a, g.moduli)))


@dataclass(frozen=True)
class Homomorphism:
    """Group homomorphism given by the images of the source generators.

    ``columns[i]`` is the image in ``target`` of the i-th standard generator
    of ``source``; well-definedness (m_i * columns[i] = 0) is checked at
    construction.
    """

    source: GroupSpec
    target: GroupSpec
    columns: tuple[GroupElement, ...]

    def __post_init__(self):
        if len(self.columns) != self.source.rank:
            raise ValueError("need one image per source generator")
        for m, col in zip(self.source.moduli, self.columns):
            _check_dim(self.target, col)
            if any((m * c) % mt != 0 for c, mt in zip(col, self.target.moduli)):
                raise ValueError(f"image {col!r} of a generator of order {m} is not killed by {m}")

    def apply(self, a: GroupElement) -> GroupElement:
        _check_dim(self.source, a)
        out = [0] * self.target.rank
        for x, col in zip(a, self.columns):
            for j, c in enumerate(col):
                out[j] += x * c
        return tuple(v % m for v, m in zip(out, self.target.moduli))


def scaling_embedding(sub: GroupSpec, amb: GroupSpec, scales: tuple[int, ...]) -> Homomorphism:
    """Embedding of ``sub`` into ``amb`` by per-coordinate multiplication.

    sub and amb must have the same rank and scales[i] * sub.moduli[i] must
    equal amb.moduli[i]; coordinate i maps to scales[i] * e_i.
    """
    if sub.rank != amb.rank or any(
        c * ms != ma for c, ms, ma in zip(scales, sub.moduli, amb.moduli)
    ):
        raise ValueError("scales do not embed sub into amb")
    cols = []
    for i, c in enumerate(scales):
        col = [0] * amb.rank
        col[i] = c
        cols.append(tuple(col))
    return Homomorphism(sub, amb, tuple(cols))


# ---------------------------------------------------------------------------
# Smith normal form and quotients
# ---------------------------------------------------------------------------


def _identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(
    M: Iterable[Iterable[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, D, V) with U*M*V = D diagonal, d_1 | d_2 | ..., U, V unimodular.

    Exact arbitrary-precision integer arithmetic throughout; the diagonal is
    normalized nonnegative.
    """
    A = [list(row) for row in M]
    nr = len(A)
    nc = len(A[0]) if nr else 0
    if any(len(row) != nc for row in A):
        raise ValueError("ragged matrix")
    U = _identity_matrix(nr)
    V = _identity_matrix(nc)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        Ad, As = A[dst], A[src]
        for j in range(nc):
            Ad[j] += q * As[j]
        Ud, Us = U[dst], U[src]
        for j in range(nr):
            Ud[j] += q * Us[j]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(nr, nc):
        # pivot: smallest nonzero magnitude in the trailing submatrix
        pivot = None
        for i in range(t, nr):
            for j in range(t, nc):
                if A[i][j] != 0 and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])

        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nr):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # remainders are strictly smaller than the old pivot
                best = None
                for i in range(t, nr):
                    for j in range(t, nc):
                        if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                            best = (i, j)
                if best != (t, t):
                    if best[0] != t:
                        swap_rows(t, best[0])
                    if best[1] != t:
                        swap_cols(t, best[1])

        # enforce d_t | every remaining entry
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if A[i][j] % A[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue

        if A[t][t] < 0:
            negate_row(t)
        t += 1

    D = [[A[i][j] if i == j else 0 for j in range(nc)] for i in range(nr)]
    return U, D, V


def invariant_factors_from_diagonal(diag: Iterable[int]) -> tuple[int, ...]:
    """Diagonal d_1 | d_2 | ... -> invariant factors, largest first, 1s dropped."""
    return tuple(sorted((d for d in diag if d > 1), reverse=True))


class QuotientData:
    """Quotient G/H with an explicit projection and a deterministic section.

    ``quotient`` is in invariant-factor form (largest factor first);
    ``project`` is the canonical epimorphism and ``lift`` picks the coset
    representative with the smallest element_index.
    """

    def __init__(self, group: GroupSpec, gens: Iterable[GroupElement], cap: int | None = None):
        self.group = group
        self.gens = tuple(tuple(h) for h in gens)
        for h in self.gens:
            _check_dim(group, h)
        self._cap = cap
        r = group.rank
        rows = [list(h) for h in self.gens]
        for i, m in enumerate(group.moduli):
            row = [0] * r
            row[i] = m
            rows.append(row)
        if r == 0:
            self.quotient = GroupSpec(())
            self._positions = []
            self._diag = []
            self._V = []
            self._Vinv = []
        else:
            _, D, V = smith_normal_form(rows)
            diag = [D[i][i] for i in range(r)]
            # V is unimodular; track its inverse by replaying column ops is
            # overkill at this size -- invert exactly via adjugate-free
            # Gauss-Jordan over the rationals (entries stay integral).
            Vinv = _unimodular_inverse(V)
            positions = [i for i in range(r) if diag[i] > 1]
            positions.reverse()  # largest invariant factor first
            self.quotient = GroupSpec(tuple(diag[i] for i in positions))
            self._positions = positions
            self._diag = diag
            self._V = V
            self._Vinv = Vinv
        self._subgroup: list[GroupElement] | None = None

    @property
    def subgroup_order(self) -> int:
        return self.group.order // max(1, self.quotient.order)

    def project(self, a: GroupElement) -> GroupElement:
        _check_dim(self.group, a)
        V = self._V
        out = []
        for i in self._positions:
            out.append(sum(a[j] * V[j][i] for j in range(self.group.rank)) % self._diag[i])
        return tuple(out)

    def subgroup_elements(self) -> list[GroupElement]:
        """All of H, in element_index order (closure of the generators)."""
        if self._subgroup is None:
            check_cap("subgroup enumeration", self.subgroup_order, self._cap)
            seen = {self.group.identity}
            frontier = [self.group.identity]
            while frontier:
                x = frontier.pop()
                for h in self.gens:
                    y = add(self.group, x, h)
                    if y not in seen:
                        seen.add(y)
                        frontier.append(y)
            self._subgroup = sorted(seen, key=lambda e: element_index(self.group, e))
        return self._subgroup

    def lift(self, b: GroupElement) -> GroupElement:
        """Coset representative of ``b``, smallest under element_index order."""
        _check_dim(self.quotient, b)
        w = [0] * self.group.rank
        for coord, i in zip(b, self._positions):
            w[i] = coord
        Vinv = self._Vinv
        x0 = tuple(
            sum(w[i] * Vinv[i][j] for i in range(self.group.rank)) % m
            for j, m in enumerate(self.group.moduli)
        )
        best = min(
            (add(self.group, x0, h) for h in self.subgroup_elements()),
            key=lambda e: element_index(self.group, e),
        )
        return best


def _unimodular_inverse(V: list[list[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix via fraction-free solving."""
    from fractions import Fraction

    n = len(V)
    aug = [[Fraction(V[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n, 2 * n):
            x = aug[i][j]
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(x))
        out.append(row)
    return out


def quotient_by_subgroup(
    g: GroupSpec, gens: Iterable[GroupElement], cap: int | None = None
) -> QuotientData:
    """QuotientData for G / <gens>; quotient in invariant-factor form."""
    return QuotientData(g, gens, cap=cap)


# ---------------------------------------------------------------------------
# Black-box groups: order census and structure decomposition
# ---------------------------------------------------------------------------


def _model_elements(model, cap: int | None):
    elems = list(model.elements())
    check_cap("black-box group enumeration", len(elems), cap)
    return elems


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _model_pow(model, x, e: int):
    acc = model.identity
    base = x
    while e:
        if e & 1:
            acc = model.op(acc, base)
        base = model.op(base, base)
        e >>= 1
    return acc


def _model_order(model, x, group_order: int, primes: list[int]) -> int:
    t = group_order
    for p in primes:
        while t % p == 0 and _model_pow(model, x, t // p) == model.identity:
            t //= p
    return t


def order_census(model, cap: int | None = None) -> dict[int, int]:
    """Exact histogram {element order: count} of a black-box finite group."""
    elems = _model_elements(model, cap)
    n = len(elems)
    primes = _prime_factors(n)
    census: dict[int, int] = {}
    for x in elems:
        o = _model_order(model, x, n, primes)
        census[o] = census.get(o, 0) + 1
    return dict(sorted(census.items()))


class _QuotientModel:
    """Quotient of an enumerated abelian group by a cyclic subgroup.

    Elements are canonical coset representatives (first of the coset in the
    parent's enumeration order).
    """

    def __init__(self, parent_elems, op, identity, subgroup):
        self._op = op
        pos = {x: i for i, x in enumerate(parent_elems)}
        rep: dict = {}
        reps = []
        for x in parent_elems:
            if x in rep:
                continue
            coset = [op(x, h) for h in subgroup]
            r = min(coset, key=pos.__getitem__)
            for y in coset:
                rep[y] = r
            reps.append(r)
        self._rep = rep
        self._elems = sorted(set(reps), key=pos.__getitem__)
        self.identity = rep[identity]

    def op(self, a, b):
        return self._rep[self._op(a, b)]

    def elements(self):
        return iter(self._elems)


def _peel_generators(elems, op, identity) -> list[tuple[object, int]]:
    """Generators (g_i, d_i) with G the direct sum of the <g_i>, d_1 >= d_2 >= ...

    Classic peeling: an element of maximal order generates a direct summand;
    the complement is handled recursively in the quotient, with the section
    fixed up through a discrete log in the peeled cyclic factor.
    """
    n = len(elems)
    if n == 1:
        return []
    primes = _prime_factors(n)

    class _M:
        pass

    model = _M()
    model.op = op
    model.identity = identity

    best = None
    best_order = 0
    for x in elems:
        o = _model_order(model, x, n, primes)
        if o > best_order:
            best, best_order = x, o
    a, d = best, best_order

    # cyclic subgroup <a> and discrete-log table
    powers = [identity]
    for _ in range(d - 1):
        powers.append(op(powers[-1], a))
    dlog = {x: i for i, x in enumerate(powers)}

    quot = _QuotientModel(elems, op, identity, powers)
    sub = _peel_generators(list(quot.elements()), quot.op, quot.identity)

    out = [(a, d)]
    for q, e in sub:
        # q^e lands in <a>; shift q by a power of a so the order drops to e
        y = _model_pow(model, q, e)
        c = dlog[y]
        if c % e != 0:
            raise NonAbelianError(a, q)  # cannot happen for abelian input
        r = op(q, _model_pow(model, a, (d - c // e) % d))
        out.append((r, e))
    return out


def black_box_decompose(model, cap: int | None = None):
    """Identify an enumerated abelian group with a product of cyclic groups.

    Returns ``(spec, to_coords, from_coords)`` where spec is in
    invariant-factor form (largest first) and the two dicts are mutually
    inverse isomorphisms between model elements and GroupElements of spec.
    The isomorphism is certified: the coordinate map is a homomorphism by
    construction and is verified to be a bijection; commutativity is checked
    on all pairs for small models and on all generator pairs otherwise.
    """
    elems = _model_elements(model, cap)
    n = len(elems)
    if n <= 256:
        for i, x in enumerate(elems):
            for y in elems[i + 1 :]:
                if model.op(x, y) != model.op(y, x):
                    raise NonAbelianError(x, y)

    gens = _peel_generators(elems, model.op, model.identity)
    for g1, _ in gens:
        for g2, _ in gens:
            if model.op(g1, g2) != model.op(g2, g1):
                raise NonAbelianError(g1, g2)

    spec = GroupSpec(tuple(d for _, d in gens))
    if spec.order != n:
        raise NonAbelianError(model.identity, model.identity)

    # from_coords(w) = prod g_i^{w_i}; bijectivity certifies the isomorphism
    from_coords: dict[GroupElement, object] = {(): model.identity} if not gens else {}
    if gens:
        partial = {(): model.identity}
        for g, d in gens:
            nxt = {}
            pw = model.identity
            for k in range(d):
                for coords, val in partial.items():
                    nxt[coords + (k,)] = model.op(val, pw)
                pw = model.op(pw, g)
            partial = nxt
        from_coords = partial
    if len(set(from_coords.values())) != n:
        raise NonAbelianError(model.identity, model.identity)
    to_coords = {v: k for k, v in from_coords.items()}
    return spec, to_coords, from_coords


def primary_decomposition(g: GroupSpec) -> list[tuple[int, int, int]]:
    """Multiset of prime-power factors of g as (p, e, multiplicity) triples.

    Each modulus splits into its prime-power parts (CRT); the result is
    sorted by descending prime power value.
    """
    counts: dict[tuple[int, int], int] = {}
    for m in g.moduli:
        for p in _prime_factors(m):
            e = 0
            mm = m
            while mm % p == 0:
                mm //= p
                e += 1
            counts[(p, e)] = counts.get((p, e), 0) + 1
    triples = [(p, e, c) for (p, e), c in counts.items()]
    triples.sort(key=lambda t: (-(t[0] ** t[1]), t[0]))
    return triples
