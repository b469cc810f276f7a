"""Arithmetic in Galois rings GR(p^s, n).

Elements are tuples of n residues mod p^s (coefficients of a polynomial of
degree < n, constant term first).  The modulus polynomial is chosen
deterministically, the Teichmuller system is built by the power method, and
the additive group is identified with Z_{p^s}^n by reading coefficients as
coordinates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .groups import GroupElement, GroupSpec

RingElement = tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomials over F_p (coefficient lists, constant term first, trimmed)
# ---------------------------------------------------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    n = len(f) - 1
    for i in range(len(prod) - 1, n - 1, -1):
        c = prod[i]
        if c:
            for j in range(n + 1):
                prod[i - n + j] = (prod[i - n + j] - c * f[j]) % p
    return _trim(prod[:n])


def _poly_powmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    acc = [1]
    b = list(base)
    while e:
        if e & 1:
            acc = _poly_mulmod(acc, b, f, p)
        b = _poly_mulmod(b, b, f, p)
        e >>= 1
    return acc


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b) and _trim(a):
        shift = len(a) - len(b)
        c = (a[-1] * inv_lead) % p
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] = (a[shift + j] - c * y) % p
        _trim(a)
    return _trim(q), a


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _poly_divmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [(x * inv) % p for x in a]
    return a


def _poly_invmod(a: list[int], f: list[int], p: int) -> list[int]:
    """Inverse of a modulo f over F_p (extended Euclid)."""
    r0, r1 = list(f), _trim(list(a))
    t0, t1 = [], [1]
    while r1:
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        qt = _poly_mul_plain(q, t1, p)
        t0, t1 = t1, _trim([(x - y) % p for x, y in itertools.zip_longest(t0, qt, fillvalue=0)])
    if len(r0) != 1:
        raise ValueError("element is not invertible mod f")
    inv = pow(r0[0], -1, p)
    return [(x * inv) % p for x in t0]


def _poly_mul_plain(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    n = len(f) - 1
    if n < 1:
        return False
    x = _poly_divmod([0, 1], f, p)[1]
    if _poly_powmod(x, p**n, f, p) != x:
        return False
    m = n
    primes = set()
    d = 2
    while d * d <= m:
        if m % d == 0:
            primes.add(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.add(m)
    for q in primes:
        h = _poly_powmod(x, p ** (n // q), f, p)
        diff = _trim([(a - b) % p for a, b in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_poly_gcd(diff, f, p)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# the ring
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaloisRing:
    """GR(p^s, n) = Z_{p^s}[x] / (f), with f monic of degree n."""

    p: int
    s: int
    n: int
    f: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.s < 1 or self.n < 1:
            raise ValueError("s and n must be >= 1")
        if len(self.f) != self.n + 1 or self.f[-1] != 1:
            raise ValueError("f must be monic of degree n")
        fbar = _trim([c % self.p for c in self.f])
        if not _is_irreducible(fbar, self.p):
            raise ValueError("reduction of f mod p is not irreducible")

    @cached_property
    def q(self) -> int:
        return self.p**self.s

    @cached_property
    def size(self) -> int:
        return self.p ** (self.s * self.n)

    @property
    def zero(self) -> RingElement:
        return (0,) * self.n

    @property
    def one(self) -> RingElement:
        return (1,) + (0,) * (self.n - 1)

    def _check(self, a: RingElement):
        if len(a) != self.n:
            raise ValueError(f"element {a!r} has wrong length for rank {self.n}")

    def from_int(self, c: int) -> RingElement:
        return (c % self.q,) + (0,) * (self.n - 1)

    def add(self, a: RingElement, b: RingElement) -> RingElement:
        self._check(a)
        self._check(b)
        return tuple((x + y) % self.q for x, y in zip(a, b))

    def sub(self, a: RingElement, b: RingElement) -> RingElement:
        self._check(a)
        self._check(b)
        return tuple((x - y) % self.q for x, y in zip(a, b))

    def neg(self, a: RingElement) -> RingElement:
        self._check(a)
        return tuple((-x) % self.q for x in a)

    def mul(self, a: RingElement, b: RingElement) -> RingElement:
        self._check(a)
        self._check(b)
        n, q, f = self.n, self.q, self.f
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for i in range(2 * n - 2, n - 1, -1):
            c = prod[i] % q
            if c:
                for j in range(n + 1):
                    prod[i - n + j] -= c * f[j]
        return tuple(c % q for c in prod[:n])

    def pow(self, a: RingElement, e: int) -> RingElement:
        acc = self.one
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def elements(self) -> Iterator[RingElement]:
        for rev in itertools.product(range(self.q), repeat=self.n):
            yield rev[::-1]

    @cached_property
    def group(self) -> GroupSpec:
        return GroupSpec((self.q,) * self.n)


def construct_ring(p: int, s: int, n: int) -> GaloisRing:
    """GR(p^s, n) with a deterministic modulus polynomial.

    The modulus is the lexicographically smallest monic degree-n polynomial
    with coefficients in [0, p), nonzero constant term, and irreducible
    reduction mod p, read over Z_{p^s}.  (For n >= 2 irreducibility already
    forces a nonzero constant term; requiring it for n = 1 keeps the scan
    away from f = x and pins f = x + 1 for p = 2.)
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if s < 1 or n < 1:
        raise ValueError("s and n must be >= 1")
    for tail in itertools.product(range(p), repeat=n):
        if tail[0] == 0:
            continue
        cand = list(tail) + [1]
        if _is_irreducible(cand, p):
            return GaloisRing(p, s, n, tuple(cand))
    raise RuntimeError("no irreducible polynomial found (unreachable)")


def ring_add(R: GaloisRing, a: RingElement, b: RingElement) -> RingElement:
    return R.add(a, b)


def ring_mul(R: GaloisRing, a: RingElement, b: RingElement) -> RingElement:
    return R.mul(a, b)


def is_unit(R: GaloisRing, a: RingElement) -> bool:
    """Units are exactly the elements outside pR."""
    R._check(a)
    return any(c % R.p != 0 for c in a)


def ring_inverse(R: GaloisRing, a: RingElement) -> RingElement:
    """Inverse of a unit: invert mod p in the residue field, then Hensel-lift."""
    if not is_unit(R, a):
        raise ValueError(f"{a!r} is not a unit")
    fbar = [c % R.p for c in R.f]
    abar = _trim([c % R.p for c in a])
    b0 = _poly_invmod(abar, fbar, R.p)
    b = tuple(b0[i] if i < len(b0) else 0 for i in range(R.n))
    two = R.from_int(2)
    for _ in range(R.s.bit_length() + 2):
        if R.mul(a, b) == R.one:
            return b
        b = R.mul(b, R.sub(two, R.mul(a, b)))
    raise RuntimeError("Hensel refinement failed to converge (unreachable)")


@dataclass(frozen=True)
class TeichmullerSystem:
    """{0} plus the powers of a unit xi of multiplicative order p^n - 1.

    The p^n members are a transversal of R/pR and any two distinct members
    differ by a unit.
    """

    ring: GaloisRing
    xi: RingElement
    elements: tuple[RingElement, ...]

    def nonzero(self) -> tuple[RingElement, ...]:
        return self.elements[1:]


def _residue_order_is_maximal(R: GaloisRing, u: RingElement, m: int, m_primes: list[int]) -> bool:
    """Does the mod-p reduction of u generate the residue field's unit group?"""
    fbar = [c % R.p for c in R.f]
    ubar = _trim([c % R.p for c in u])
    if _poly_powmod(ubar, m, fbar, R.p) != [1]:
        return False
    for q in m_primes:
        if _poly_powmod(ubar, m // q, fbar, R.p) == [1]:
            return False
    return True


def teichmuller(R: GaloisRing) -> TeichmullerSystem:
    """Teichmuller system of R, built by the power method.

    Scans units in ascending coefficient order for one whose residue-field
    image has order p^n - 1, then raises it to p^{(s-1)n} to kill the 1 + pR
    component.  All system invariants are certified before returning.
    """
    m = R.p**R.n - 1
    m_primes = []
    mm = m
    d = 2
    while d * d <= mm:
        if mm % d == 0:
            m_primes.append(d)
            while mm % d == 0:
                mm //= d
        d += 1
    if mm > 1:
        m_primes.append(mm)

    xi = None
    if m == 1:
        xi = R.one
    else:
        for cand in R.elements():
            if not is_unit(R, cand):
                continue
            if _residue_order_is_maximal(R, cand, m, m_primes):
                xi = R.pow(cand, R.p ** ((R.s - 1) * R.n))
                break
    if xi is None:
        raise RuntimeError("no residue-field generator found (unreachable)")

    elems = [R.zero]
    t = R.one
    for _ in range(m):
        elems.append(t)
        t = R.mul(t, xi)

    # certify: exact order, and distinct residues mod pR (which makes all
    # pairwise differences of distinct members units)
    if R.pow(xi, m) != R.one:
        raise RuntimeError("xi does not have order p^n - 1")
    for q in m_primes:
        if R.pow(xi, m // q) == R.one:
            raise RuntimeError("xi order divides a proper divisor of p^n - 1")
    residues = {tuple(c % R.p for c in e) for e in elems}
    if len(residues) != R.p**R.n:
        raise RuntimeError("Teichmuller members do not cover R/pR")
    return TeichmullerSystem(R, xi, tuple(elems))


def to_group_element(R: GaloisRing, a: RingElement) -> GroupElement:
    """Read the coefficient vector as an element of Z_{p^s}^n."""
    R._check(a)
    return tuple(a)


def from_group_element(R: GaloisRing, a: GroupElement) -> RingElement:
    R._check(a)
    return tuple(a)


def unit_count(R: GaloisRing) -> int:
    """|U(R)| = p^{(s-1)n} (p^n - 1)."""
    return R.p ** ((R.s - 1) * R.n) * (R.p**R.n - 1)
