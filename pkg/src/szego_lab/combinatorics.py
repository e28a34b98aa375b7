"""Exact-arithmetic Hunt--Dyson / Bohnenblust--Spitzer machinery.

Everything here works over :class:`fractions.Fraction` (plain ``int`` inputs
are promoted).  Floats are rejected: equality of multisets of maxima is only
meaningful in exact arithmetic.

Conventions
-----------
* ``a`` is a sequence of rationals ``(a_1, ..., a_m)`` with ``m >= 1``.
* ``M_j(a) = max(0, a_1, a_1 + a_2, ..., a_1 + ... + a_j)`` and ``M_0 = 0``.
* Permutations are tuples of images in one-line notation, ``tau[i-1] = tau(i)``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterator, Sequence

DEFAULT_CAP = 9
COMPOSITION_CAP = 24
PATH_CAP = 2_000_000


class EnumerationCapError(ValueError):
    """Raised when an exhaustive enumeration would exceed its cap."""


def as_rationals(a: Sequence) -> tuple[Fraction, ...]:
    """Convert ``a`` to a tuple of Fractions, refusing floats."""
    out = []
    for x in a:
        if isinstance(x, bool) or not isinstance(x, (Rational, str)):
            raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")
        out.append(Fraction(x))
    if not out:
        raise ValueError("rational vector must have at least one entry")
    return tuple(out)


def _check_cap(m: int, cap: int) -> None:
    if m > cap:
        raise EnumerationCapError(f"m = {m} exceeds the enumeration cap {cap} ({m}! permutations)")


def positive_part(x):
    return x if x > 0 else 0 * x


# --------------------------------------------------------------------------
# compositions and permutations
# --------------------------------------------------------------------------


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All compositions of ``total`` into ``parts`` positive parts, lexicographic."""
    if parts < 1 or total < parts:
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def multinomial(n: int, parts: Sequence[int]) -> int:
    out = math.factorial(n)
    for p in parts:
        out //= math.factorial(p)
    return out


def cycle_decompose(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Canonical cycle list of a permutation given by its images ``1..m``.

    Each cycle starts at its smallest element; cycles are ordered by leader.

    >>> cycle_decompose((2, 3, 1))
    [(1, 2, 3)]
    >>> cycle_decompose((2, 1, 3))
    [(1, 2), (3,)]
    """
    m = len(perm)
    if sorted(perm) != list(range(1, m + 1)):
        raise ValueError(f"not a permutation of 1..{m}: {tuple(perm)}")
    seen = [False] * (m + 1)
    cycles = []
    for start in range(1, m + 1):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        nxt = perm[start - 1]
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = perm[nxt - 1]
        cycles.append(tuple(cycle))
    return cycles


# --------------------------------------------------------------------------
# prefix maxima and the Hunt--Dyson identities
# --------------------------------------------------------------------------


def prefix_max_stat(a: Sequence, j: int) -> Fraction:
    """``M_j(a)``: the maximum of 0 and the first ``j`` prefix sums of ``a``."""
    vals = as_rationals(a)
    if not 0 <= j <= len(vals):
        raise IndexError(f"j = {j} outside 0..{len(vals)}")
    best = s = Fraction(0)
    for x in vals[:j]:
        s += x
        if s > best:
            best = s
    return best


def _scaled_integers(vals: Sequence[Fraction]) -> tuple[int, list[int]]:
    """Common denominator ``L`` and the integers ``L * a_i``."""
    scale = math.lcm(*(v.denominator for v in vals))
    return scale, [int(v * scale) for v in vals]


def _last_two_maxima(vals: Sequence) -> tuple:
    """(M_{m-1}, M_m) in one pass."""
    best = s = 0
    for x in vals[:-1]:
        s += x
        if s > best:
            best = s
    s += vals[-1]
    return best, (s if s > best else best)


def hd_sides(a: Sequence, cap: int = DEFAULT_CAP) -> tuple[Fraction, Fraction]:
    """Both sides of the classical Hunt--Dyson formula.

    Returns ``(sum_tau [M_m(a_tau) - M_{m-1}(a_tau)], (m-1)! (a_1+...+a_m)_+)``.
    """
    vals = as_rationals(a)
    m = len(vals)
    _check_cap(m, cap)
    lhs = Fraction(0)
    for perm in itertools.permutations(vals):
        prev, last = _last_two_maxima(perm)
        lhs += last - prev
    rhs = math.factorial(m - 1) * positive_part(sum(vals, Fraction(0)))
    return lhs, rhs


def ghd_lhs(a: Sequence, n: int, cap: int = DEFAULT_CAP) -> Fraction:
    """``sum over tau in S_m of M_m(a_tau)**n - M_{m-1}(a_tau)**n``."""
    if n < 1:
        raise ValueError("power n must be >= 1")
    vals = as_rationals(a)
    _check_cap(len(vals), cap)
    # M_j(c a) = c M_j(a) for c > 0, so work with integers and rescale.
    scale, ints = _scaled_integers(vals)
    total = 0
    for perm in itertools.permutations(ints):
        prev, last = _last_two_maxima(perm)
        total += last**n - prev**n
    return Fraction(total, scale**n)


def _ordered_partitions(items: tuple[int, ...], sizes: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Ordered set partitions of ``items`` (bit indices) into blocks of ``sizes``.

    Blocks are yielded as bitmasks.
    """
    if not sizes:
        yield ()
        return
    head, tail = sizes[0], sizes[1:]
    for block in itertools.combinations(items, head):
        mask = 0
        for i in block:
            mask |= 1 << i
        rest = tuple(i for i in items if not (mask >> i) & 1)
        for others in _ordered_partitions(rest, tail):
            yield (mask,) + others


@lru_cache(maxsize=None)
def _partition_table(m: int, sizes: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(_ordered_partitions(tuple(range(m)), sizes))


def ghd_rhs(a: Sequence, n: int, cap: int = DEFAULT_CAP) -> Fraction:
    """Right-hand side of the generalized Hunt--Dyson formula.

    Evaluates::

        sum_tau sum_{j=1}^{min(m,n)} 1/j! sum_{k_1+..+k_j=m} sum_{l_1+..+l_j=n}
            multinomial(n; l) * prod_i (k_i(a_tau))_+^{l_i} / k_i

    where ``k_i(a_tau)`` is the sum of the ``i``-th consecutive block of
    ``k_i`` permuted entries.  For a fixed composition ``k`` the summand only
    depends on which entries land in which block, and exactly
    ``k_1! ... k_j!`` permutations produce each ordered block partition, so the
    tau-sum is carried out over ordered set partitions with that multiplicity.
    """
    if n < 1:
        raise ValueError("power n must be >= 1")
    vals = as_rationals(a)
    m = len(vals)
    _check_cap(m, cap)

    # Integer inner loop; the sum is homogeneous of degree n in a.
    scale, ints = _scaled_integers(vals)
    block_pos = [0] * (1 << m)
    for mask in range(1, 1 << m):
        low = (mask & -mask).bit_length() - 1
        block_pos[mask] = block_pos[mask & (mask - 1)] + ints[low]
    block_pos = [s if s > 0 else 0 for s in block_pos]

    total = Fraction(0)
    for j in range(1, min(m, n) + 1):
        l_terms = [(multinomial(n, l), l) for l in compositions(n, j)]
        for k in compositions(m, j):
            acc = 0
            for blocks in _partition_table(m, k):
                xs = [block_pos[b] for b in blocks]
                for coef, l in l_terms:
                    term = coef
                    for x, p in zip(xs, l):
                        term *= x**p
                    acc += term
            mult = math.prod(math.factorial(ki) for ki in k)
            total += Fraction(acc * mult, math.factorial(j) * math.prod(k))
    return total / Fraction(scale) ** n


# --------------------------------------------------------------------------
# Bohnenblust--Spitzer
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalMultiset:
    """Multiset of exact rationals in canonical (value-sorted) form."""

    items: tuple[tuple[Fraction, int], ...]

    @classmethod
    def from_values(cls, values) -> "RationalMultiset":
        counts = Counter(Fraction(v) for v in values)
        return cls(tuple(sorted(counts.items())))

    @property
    def total(self) -> int:
        return sum(c for _, c in self.items)

    def as_list(self) -> list[Fraction]:
        return [v for v, c in self.items for _ in range(c)]

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.as_list()) + "}"


def bst_multisets(a: Sequence, cap: int = DEFAULT_CAP) -> tuple[RationalMultiset, RationalMultiset]:
    """The two multisets compared by the Bohnenblust--Spitzer theorem.

    Left: ``{M_m(a_tau)}`` over all permutations.  Right: for every
    permutation, the sum over its cycles ``c`` of ``(sum_{i in c} a_i)_+``.
    """
    vals = as_rationals(a)
    m = len(vals)
    _check_cap(m, cap)
    left = []
    right = []
    for perm in itertools.permutations(range(1, m + 1)):
        left.append(prefix_max_stat([vals[i - 1] for i in perm], m))
        right.append(sum((positive_part(sum(vals[i - 1] for i in c)) for c in cycle_decompose(perm)), Fraction(0)))
    return RationalMultiset.from_values(left), RationalMultiset.from_values(right)


# --------------------------------------------------------------------------
# random-walk maximum moments
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class StepDistribution:
    """Finite-support step law with exact rational probabilities."""

    support: tuple[Fraction, ...]
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        support = as_rationals(self.support)
        probs = as_rationals(self.probs)
        if len(support) != len(probs):
            raise ValueError("support and probs differ in length")
        if len(set(support)) != len(support):
            raise ValueError("support entries must be distinct")
        if any(p < 0 for p in probs):
            raise ValueError("negative probability")
        if sum(probs) != 1:
            raise ValueError(f"probabilities sum to {sum(probs)}, not 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_pairs(cls, pairs) -> "StepDistribution":
        pairs = list(pairs)
        return cls(tuple(v for v, _ in pairs), tuple(p for _, p in pairs))


@lru_cache(maxsize=None)
def walk_sum_law(dist: StepDistribution, k: int) -> dict[Fraction, Fraction]:
    """Law of ``S_k``, the sum of ``k`` i.i.d. steps, by repeated convolution."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return {Fraction(0): Fraction(1)}
    prev = walk_sum_law(dist, k - 1)
    law: dict[Fraction, Fraction] = {}
    for s, ps in prev.items():
        for v, pv in zip(dist.support, dist.probs):
            if pv:
                law[s + v] = law.get(s + v, Fraction(0)) + ps * pv
    return law


def rw_plus_moment(dist: StepDistribution, k: int, l: int) -> Fraction:
    """``E[(S_k)_+ ** l]``."""
    if k < 1 or l < 1:
        raise ValueError("k and l must be >= 1")
    return sum((p * v**l for v, p in walk_sum_law(dist, k).items() if v > 0), Fraction(0))


def rw_max_moment(dist: StepDistribution, m: int, n: int) -> Fraction:
    """``E[max(0, S_1, ..., S_m) ** n]`` from the generalized Hunt--Dyson recursion.

    For i.i.d. steps, disjoint blocks of ``k`` steps are independent copies of
    ``S_k``, so taking expectations of the identity for ``i`` variables gives::

        E[M_i^n] - E[M_{i-1}^n]
            = sum_j 1/j! sum_{k-comp of i} sum_{l-comp of n}
                  multinomial(n; l) prod_r E[(S_{k_r})_+^{l_r}] / k_r
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    if m > COMPOSITION_CAP:
        raise EnumerationCapError(f"m = {m} exceeds the composition cap {COMPOSITION_CAP}")
    plus = {}

    def pm(k, l):
        if (k, l) not in plus:
            plus[k, l] = rw_plus_moment(dist, k, l)
        return plus[k, l]

    total = Fraction(0)
    for i in range(1, m + 1):
        for j in range(1, min(i, n) + 1):
            inc = Fraction(0)
            for k in compositions(i, j):
                for l in compositions(n, j):
                    term = Fraction(multinomial(n, l))
                    for kr, lr in zip(k, l):
                        term *= pm(kr, lr) / kr
                    inc += term
            total += inc / math.factorial(j)
    return total


def rw_max_moment_oracle(dist: StepDistribution, m: int, n: int, cap: int = PATH_CAP) -> Fraction:
    """Same moment by enumerating every path of the walk."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    steps = [(v, p) for v, p in zip(dist.support, dist.probs) if p]
    if len(steps) ** m > cap:
        raise EnumerationCapError(f"{len(steps)}**{m} paths exceed the cap {cap}")
    total = Fraction(0)
    for path in itertools.product(steps, repeat=m):
        prob = Fraction(1)
        s = best = Fraction(0)
        for v, p in path:
            prob *= p
            s += v
            if s > best:
                best = s
        total += prob * best**n
    return total
