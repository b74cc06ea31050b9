"""Subpartitions of [n]: types, enumeration, exact counts and intersection tests.

A (k, ell)-subpartition is a set of ``ell`` pairwise disjoint ``k``-subsets
(classes) of ``{1, ..., n}``. Two subpartitions t-intersect when they share at
least ``t`` identical classes; element-level overlap between different classes
never counts.

Classes are stored as bit masks (element ``e`` <-> bit ``e - 1``) in a single
64-bit word, so anything that materialises subpartitions requires ``n <= 64``.
The counting functions work with unbounded integers and have no such cap.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Iterator, Sequence

from .errors import (
    EmptyInput,
    InvalidFixedClasses,
    InvalidPair,
    InvalidParameters,
    UnsupportedUniverse,
)

MAX_N = 64


@dataclass(frozen=True)
class UniverseParams:
    n: int
    k: int
    ell: int
    t: int = 1

    def __post_init__(self):
        for name in ("n", "k", "ell", "t"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InvalidParameters(f"{name} must be a positive integer, got {value!r}")
        if self.n < self.k * self.ell:
            raise InvalidParameters(
                f"n={self.n} < k*ell={self.k * self.ell}: no subpartition exists"
            )
        if self.t > self.ell:
            raise InvalidParameters(f"t={self.t} must satisfy 1 <= t <= ell={self.ell}")

    def with_t(self, t: int) -> "UniverseParams":
        return UniverseParams(self.n, self.k, self.ell, t)


def _mask_of(members: Iterable[int]) -> int:
    mask = 0
    for e in members:
        mask |= 1 << (e - 1)
    return mask


def _members_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return tuple(out)


@dataclass(frozen=True, order=True)
class KClass:
    """One class of a subpartition: a sorted tuple of distinct positive ints."""

    members: tuple[int, ...]
    mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        members = tuple(sorted(self.members))
        if not members:
            raise InvalidParameters("a class must be nonempty")
        if len(set(members)) != len(members):
            raise InvalidParameters(f"repeated element in class {members}")
        if members[0] < 1:
            raise InvalidParameters(f"class elements must be >= 1, got {members}")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "mask", _mask_of(members))

    @classmethod
    def from_mask(cls, mask: int) -> "KClass":
        return cls(_members_of(mask))

    @property
    def k(self) -> int:
        return len(self.members)

    @property
    def min(self) -> int:
        return self.members[0]

    def __str__(self):
        return ",".join(map(str, self.members))


def _as_class(c) -> KClass:
    return c if isinstance(c, KClass) else KClass(tuple(c))


@dataclass(frozen=True, order=True)
class SubPartition:
    """Pairwise disjoint equal-size classes, kept sorted by smallest element.

    The derived ordering is lexicographic on the class sequence, which is
    also the order produced by :func:`enumerate_subpartitions`.
    """

    classes: tuple[KClass, ...]

    def __post_init__(self):
        classes = tuple(sorted((_as_class(c) for c in self.classes), key=lambda c: c.min))
        if not classes:
            raise InvalidParameters("a subpartition needs at least one class")
        k = classes[0].k
        union = 0
        for c in classes:
            if c.k != k:
                raise InvalidParameters("all classes must have the same size")
            if union & c.mask:
                raise InvalidParameters("classes must be pairwise disjoint")
            union |= c.mask
        object.__setattr__(self, "classes", classes)

    @classmethod
    def of(cls, *classes) -> "SubPartition":
        """``SubPartition.of((1, 2, 3), (4, 5, 6))``"""
        return cls(tuple(classes))

    @property
    def k(self) -> int:
        return self.classes[0].k

    @property
    def ell(self) -> int:
        return len(self.classes)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(c.mask for c in self.classes)

    @property
    def support(self) -> int:
        mask = 0
        for c in self.classes:
            mask |= c.mask
        return mask

    def __str__(self):
        return format_subpartition(self)


@dataclass(frozen=True)
class Family:
    """A deduplicated set of subpartitions over one universe."""

    universe: UniverseParams
    members: frozenset[SubPartition]

    def __post_init__(self):
        members = frozenset(self.members)
        u = self.universe
        for p in members:
            if p.ell != u.ell or p.k != u.k or p.support.bit_length() > u.n:
                raise InvalidParameters(f"{p} does not belong to universe {u}")
        object.__setattr__(self, "members", members)

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[SubPartition]:
        return iter(sorted(self.members))

    def __contains__(self, p):
        return p in self.members


# ---------------------------------------------------------------- counting

def binomial(n: int, k: int) -> int:
    """Exact C(n, k); 0 when k > n."""
    return comb(n, k)


def count_subpartitions(n: int, ell: int, k: int) -> int:
    """U(n, ell, k): number of (k, ell)-subpartitions of [n].

    U(n, 0, k) = 1 (empty product) and U(n, ell, k) = 0 whenever n < k*ell.
    """
    if n < 0 or k < 0 or ell < 0:
        raise InvalidParameters(f"U({n}, {ell}, {k}) needs nonnegative arguments")
    if ell == 0:
        return 1
    if k == 0:
        raise InvalidParameters("k = 0 classes are not supported")
    if n < k * ell:
        return 0
    prod = 1
    for i in range(ell):
        prod *= comb(n - i * k, k)
    q, r = divmod(prod, factorial(ell))
    assert r == 0
    return q


def canonical_family_size(n: int, ell: int, k: int, t: int) -> int:
    """Size of the family of all subpartitions containing ``t`` fixed classes."""
    if not 1 <= t <= ell or n < k * ell or k < 1:
        raise InvalidParameters(f"need 1 <= t <= ell and n >= k*ell, got n={n} k={k} ell={ell} t={t}")
    return count_subpartitions(n - t * k, ell - t, k)


# ------------------------------------------------------------- enumeration

def _enumerate_masks(elements: Sequence[int], k: int, ell: int) -> Iterator[tuple[int, ...]]:
    """Yield class-mask tuples, canonical order, over the sorted ``elements``."""
    elements = sorted(elements)
    if ell == 0:
        yield ()
        return

    def rec(pool: list[int], depth: int, acc: list[int]):
        remaining = ell - depth
        for i, low in enumerate(pool):
            # the class minimum plus every later class must fit above ``low``
            if len(pool) - i < remaining * k:
                return
            for tail in combinations(pool[i + 1:], k - 1):
                mask = _mask_of((low, *tail))
                if remaining == 1:
                    yield (*acc, mask)
                    continue
                chosen = set(tail)
                rest = [e for e in pool[i + 1:] if e not in chosen]
                acc.append(mask)
                yield from rec(rest, depth + 1, acc)
                acc.pop()

    if len(elements) >= k * ell:
        yield from rec(elements, 0, [])


def _from_masks(masks: tuple[int, ...]) -> SubPartition:
    return SubPartition(tuple(KClass.from_mask(m) for m in masks))


def _check_width(n: int):
    if n > MAX_N:
        raise UnsupportedUniverse(f"n={n} exceeds the {MAX_N}-bit class mask width")


def enumerate_subpartitions(universe: UniverseParams) -> Iterator[SubPartition]:
    """Every subpartition of the universe exactly once, in lexicographic order."""
    _check_width(universe.n)
    for masks in _enumerate_masks(range(1, universe.n + 1), universe.k, universe.ell):
        yield _from_masks(masks)


# ------------------------------------------------------------ intersection

def _check_pair(p: SubPartition, q: SubPartition):
    if p.k != q.k or p.ell != q.ell:
        raise InvalidPair(f"{p} and {q} come from different universes")


def shared_class_count(p: SubPartition, q: SubPartition) -> int:
    _check_pair(p, q)
    return len(set(p.masks).intersection(q.masks))


def is_t_intersecting(p: SubPartition, q: SubPartition, t: int) -> bool:
    _check_pair(p, q)
    if not 1 <= t <= p.ell:
        raise InvalidParameters(f"t={t} must satisfy 1 <= t <= ell={p.ell}")
    return shared_class_count(p, q) >= t


def make_canonical_family(fixed: Sequence, universe: UniverseParams) -> Family:
    """All subpartitions of the universe that contain every class in ``fixed``."""
    _check_width(universe.n)
    fixed = [_as_class(c) for c in fixed]
    if not 1 <= len(fixed) <= universe.ell:
        raise InvalidFixedClasses(f"need 1..{universe.ell} fixed classes, got {len(fixed)}")
    used = 0
    for c in fixed:
        if c.k != universe.k or c.members[-1] > universe.n:
            raise InvalidFixedClasses(f"class {c} is not a {universe.k}-subset of [{universe.n}]")
        if used & c.mask:
            raise InvalidFixedClasses("fixed classes overlap")
        used |= c.mask
    rest = [e for e in range(1, universe.n + 1) if not used >> (e - 1) & 1]
    fixed_masks = tuple(c.mask for c in fixed)
    members = frozenset(
        _from_masks(fixed_masks + masks)
        for masks in _enumerate_masks(rest, universe.k, universe.ell - len(fixed))
    )
    return Family(universe, members)


def common_classes(f: Family) -> frozenset[KClass]:
    """Classes present in every member; nonempty iff the family is centered."""
    if not f.members:
        raise EmptyInput("common_classes of an empty family")
    it = iter(f.members)
    common = set(next(it).classes)
    for p in it:
        common.intersection_update(p.classes)
        if not common:
            break
    return frozenset(common)


def is_dominating(d: Iterable, f: Family) -> bool:
    """True iff every member of ``f`` contains at least one class of ``d``."""
    masks = set()
    for c in d:
        c = _as_class(c)
        if c.k != f.universe.k:
            raise InvalidParameters(f"class {c} does not have size k={f.universe.k}")
        masks.add(c.mask)
    return all(not masks.isdisjoint(p.masks) for p in f.members)


# ------------------------------------------------------------- text format

_FORMAT_RE = re.compile(r"^\{(\d+(?:,\d+)*(?:\|\d+(?:,\d+)*)*)\}$")


def format_subpartition(p: SubPartition) -> str:
    """``{1,2,3|4,5,6}``: ascending inside classes, classes by minimum."""
    return "{" + "|".join(str(c) for c in p.classes) + "}"


def parse_subpartition(text: str) -> SubPartition:
    m = _FORMAT_RE.match(text)
    if not m:
        raise ValueError(f"malformed subpartition {text!r}")
    classes = [tuple(int(x) for x in part.split(",")) for part in m.group(1).split("|")]
    return SubPartition(tuple(classes))
