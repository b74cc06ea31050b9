"""Atom-counting families and the pairwise EKR criterion.

Objects here are built from ``atoms_per_object`` atoms each, and two objects
intersect when they share an atom. If ``k^2 * P2 < P1``, where ``Ps`` counts
objects containing ``s`` fixed atoms, the objects through a single atom form
the largest intersecting family.

The criterion presumes atom-homogeneity: the number of objects containing a
fixed set of ``s`` atoms depends on ``s`` only. Each builtin family below
satisfies that; user families are taken on trust.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Any, Callable, Iterable, Optional

from .core import count_subpartitions
from .errors import InvalidParameters, NonMonotoneCriterion, OutOfRange, UnsupportedParams


@dataclass(frozen=True)
class DesignParams:
    """A t-(n, m, lambda) design, described by its parameters only."""

    strength: int
    n: int
    m: int
    lam: int  # the design index lambda

    def __post_init__(self):
        if not (1 <= self.strength <= self.m <= self.n) or self.lam < 1:
            raise InvalidParameters(f"need 1 <= strength <= m <= n and lambda >= 1, got {self}")


@dataclass(frozen=True)
class SequenceParams:
    n: int  # sequence length
    q: int  # alphabet size

    def __post_init__(self):
        if self.n < 1 or self.q < 2:
            raise InvalidParameters(f"need n >= 1 and q >= 2, got {self}")


@dataclass(frozen=True)
class KSetParams:
    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise InvalidParameters(f"need 1 <= k <= n, got {self}")


@dataclass(frozen=True)
class SubpartitionParams:
    n: int
    k: int
    ell: int

    def __post_init__(self):
        if self.k < 1 or self.ell < 1 or self.n < self.k * self.ell:
            raise InvalidParameters(f"need n >= k*ell with k, ell >= 1, got {self}")


@dataclass(frozen=True)
class CountingFamily:
    """``count_with_fixed_atoms(params, s)`` is P with s atoms fixed (s = 0: all objects)."""

    name: str
    atoms_per_object: Callable[[Any], int]
    count_with_fixed_atoms: Callable[[Any, int], Rational]
    make_params: Callable[..., Any]
    params_type: type


@dataclass(frozen=True)
class CriterionResult:
    lhs: Rational
    rhs: Rational
    holds: bool


def design_block_count(d: DesignParams, s: int) -> Fraction:
    """Blocks through a fixed s-set: lambda * C(n-s, t-s) / C(m-s, t-s)."""
    if not 0 <= s <= d.strength:
        raise OutOfRange(f"s={s} must lie in 0..{d.strength}")
    return Fraction(d.lam * comb(d.n - s, d.strength - s),
                    comb(d.m - s, d.strength - s))


def _ksets_count(p: KSetParams, s: int) -> int:
    if s > p.k:
        return 0
    return comb(p.n - s, p.k - s)


def _sequences_count(p: SequenceParams, s: int) -> int:
    if s > p.n:
        return 0
    return p.q ** (p.n - s)


def _designs_count(p: DesignParams, s: int) -> Rational:
    if s > p.m:
        return 0
    if s > p.strength:
        raise UnsupportedParams(f"block counts through {s} points are not determined by a "
                                f"{p.strength}-design")
    return design_block_count(p, s)


def _subpartitions_count(p: SubpartitionParams, s: int) -> int:
    if s > p.ell:
        return 0
    return count_subpartitions(p.n - s * p.k, p.ell - s, p.k)


KSETS = CountingFamily("ksets", lambda p: p.k, _ksets_count, KSetParams, KSetParams)
SEQUENCES = CountingFamily("integer_sequences", lambda p: p.n, _sequences_count,
                           SequenceParams, SequenceParams)
DESIGN_BLOCKS = CountingFamily("design_blocks", lambda p: p.m, _designs_count,
                               DesignParams, DesignParams)
SUBPARTITIONS = CountingFamily("subpartitions", lambda p: p.ell, _subpartitions_count,
                               SubpartitionParams, SubpartitionParams)


def builtin_families() -> list[CountingFamily]:
    return [KSETS, SEQUENCES, DESIGN_BLOCKS, SUBPARTITIONS]


def get_family(name: str) -> CountingFamily:
    aliases = {"sequences": "integer_sequences", "designs": "design_blocks"}
    name = aliases.get(name, name)
    for fam in builtin_families():
        if fam.name == name:
            return fam
    raise KeyError(name)


def ekr_criterion_holds(family: CountingFamily, params) -> CriterionResult:
    """k^2 * P(2 atoms fixed) < P(1 atom fixed), compared exactly."""
    k = family.atoms_per_object(params)
    if k < 2:
        raise UnsupportedParams(f"{family.name}: the criterion needs at least two atoms per object")
    try:
        lhs = k * k * family.count_with_fixed_atoms(params, 2)
        rhs = family.count_with_fixed_atoms(params, 1)
    except (ValueError, ZeroDivisionError) as exc:
        raise UnsupportedParams(f"{family.name}: counts undefined for {params}") from exc
    return CriterionResult(lhs, rhs, lhs < rhs)


def criterion_threshold(family: CountingFamily, params_template: dict, varying: str,
                        values: Iterable[int]) -> Optional[int]:
    """Smallest value of ``varying`` for which the criterion holds.

    Every tested value is evaluated; a value where the criterion fails after
    one where it held raises :class:`NonMonotoneCriterion`.
    """
    first = None
    for value in values:
        params = family.make_params(**{**params_template, varying: value})
        holds = ekr_criterion_holds(family, params).holds
        if holds and first is None:
            first = value
        elif not holds and first is not None:
            raise NonMonotoneCriterion(
                f"{family.name}: criterion holds at {varying}={first} but fails at {value}"
            )
    return first
