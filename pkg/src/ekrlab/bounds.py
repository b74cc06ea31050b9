"""Non-centered family bounds and the inequalities that beat them.

A family is *centered* when one class occurs in every member. The three
lemma bounds cap the size of non-centered intersecting families; the
theorems follow once the canonical family is strictly larger than the
applicable bound. Everything here is exact integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

from .core import UniverseParams, canonical_family_size, count_subpartitions
from .errors import InvalidParameters, OutOfRange, OutOfTheoremScope


def _require(cond: bool, msg: str, exc=InvalidParameters):
    if not cond:
        raise exc(msg)


def lemma1_bound(n: int, k: int, ell: int) -> int:
    """ell^2 * U(n - 2k, ell - 2, k), valid for every n >= k*ell."""
    _require(ell >= 2 and k >= 1 and n >= k * ell, f"lemma 1 needs ell >= 2, n >= k*ell; got n={n} k={k} ell={ell}")
    return ell * ell * count_subpartitions(n - 2 * k, ell - 2, k)


def in_small_window(n: int, k: int, ell: int) -> bool:
    """k*ell + 1 <= n <= k*(ell + 1) - 1"""
    return k * ell + 1 <= n <= k * (ell + 1) - 1


def lemma2_bound(n: int, k: int, ell: int) -> int:
    """ell*(ell - 1) * U(n - 2k, ell - 2, k), only inside the small-n window."""
    _require(ell >= 2, f"lemma 2 needs ell >= 2, got {ell}")
    _require(in_small_window(n, k, ell),
             f"lemma 2 needs {k * ell + 1} <= n <= {k * (ell + 1) - 1}, got n={n}", OutOfRange)
    return ell * (ell - 1) * count_subpartitions(n - 2 * k, ell - 2, k)


def lemma3_bound(n: int, k: int, ell: int, t: int) -> int:
    """(ell - t + 1) * C(ell, t) * U(n - (t+1)k, ell - (t+1), k) for t-intersecting families."""
    _require(1 <= t <= ell - 1 and k >= 1 and n >= k * ell,
             f"lemma 3 needs 1 <= t <= ell-1, n >= k*ell; got n={n} k={k} ell={ell} t={t}")
    return (ell - t + 1) * comb(ell, t) * count_subpartitions(n - (t + 1) * k, ell - t - 1, k)


@dataclass(frozen=True)
class InequalityCheck:
    lhs: int
    rhs: int
    holds: bool
    case: Optional[str] = None


def theorem1_inequality(n: int, k: int, ell: int) -> InequalityCheck:
    """Compare the lemma multiplier with C(n - k, k).

    For n in the small window the multiplier is ell*(ell-1)^2 (lemma 2),
    otherwise ell^2*(ell-1) (lemma 1); ``holds`` is ``lhs <= rhs``.
    """
    if k < 3 or ell < 2:
        raise OutOfTheoremScope(f"theorem 1 needs k >= 3 and ell >= 2, got k={k} ell={ell}")
    if n <= k * ell:
        raise OutOfTheoremScope(f"theorem 1 inequality needs n >= k*ell + 1, got n={n}")
    if n <= k * (ell + 1) - 1:
        case, lhs = "small_n", ell * (ell - 1) ** 2
    else:
        case, lhs = "large_n", ell * ell * (ell - 1)
    rhs = comb(n - k, k)
    return InequalityCheck(lhs, rhs, lhs <= rhs, case)


def theorem2_condition(n: int, k: int, ell: int, t: int) -> InequalityCheck:
    """(ell-t+1)(ell-t) C(ell, t) < C(n - t*k, k), strictly."""
    _require(1 <= t <= ell - 1, f"need 1 <= t <= ell-1, got t={t} ell={ell}")
    lhs = (ell - t + 1) * (ell - t) * comb(ell, t)
    rhs = comb(n - t * k, k) if n >= t * k else 0
    return InequalityCheck(lhs, rhs, lhs < rhs)


def theorem2_condition_closed(n: int, k: int, ell: int, t: int) -> bool:
    """The condition at (n - j*k, ell - j, t - j) for every j = 0..t-1.

    Removing a class shared by the whole family drops n by k and ell, t by
    one; the argument needs the comparison to hold (strictly) at each step
    down to the 1-intersecting case.
    """
    _require(1 <= t <= ell - 1, f"need 1 <= t <= ell-1, got t={t} ell={ell}")
    return all(theorem2_condition(n - j * k, k, ell - j, t - j).holds for j in range(t))


def sufficient_n_theorem2(k: int, ell: int, t: int) -> Optional[int]:
    """k*(ell + t) when k >= t + 2, else None. Not optimal."""
    _require(1 <= t <= ell - 1, f"need 1 <= t <= ell-1, got t={t} ell={ell}")
    return k * (ell + t) if k >= t + 2 else None


@dataclass(frozen=True)
class BoundReport:
    params: UniverseParams
    canonical_size: int
    non_centered_bound: int
    bound_source: str
    inequality_holds: bool


def applicable_bound(n: int, k: int, ell: int, t: int = 1) -> tuple[str, int]:
    """The sharpest lemma bound for these parameters, with its name."""
    if t >= 2:
        return "lemma3", lemma3_bound(n, k, ell, t)
    if in_small_window(n, k, ell):
        return "lemma2", lemma2_bound(n, k, ell)
    return "lemma1", lemma1_bound(n, k, ell)


def bound_report(params: UniverseParams) -> BoundReport:
    n, k, ell, t = params.n, params.k, params.ell, params.t
    if t >= ell:
        raise InvalidParameters(f"no non-centered bound for t={t} >= ell={ell}")
    source, bound = applicable_bound(n, k, ell, t)
    canonical = canonical_family_size(n, ell, k, t)
    return BoundReport(params, canonical, bound, source, canonical > bound)
