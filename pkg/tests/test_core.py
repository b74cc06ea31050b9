import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from ekrlab.core import (
    Family,
    KClass,
    SubPartition,
    UniverseParams,
    binomial,
    canonical_family_size,
    common_classes,
    count_subpartitions,
    enumerate_subpartitions,
    format_subpartition,
    is_dominating,
    is_t_intersecting,
    make_canonical_family,
    parse_subpartition,
    shared_class_count,
)
from ekrlab.errors import (
    EmptyInput,
    InvalidFixedClasses,
    InvalidPair,
    InvalidParameters,
    UnsupportedUniverse,
)

from oracles import as_setsys, binom_factorial, brute_subpartitions, shared_scan


def sp(text):
    return parse_subpartition(text)


def test_binomial_values():
    assert binomial(4, 3) == 4
    assert binomial(12, 3) == binom_factorial(12, 3) == 220
    assert binomial(3, 5) == 0
    for n in range(30):
        assert binomial(n, 0) == 1
        for k in range(n + 3):
            assert binomial(n, k) == binom_factorial(n, k)


@pytest.mark.parametrize("n,ell,k,expected", [
    (6, 2, 3, 10), (10, 3, 3, 2800), (7, 2, 3, 70), (9, 3, 3, 280), (12, 3, 3, 61600),
])
def test_count_subpartitions_known(n, ell, k, expected):
    assert count_subpartitions(n, ell, k) == expected


def test_count_subpartitions_matches_brute_force():
    for n, k, ell in [(6, 3, 2), (7, 3, 2), (8, 2, 3), (7, 2, 2), (9, 3, 3), (8, 4, 2)]:
        assert count_subpartitions(n, ell, k) == len(brute_subpartitions(n, k, ell))


def test_count_edge_cases():
    for n in range(10):
        assert count_subpartitions(n, 0, 3) == 1
        assert count_subpartitions(n, 0, 0) == 1
    assert count_subpartitions(5, 2, 3) == 0
    with pytest.raises(InvalidParameters):
        count_subpartitions(-1, 1, 1)


@given(n=st.integers(0, 80), ell=st.integers(1, 8), k=st.integers(1, 8))
def test_recursion_identity(n, ell, k):
    if n < k:
        assert count_subpartitions(n, ell, k) == 0
        return
    assert ell * count_subpartitions(n, ell, k) == binomial(n, k) * count_subpartitions(n - k, ell - 1, k)


@pytest.mark.parametrize("args,expected", [
    ((9, 2, 3, 1), 20), ((11, 3, 3, 2), 10), ((7, 2, 3, 1), 4),
])
def test_canonical_family_size(args, expected):
    assert canonical_family_size(*args) == expected


def test_canonical_family_size_t_equals_ell():
    for n, k, ell in [(9, 3, 3), (12, 4, 2), (20, 3, 5)]:
        assert canonical_family_size(n, ell, k, ell) == 1
    with pytest.raises(InvalidParameters):
        canonical_family_size(5, 2, 3, 1)
    with pytest.raises(InvalidParameters):
        canonical_family_size(9, 2, 3, 3)


def test_universe_params_validation():
    with pytest.raises(InvalidParameters):
        UniverseParams(5, 3, 2)
    with pytest.raises(InvalidParameters):
        UniverseParams(9, 3, 2, t=3)
    with pytest.raises(InvalidParameters):
        UniverseParams(9, 0, 2)


def test_kclass_round_trip():
    c = KClass((5, 1, 3))
    assert c.members == (1, 3, 5)
    assert c.mask == 0b10101
    assert KClass.from_mask(c.mask) == c
    assert bin(c.mask).count("1") == c.k
    with pytest.raises(InvalidParameters):
        KClass((1, 1, 2))


def test_subpartition_canonical_order_and_validation():
    p = SubPartition.of((4, 5, 6), (3, 2, 1))
    assert format_subpartition(p) == "{1,2,3|4,5,6}"
    assert [c.min for c in p.classes] == [1, 4]
    with pytest.raises(InvalidParameters):
        SubPartition.of((1, 2, 3), (3, 4, 5))
    with pytest.raises(InvalidParameters):
        SubPartition.of((1, 2, 3), (4, 5))


def test_enumeration_examples():
    items = list(enumerate_subpartitions(UniverseParams(6, 3, 2)))
    assert len(items) == 10
    assert str(items[0]) == "{1,2,3|4,5,6}"
    assert [str(p) for p in enumerate_subpartitions(UniverseParams(3, 3, 1))] == ["{1,2,3}"]
    assert sum(1 for _ in enumerate_subpartitions(UniverseParams(7, 3, 2))) == 70


@pytest.mark.parametrize("n,k,ell", [(7, 3, 2), (9, 3, 3), (8, 2, 3), (9, 4, 2), (8, 2, 2)])
def test_enumeration_is_sorted_and_complete(n, k, ell):
    items = list(enumerate_subpartitions(UniverseParams(n, k, ell)))
    assert items == sorted(items)
    assert len(set(items)) == len(items)
    assert {as_setsys(p) for p in items} == brute_subpartitions(n, k, ell)


def test_enumeration_width_cap():
    with pytest.raises(UnsupportedUniverse):
        next(enumerate_subpartitions(UniverseParams(65, 3, 2)))


def test_shared_class_count_examples():
    p, q = sp("{1,2,3|4,5,6}"), sp("{1,2,3|4,5,7}")
    assert shared_class_count(p, q) == 1
    assert shared_class_count(p, p) == 2
    with pytest.raises(InvalidPair):
        shared_class_count(p, sp("{1,2,3}"))


def test_shared_class_count_random_pairs_against_scan():
    items = list(enumerate_subpartitions(UniverseParams(9, 3, 2)))
    rng = random.Random(7)
    for _ in range(500):
        p, q = rng.choice(items), rng.choice(items)
        assert shared_class_count(p, q) == shared_scan(p, q) == shared_class_count(q, p)


def test_is_t_intersecting_examples():
    p = sp("{1,2,3|4,5,6}")
    assert is_t_intersecting(p, p, 2)
    assert not is_t_intersecting(sp("{1,2,3}"), sp("{4,5,6}"), 1)
    with pytest.raises(InvalidParameters):
        is_t_intersecting(p, p, 3)


def test_intersection_matrix_n7():
    items = list(enumerate_subpartitions(UniverseParams(7, 3, 2)))
    for p in items:
        for q in items:
            oracle = len(as_setsys(p) & as_setsys(q)) >= 1
            assert is_t_intersecting(p, q, 1) == oracle


universes = st.sampled_from([(7, 3, 2), (9, 3, 3), (8, 2, 3), (10, 3, 3), (9, 2, 4)])


@st.composite
def pairs(draw):
    n, k, ell = draw(universes)
    items = _items(n, k, ell)
    return items[draw(st.integers(0, len(items) - 1))], items[draw(st.integers(0, len(items) - 1))]


_cache = {}


def _items(n, k, ell):
    key = (n, k, ell)
    if key not in _cache:
        _cache[key] = list(enumerate_subpartitions(UniverseParams(n, k, ell)))
    return _cache[key]


@given(pairs())
def test_intersection_properties(pq):
    p, q = pq
    assert shared_class_count(p, q) == shared_class_count(q, p)
    flags = [is_t_intersecting(p, q, t) for t in range(1, p.ell + 1)]
    assert flags == sorted(flags, reverse=True)  # monotone decreasing in t
    assert is_t_intersecting(p, q, p.ell) == (p == q)


@given(pairs())
def test_format_parse_round_trip(pq):
    p, _ = pq
    text = format_subpartition(p)
    assert " " not in text
    assert parse_subpartition(text) == p


@pytest.mark.parametrize("bad", ["{1,2,3| 4,5,6}", "1,2,3", "{1,2,3|}", "{}", "{1,2|2,3}"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_subpartition(bad)


def test_make_canonical_family_examples():
    u = UniverseParams(7, 3, 2)
    fam = make_canonical_family([(1, 2, 3)], u)
    expected = {f"{{1,2,3|{','.join(map(str, c))}}}" for c in combinations((4, 5, 6, 7), 3)}
    assert {str(p) for p in fam} == expected
    assert len(make_canonical_family([(1, 2, 3)], UniverseParams(9, 3, 2))) == 20
    assert len(make_canonical_family([(1, 2, 3), (4, 5, 6)], u)) == 1
    with pytest.raises(InvalidFixedClasses):
        make_canonical_family([(1, 2, 3), (3, 4, 5)], u)


@pytest.mark.parametrize("n,k,ell,t", [(9, 3, 2, 1), (10, 3, 3, 1), (11, 3, 3, 2), (12, 4, 3, 2), (9, 2, 4, 3)])
def test_canonical_family_is_t_clique_of_right_size(n, k, ell, t):
    u = UniverseParams(n, k, ell)
    fixed = [tuple(range(1 + i * k, 1 + (i + 1) * k)) for i in range(t)]
    fam = make_canonical_family(fixed, u)
    assert len(fam) == canonical_family_size(n, ell, k, t)
    members = list(fam)
    assert all(is_t_intersecting(a, b, t) for a in members for b in members)
    # filtering the whole universe gives the same family
    fixed_sets = {frozenset(c) for c in fixed}
    brute = {p for p in enumerate_subpartitions(u) if fixed_sets <= as_setsys(p)}
    assert brute == fam.members


def test_common_classes():
    u = UniverseParams(7, 3, 2)
    a = KClass((1, 2, 3))
    assert a in common_classes(make_canonical_family([a], u))
    assert common_classes(Family(u, frozenset(enumerate_subpartitions(u)))) == frozenset()
    p = sp("{1,2,3|4,5,6}")
    assert common_classes(Family(u, frozenset([p]))) == frozenset(p.classes)
    with pytest.raises(EmptyInput):
        common_classes(Family(u, frozenset()))


def test_is_dominating():
    u = UniverseParams(7, 3, 2)
    a = KClass((1, 2, 3))
    fam = make_canonical_family([a], u)
    assert is_dominating({a}, fam)
    assert not is_dominating(set(), fam)
    with pytest.raises(InvalidParameters):
        is_dominating({KClass((1, 2))}, fam)


def test_members_of_intersecting_family_dominate_it():
    u = UniverseParams(7, 3, 2)
    items = list(enumerate_subpartitions(u))
    rng = random.Random(3)
    checked = 0
    while checked < 50:
        # grow a random intersecting family greedily
        pool = items[:]
        rng.shuffle(pool)
        fam = []
        for p in pool:
            if all(is_t_intersecting(p, q, 1) for q in fam):
                fam.append(p)
        f = Family(u, frozenset(fam))
        for p in fam:
            assert is_dominating(p.classes, f)
        checked += 1


def test_family_rejects_foreign_members():
    with pytest.raises(InvalidParameters):
        Family(UniverseParams(6, 3, 2), frozenset([sp("{1,2,3|4,5,7}")]))
