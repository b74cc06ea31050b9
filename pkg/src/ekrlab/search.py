"""Exact clique search over t-intersection graphs of subpartitions.

A family is t-intersecting exactly when its members form a clique in the
graph whose edges join subpartitions sharing at least ``t`` classes, so the
largest such family is a maximum clique.

Search effort is metered in branch nodes rather than seconds: a wall-clock
budget is turned into a node cap (``budget * nodes_per_second``, or the
``EKRLAB_NODE_CAP`` environment variable) so that results, including the
``exhausted`` flag, are reproducible across machines.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .core import (
    Family,
    SubPartition,
    UniverseParams,
    _check_width,
    _enumerate_masks,
    _from_masks,
    canonical_family_size,
    common_classes,
    count_subpartitions,
    make_canonical_family,
)
from .errors import IncompleteSearch, InconclusiveThreshold, InvalidParameters, TooLargeUniverse

NODE_CAP_ENV = "EKRLAB_NODE_CAP"


@dataclass(frozen=True)
class SearchConfig:
    graph_vertex_cap: int = 100_000
    maximal_clique_cap: int = 5_000
    # measured range of the kernels below is ~5k (dense, 2800 vertices) to
    # ~80k (small local graphs) nodes/s; this only scales budget -> node cap
    nodes_per_second: int = 10_000
    sparse_density: float = 0.01


DEFAULT_CONFIG = SearchConfig()


def node_cap(budget: float, config: SearchConfig = DEFAULT_CONFIG) -> int:
    env = os.environ.get(NODE_CAP_ENV)
    if env:
        return int(env)
    return max(1, int(budget * config.nodes_per_second))


@dataclass(frozen=True)
class IntersectionGraph:
    universe: UniverseParams
    t: int
    vertices: tuple[SubPartition, ...]
    neighbors: tuple[tuple[int, ...], ...]
    _adjacency: list = field(default_factory=list, repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return sum(map(len, self.neighbors)) // 2

    @property
    def density(self) -> float:
        v = self.order
        return 0.0 if v < 2 else 2 * self.edge_count / (v * (v - 1))

    @property
    def adjacency(self) -> list[int]:
        """Bit-mask rows over vertex indices, built on first use."""
        if not self._adjacency and self.vertices:
            self._adjacency.extend(_rows(self.neighbors))
        return self._adjacency

    def index_of(self, p: SubPartition) -> int:
        return self._index()[p]

    def _index(self) -> dict:
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {p: i for i, p in enumerate(self.vertices)}
            object.__setattr__(self, "_index_cache", cache)
        return cache

    def family(self, indices) -> Family:
        return Family(self.universe, frozenset(self.vertices[i] for i in indices))


def _rows(neighbors) -> list[int]:
    rows = []
    for nbrs in neighbors:
        row = 0
        for u in nbrs:
            row |= 1 << u
        rows.append(row)
    return rows


@dataclass(frozen=True)
class CliqueResult:
    size: int
    witness: Family
    exhausted: bool
    elapsed: float
    nodes: int = 0


@dataclass
class TheoremReport:
    params: UniverseParams
    universe_size: int
    canonical_size: int
    max_size: int
    max_is_canonical_size: bool
    all_maxima_canonical: Optional[bool] = None
    n0_witness: Optional[int] = None
    exhausted: bool = True
    maxima_count: Optional[int] = None
    elapsed: float = 0.0

    @property
    def inconclusive(self) -> bool:
        return not self.exhausted


# ---------------------------------------------------------------- graph build

def build_intersection_graph(universe: UniverseParams, t: Optional[int] = None,
                             config: SearchConfig = DEFAULT_CONFIG) -> IntersectionGraph:
    t = universe.t if t is None else t
    if not 1 <= t <= universe.ell:
        raise InvalidParameters(f"t={t} must satisfy 1 <= t <= ell={universe.ell}")
    _check_width(universe.n)
    size = count_subpartitions(universe.n, universe.ell, universe.k)
    if size > config.graph_vertex_cap:
        raise TooLargeUniverse(f"{size} vertices exceeds the cap of {config.graph_vertex_cap}")

    masks = list(_enumerate_masks(range(1, universe.n + 1), universe.k, universe.ell))
    # vertices sharing >= t classes share some t-subset of classes
    buckets: dict[tuple[int, ...], list[int]] = {}
    keys = []
    for i, ms in enumerate(masks):
        own = list(combinations(ms, t))
        keys.append(own)
        for key in own:
            buckets.setdefault(key, []).append(i)
    neighbors = []
    for i, own in enumerate(keys):
        nbrs = set()
        for key in own:
            nbrs.update(buckets[key])
        nbrs.discard(i)
        neighbors.append(tuple(sorted(nbrs)))
    vertices = tuple(_from_masks(ms) for ms in masks)
    return IntersectionGraph(universe.with_t(t), t, vertices, tuple(neighbors))


# ------------------------------------------------------------ bitset kernels

class _NodeCapReached(Exception):
    pass


class _Meter:
    def __init__(self, cap: int):
        self.cap = cap
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.cap:
            raise _NodeCapReached


def _color_sort(P: int, adj: list[int], kmin: int) -> tuple[list[int], list[int]]:
    """Greedy sequential colouring of P in index order.

    Returns the vertices of colour >= kmin with their colours, ascending by
    colour and by index within a colour. Lower colours can never be branched
    on, so they are not listed.
    """
    verts: list[int] = []
    colors: list[int] = []
    color = 0
    U = P
    while U:
        color += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q ^= low
            Q &= ~adj[v]
            U ^= low
            if color >= kmin:
                verts.append(v)
                colors.append(color)
    return verts, colors


def _color_bound(P: int, adj: list[int]) -> int:
    color = 0
    U = P
    while U:
        color += 1
        Q = U
        while Q:
            low = Q & -Q
            Q ^= low
            Q &= ~adj[low.bit_length() - 1]
            U ^= low
    return color


class _MaxCliqueSearch:
    """Branch and bound with colour bounds on a bitset graph.

    Branches on vertices in descending colour, ties by descending index, and
    records a new incumbent only when strictly larger, so the witness is the
    first maximum met in that fixed order.
    """

    def __init__(self, adj: list[int], meter: _Meter, best: int, witness: list[int]):
        self.adj = adj
        self.meter = meter
        self.best = best
        self.witness = witness

    def expand(self, R: list[int], P: int):
        self.meter.tick()
        adj = self.adj
        verts, colors = _color_sort(P, adj, self.best - len(R) + 1)
        for idx in range(len(verts) - 1, -1, -1):
            if len(R) + colors[idx] <= self.best:
                return
            v = verts[idx]
            R.append(v)
            NP = P & adj[v]
            if NP:
                self.expand(R, NP)
            elif len(R) > self.best:
                self.best = len(R)
                self.witness = list(R)
            R.pop()
            P &= ~(1 << v)


def _local_graph(g: IntersectionGraph, center: int, members: list[int]) -> list[int]:
    """Bitset rows of the subgraph induced on ``members`` (local indices)."""
    pos = {u: i for i, u in enumerate(members)}
    rows = []
    for u in members:
        row = 0
        for w in g.neighbors[u]:
            j = pos.get(w)
            if j is not None:
                row |= 1 << j
        rows.append(row)
    return rows


def max_clique(g: IntersectionGraph, budget: float = 60.0,
               seed_lower_bound: Optional[Family] = None,
               cap: Optional[int] = None,
               config: SearchConfig = DEFAULT_CONFIG) -> CliqueResult:
    """Maximum clique of ``g``; ``exhausted`` is False if the node cap hit first.

    A seed family (which must be a clique) is taken as the initial incumbent,
    so only strictly larger cliques are searched for. Sparse graphs (density
    below ``config.sparse_density``) are solved one closed neighbourhood at a
    time instead of on global bitsets.
    """
    start = time.perf_counter()
    meter = _Meter(node_cap(budget, config) if cap is None else cap)
    if seed_lower_bound is not None and len(seed_lower_bound):
        witness = sorted(g.index_of(p) for p in seed_lower_bound)
        if not _is_clique(g, witness):
            raise InvalidParameters("seed family is not a clique of the graph")
    elif g.order:
        witness = [0]
    else:
        witness = []
    best = len(witness)

    exhausted = True
    try:
        if g.order == 0:
            pass
        elif g.density < config.sparse_density:
            best, witness, exhausted = _max_clique_sparse(g, meter, best, witness)
        else:
            search = _MaxCliqueSearch(g.adjacency, meter, best, witness)
            try:
                search.expand([], (1 << g.order) - 1)
            finally:
                best, witness = search.best, search.witness
    except _NodeCapReached:
        exhausted = False
    return CliqueResult(best, g.family(witness), exhausted,
                        time.perf_counter() - start, meter.nodes)


def _max_clique_sparse(g, meter, best, witness):
    """Returns (best, witness, exhausted)."""
    try:
        for v in range(g.order):
            later = [u for u in g.neighbors[v] if u > v]
            if 1 + len(later) <= best:
                continue
            rows = _local_graph(g, v, later)
            search = _MaxCliqueSearch(rows, meter, best - 1, None)
            try:
                search.expand([], (1 << len(later)) - 1)
            finally:
                if search.witness is not None and search.best + 1 > best:
                    best = search.best + 1
                    witness = [v] + [later[i] for i in search.witness]
    except _NodeCapReached:
        return best, sorted(witness), False
    return best, sorted(witness), True


def _is_clique(g: IntersectionGraph, idx) -> bool:
    idx = list(idx)
    for a in range(len(idx)):
        nb = set(g.neighbors[idx[a]])
        if any(idx[b] not in nb for b in range(a + 1, len(idx))):
            return False
    return True


# ------------------------------------------------------- maximal cliques (BK)

class _BronKerbosch:
    """Pivoted Bron-Kerbosch on local bitsets with pluggable pruning."""

    def __init__(self, adj: list[int], meter: _Meter, prune, report):
        self.adj = adj
        self.meter = meter
        self.prune = prune
        self.report = report

    def expand(self, R: list[int], P: int, X: int):
        self.meter.tick()
        if not P:
            if not X:
                self.report(R)
            return
        if self.prune(R, P):
            return
        adj = self.adj
        # pivot maximising |P & N(u)|; ties by lowest index
        best_u, best_cnt = -1, -1
        PX = P | X
        while PX:
            low = PX & -PX
            u = low.bit_length() - 1
            PX ^= low
            cnt = (P & adj[u]).bit_count()
            if cnt > best_cnt:
                best_u, best_cnt = u, cnt
        branch = P & ~adj[best_u]
        while branch:
            low = branch & -branch
            v = low.bit_length() - 1
            branch ^= low
            R.append(v)
            self.expand(R, P & adj[v], X & adj[v])
            R.pop()
            P ^= low
            X |= low


def _neighbourhood_split(g: IntersectionGraph, v: int):
    """Local index space for the cliques whose smallest vertex is ``v``."""
    nbrs = list(g.neighbors[v])
    rows = _local_graph(g, v, nbrs)
    P = X = 0
    for i, u in enumerate(nbrs):
        if u > v:
            P |= 1 << i
        else:
            X |= 1 << i
    return nbrs, rows, P, X


def enumerate_maximum_cliques(g: IntersectionGraph, target_size: int,
                              budget: float = 60.0, cap: Optional[int] = None,
                              config: SearchConfig = DEFAULT_CONFIG) -> list[Family]:
    """All cliques of exactly ``target_size`` (the proven maximum).

    Raises :class:`IncompleteSearch` if the node cap is reached. Families are
    returned ordered by their sorted vertex-index lists.
    """
    meter = _Meter(node_cap(budget, config) if cap is None else cap)
    if target_size <= 0:
        return [Family(g.universe, frozenset())] if g.order == 0 else []
    found: list[list[int]] = []
    try:
        for v in range(g.order):
            if len(g.neighbors[v]) + 1 < target_size:
                continue
            if target_size == 1:
                if not g.neighbors[v]:
                    found.append([v])
                continue
            nbrs, rows, P, X = _neighbourhood_split(g, v)
            if P.bit_count() + 1 < target_size:
                continue

            def prune(R, P, rows=rows):
                return 1 + len(R) + _color_bound(P, rows) < target_size

            def report(R, v=v, nbrs=nbrs):
                if 1 + len(R) == target_size:
                    found.append(sorted([v] + [nbrs[i] for i in R]))

            _BronKerbosch(rows, meter, prune, report).expand([], P, X)
    except _NodeCapReached:
        raise IncompleteSearch(
            f"maximum-clique enumeration stopped after {meter.cap} nodes"
        ) from None
    found.sort()
    return [g.family(c) for c in found]


def max_non_centered_family(universe: UniverseParams, t: Optional[int] = None,
                            budget: float = 60.0, cap: Optional[int] = None,
                            config: SearchConfig = DEFAULT_CONFIG,
                            graph: Optional[IntersectionGraph] = None) -> CliqueResult:
    """Largest t-intersecting family with no class common to all members.

    Every non-centered clique lies in a maximal clique that is non-centered
    too (common classes only shrink as a family grows), so it suffices to
    scan maximal cliques. Branches are cut when every clique they can reach
    keeps some class of the current partial clique, or when the colour bound
    cannot beat the incumbent. Singleton families count as centered, so 0 is
    a legitimate answer.
    """
    start = time.perf_counter()
    t = universe.t if t is None else t
    size = count_subpartitions(universe.n, universe.ell, universe.k)
    if size > config.maximal_clique_cap:
        raise TooLargeUniverse(f"{size} vertices exceeds the maximal-clique cap "
                               f"of {config.maximal_clique_cap}")
    g = graph if graph is not None else build_intersection_graph(universe, t, config)
    meter = _Meter(node_cap(budget, config) if cap is None else cap)
    best = [0, []]
    exhausted = True
    try:
        for v in range(g.order):
            if len(g.neighbors[v]) < best[0]:
                continue
            nbrs, rows, P, X = _neighbourhood_split(g, v)
            if P.bit_count() + 1 <= best[0]:
                continue
            # local bitsets of neighbours lacking each class of v
            v_masks = g.vertices[v].masks
            lacking = {}
            for c in v_masks:
                bits = 0
                for i, u in enumerate(nbrs):
                    if c not in g.vertices[u].masks:
                        bits |= 1 << i
                lacking[c] = bits

            def prune(R, P, rows=rows, lacking=lacking, v=v, nbrs=nbrs):
                if 1 + len(R) + _color_bound(P, rows) <= best[0]:
                    return True
                common = set(lacking)
                for i in R:
                    common.intersection_update(g.vertices[nbrs[i]].masks)
                # a class kept by R and by all of P survives in every maximal clique here
                return any(not (P & lacking[c]) for c in common)

            def report(R, v=v, nbrs=nbrs):
                members = [v] + [nbrs[i] for i in R]
                if len(members) <= best[0]:
                    return
                common = set(g.vertices[v].masks)
                for u in members:
                    common.intersection_update(g.vertices[u].masks)
                if not common:
                    best[0] = len(members)
                    best[1] = sorted(members)

            _BronKerbosch(rows, meter, prune, report).expand([], P, X)
    except _NodeCapReached:
        exhausted = False
    return CliqueResult(best[0], g.family(best[1]), exhausted,
                        time.perf_counter() - start, meter.nodes)


# ------------------------------------------------------------ verification

def is_canonical_family(f: Family, t: int) -> bool:
    """True iff ``f`` equals the family of all subpartitions fixing t of its classes."""
    if not f.members:
        return False
    common = sorted(common_classes(f))
    if len(common) < t:
        return False
    return f.members == make_canonical_family(common[:t], f.universe).members


def verify_theorem(universe: UniverseParams, budget: float = 60.0, all_maxima: bool = True,
                   cap: Optional[int] = None, config: SearchConfig = DEFAULT_CONFIG,
                   graph: Optional[IntersectionGraph] = None) -> TheoremReport:
    """Exact largest t-intersecting family versus the canonical family size.

    The budget applies separately to the maximum search and to the
    enumeration of all maxima. A run that hits its node cap is reported with
    ``exhausted=False``; its ``max_size`` is then only a lower bound.
    """
    start = time.perf_counter()
    t = universe.t
    g = graph if graph is not None else build_intersection_graph(universe, t, config)
    canonical = canonical_family_size(universe.n, universe.ell, universe.k, t)
    seed = make_canonical_family(g.vertices[0].classes[:t], universe)
    result = max_clique(g, budget, seed_lower_bound=seed, cap=cap, config=config)
    report = TheoremReport(
        params=universe,
        universe_size=count_subpartitions(universe.n, universe.ell, universe.k),
        canonical_size=canonical,
        max_size=result.size,
        max_is_canonical_size=result.exhausted and result.size == canonical,
        exhausted=result.exhausted,
    )
    if all_maxima and result.exhausted:
        try:
            maxima = enumerate_maximum_cliques(g, result.size, budget, cap=cap, config=config)
        except IncompleteSearch:
            report.exhausted = False
        else:
            report.maxima_count = len(maxima)
            report.all_maxima_canonical = all(is_canonical_family(f, t) for f in maxima)
    report.elapsed = time.perf_counter() - start
    return report


def sweep_theorem(k: int, ell: int, t: int, n_min: int, n_max: int, budget: float = 60.0,
                  all_maxima: bool = False, cap: Optional[int] = None,
                  config: SearchConfig = DEFAULT_CONFIG) -> list[TheoremReport]:
    """verify_theorem for every n in [max(n_min, k*ell), n_max].

    ``n0_witness`` is filled in on every report when all runs are conclusive.
    """
    reports = []
    for n in range(max(n_min, k * ell), n_max + 1):
        reports.append(verify_theorem(UniverseParams(n, k, ell, t), budget, all_maxima,
                                      cap=cap, config=config))
    try:
        threshold = empirical_threshold(reports)
    except InconclusiveThreshold:
        threshold = None
    for r in reports:
        r.n0_witness = threshold
    return reports


def empirical_threshold(reports: list[TheoremReport]) -> Optional[int]:
    """Smallest n from which every tested report shows max = canonical."""
    if any(r.inconclusive for r in reports):
        bad = [r.params.n for r in reports if r.inconclusive]
        raise InconclusiveThreshold(f"inconclusive search at n = {bad}")
    threshold = None
    for r in sorted(reports, key=lambda r: r.params.n, reverse=True):
        if not r.max_is_canonical_size:
            break
        threshold = r.params.n
    return threshold


def find_empirical_threshold(k: int, ell: int, t: int, n_min: int, n_max: int,
                             budget: float = 60.0, cap: Optional[int] = None,
                             config: SearchConfig = DEFAULT_CONFIG) -> Optional[int]:
    """Evidence for n0(k, ell, t) inside the tested window only; None if not reached."""
    return empirical_threshold(sweep_theorem(k, ell, t, n_min, n_max, budget, cap=cap,
                                             config=config))
