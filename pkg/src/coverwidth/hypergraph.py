"""Hypergraphs, weights, tree decompositions, schemes and coverwidth.

A vertex set is a ``frozenset``; :meth:`Hypergraph.sorted` gives its canonical
listing in vertex order.  Graph edges of a scheme are two-element frozensets.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import InvalidDecomposition, InvalidScheme, SizeBoundExceeded
from .relational import Structure

COVERWIDTH_VERTEX_BOUND = 10
ORACLE_VERTEX_BOUND = 6


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        edges = frozenset(frozenset(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex")
        vs = set(self.vertices)
        for e in edges:
            if not e <= vs:
                raise ValueError(f"edge {sorted(e)} is not a subset of the vertices")

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @property
    def covered(self) -> frozenset:
        """Vertices that lie in at least one edge."""
        return frozenset().union(*self.edges)

    def sorted(self, xs: Iterable) -> tuple:
        pos = _positions(self.vertices)
        return tuple(sorted(xs, key=pos.__getitem__))

    def sorted_edges(self) -> list:
        pos = _positions(self.vertices)
        return sorted(self.edges, key=lambda e: (len(e), sorted(pos[v] for v in e)))


@lru_cache(maxsize=1024)
def _positions(vertices: tuple) -> dict:
    return {v: i for i, v in enumerate(vertices)}


def hypergraph_of(a: Structure) -> Hypergraph:
    """One edge per tuple of ``a`` (its element set); vertices are the universe."""
    edges = {frozenset(t) for _, t in a.tuples()}
    return Hypergraph(a.universe, frozenset(edges))


def primal_edges(h: Hypergraph) -> frozenset:
    pairs = set()
    for e in h.edges:
        for u, v in itertools.combinations(e, 2):
            pairs.add(frozenset((u, v)))
    return frozenset(pairs)


def k_unions(h: Hypergraph, k: int) -> frozenset:
    """All unions of at most ``k`` edges, including the empty union."""
    if k < 0:
        raise ValueError("k must be non-negative")
    result = {frozenset()}
    frontier = {frozenset()}
    for _ in range(k):
        frontier = {u | e for u in frontier for e in h.edges} - result
        if not frontier:
            break
        result |= frontier
    return frozenset(result)


def weight(h: Hypergraph, xs: Iterable) -> int:
    """Least number of edges whose union contains the edge-covered part of ``xs``."""
    xs = frozenset(xs)
    if not xs <= h.vertex_set:
        raise ValueError(f"{sorted(xs - h.vertex_set)} are not vertices of the hypergraph")
    return _weight(h, xs)


@lru_cache(maxsize=200_000)
def _weight(h: Hypergraph, xs: frozenset) -> int:
    target = xs & h.covered
    if not target:
        return 0
    pos = _positions(h.vertices)
    pieces = {e & target for e in h.edges}
    pieces.discard(frozenset())
    pieces = sorted(pieces, key=lambda p: (-len(p), sorted(pos[v] for v in p)))
    for r in range(1, len(pieces) + 1):
        for combo in itertools.combinations(pieces, r):
            if frozenset().union(*combo) == target:
                return r
    raise AssertionError("edges restricted to their own union always cover it")


# -- tree decompositions ---------------------------------------------------


@dataclass(frozen=True)
class TreeDecomposition:
    nodes: tuple
    tree_edges: frozenset
    bags: Mapping

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "tree_edges", frozenset(frozenset(p) for p in self.tree_edges))
        object.__setattr__(self, "bags", {n: frozenset(b) for n, b in dict(self.bags).items()})

    def neighbours(self) -> dict:
        adj = {n: set() for n in self.nodes}
        for p in self.tree_edges:
            u, v = tuple(p)
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def __hash__(self):
        return hash((self.nodes, self.tree_edges, frozenset(self.bags.items())))


def _check_tree(d: TreeDecomposition) -> None:
    nodes = set(d.nodes)
    if len(nodes) != len(d.nodes):
        raise InvalidDecomposition("duplicate tree node")
    if set(d.bags) != nodes:
        raise InvalidDecomposition("every node needs exactly one bag")
    for p in d.tree_edges:
        if len(p) != 2 or not p <= nodes:
            raise InvalidDecomposition(f"bad tree edge {sorted(p)}")
    if not nodes:
        return
    if len(d.tree_edges) != len(nodes) - 1 or len(_reachable(d.nodes[0], d.neighbours())) != len(nodes):
        raise InvalidDecomposition("the node graph is not a tree")


def _reachable(start, adj, allowed=None) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen and (allowed is None or w in allowed):
                seen.add(w)
                queue.append(w)
    return seen


def is_tree_decomposition(h: Hypergraph, d: TreeDecomposition) -> bool:
    """Check the three decomposition conditions.

    Raises :class:`InvalidDecomposition` when ``d`` is not a tree at all or
    a bag mentions a non-vertex; returns ``False`` when it is a tree whose
    bags fail a condition.
    """
    _check_tree(d)
    vs = h.vertex_set
    for n, bag in d.bags.items():
        if not bag <= vs:
            raise InvalidDecomposition(f"bag of {n!r} mentions non-vertices {sorted(bag - vs)}")
    if frozenset().union(*d.bags.values()) != vs:
        return False
    for e in h.edges:
        if not any(e <= bag for bag in d.bags.values()):
            return False
    adj = d.neighbours()
    for v in h.vertices:
        holding = {n for n in d.nodes if v in d.bags[n]}
        if _reachable(next(iter(holding)), adj, holding) != holding:
            return False
    return True


def decomposition_weight(h: Hypergraph, d: TreeDecomposition) -> int:
    if not is_tree_decomposition(h, d):
        raise InvalidDecomposition("not a tree decomposition of the hypergraph")
    return max((weight(h, bag) for bag in d.bags.values()), default=0)


# -- schemes ---------------------------------------------------------------


@dataclass(frozen=True)
class SchemeGraph:
    graph_edges: frozenset
    ordering: tuple

    def __post_init__(self):
        object.__setattr__(self, "graph_edges", frozenset(frozenset(p) for p in self.graph_edges))
        object.__setattr__(self, "ordering", tuple(self.ordering))

    def lower_neighbours(self) -> dict:
        pos = {v: i for i, v in enumerate(self.ordering)}
        lower = {v: set() for v in self.ordering}
        for p in self.graph_edges:
            u, v = sorted(p, key=pos.__getitem__)
            lower[v].add(u)
        return lower

    def candidate_cliques(self) -> list:
        """``{v} ∪ lower neighbours of v`` for each v, in ordering order."""
        lower = self.lower_neighbours()
        return [frozenset(lower[v]) | {v} for v in self.ordering]


def _check_scheme_shape(h: Hypergraph, g: SchemeGraph) -> None:
    if sorted(map(repr, g.ordering)) != sorted(map(repr, h.vertices)) or len(set(g.ordering)) != len(g.ordering):
        raise InvalidScheme("the ordering is not a permutation of the vertices")
    vs = h.vertex_set
    for p in g.graph_edges:
        if len(p) != 2 or not p <= vs:
            raise InvalidScheme(f"bad graph edge {sorted(p)}")


def is_perfect_elimination_ordering(graph_edges, ordering) -> bool:
    """Lower neighbours of every vertex are pairwise adjacent."""
    g = SchemeGraph(graph_edges, ordering)
    for v, lower in g.lower_neighbours().items():
        for a, b in itertools.combinations(lower, 2):
            if frozenset((a, b)) not in g.graph_edges:
                return False
    return True


def is_scheme(h: Hypergraph, g: SchemeGraph) -> bool:
    _check_scheme_shape(h, g)
    if not is_perfect_elimination_ordering(g.graph_edges, g.ordering):
        return False
    return primal_edges(h) <= g.graph_edges


def scheme_weight(h: Hypergraph, g: SchemeGraph) -> int:
    if not is_scheme(h, g):
        raise InvalidScheme("not a scheme of the hypergraph")
    return max((weight(h, c) for c in g.candidate_cliques()), default=0)


def fill_in(vertices: Sequence, base_edges: Iterable, ordering: Sequence) -> frozenset:
    """Smallest supergraph of ``base_edges`` for which ``ordering`` is perfect.

    Vertices are processed from last to first; the earlier neighbours of each
    are made pairwise adjacent.  Edges added while processing a vertex only
    touch earlier vertices, so one pass reaches the fixpoint.
    """
    if sorted(map(repr, vertices)) != sorted(map(repr, ordering)):
        raise InvalidScheme("the ordering is not a permutation of the vertices")
    pos = {v: i for i, v in enumerate(ordering)}
    adj = {v: set() for v in vertices}
    for p in base_edges:
        u, v = tuple(p)
        adj[u].add(v)
        adj[v].add(u)
    for v in reversed(ordering):
        lower = [u for u in adj[v] if pos[u] < pos[v]]
        for a, b in itertools.combinations(lower, 2):
            adj[a].add(b)
            adj[b].add(a)
    return frozenset(frozenset((u, w)) for u in adj for w in adj[u])


def fill_in_scheme(h: Hypergraph, ordering: Sequence) -> SchemeGraph:
    return SchemeGraph(fill_in(h.vertices, primal_edges(h), ordering), ordering)


# -- coverwidth ------------------------------------------------------------


def _elimination_optimum(
    h: Hypergraph,
    measure: Callable[[frozenset], int],
    blocks: Optional[Sequence[Sequence]] = None,
) -> tuple[int, tuple]:
    """Minimise, over orderings, the largest measure of a fill-in candidate clique.

    Dynamic programming over the set of vertices already placed at the end of
    the ordering.  With the fill-in, the candidate clique of a vertex ``v``
    placed before the set ``S`` is ``v`` plus every vertex outside ``S`` that
    ``v`` reaches through ``S``; so the optimum over all ``n!`` orderings only
    depends on these sets.  ``blocks`` restricts the orderings to
    concatenations of per-block permutations.
    """
    vertices = h.vertices
    n = len(vertices)
    idx = {v: i for i, v in enumerate(vertices)}
    adj = [0] * n
    for p in primal_edges(h):
        u, v = (idx[x] for x in p)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    if blocks is None:
        block_of = [0] * n
    else:
        block_of = [0] * n
        for b, block in enumerate(blocks):
            for v in block:
                block_of[idx[v]] = b
    full = (1 << n) - 1

    def clique(v: int, placed: int) -> int:
        reach = 1 << v
        stack = [v]
        out = 1 << v
        while stack:
            u = stack.pop()
            nbrs = adj[u] & ~reach
            reach |= nbrs
            out |= nbrs & ~placed
            inner = nbrs & placed
            while inner:
                low = inner & -inner
                stack.append(low.bit_length() - 1)
                inner ^= low
        return out

    def members(mask: int) -> frozenset:
        return frozenset(vertices[i] for i in range(n) if mask >> i & 1)

    @lru_cache(maxsize=None)
    def best(placed: int) -> tuple[int, tuple]:
        if placed == full:
            return 0, ()
        remaining = [i for i in range(n) if not placed >> i & 1]
        # the vertex placed next (from the end) must sit in the last unfinished block
        top = max(block_of[i] for i in remaining)
        result = None
        for v in remaining:
            if block_of[v] != top:
                continue
            here = measure(members(clique(v, placed)))
            if result is not None and here >= result[0]:
                continue
            rest, order = best(placed | 1 << v)
            value = max(here, rest)
            if result is None or value < result[0]:
                result = (value, order + (vertices[v],))
        return result

    value, ordering = best(0)
    return value, ordering


def _check_bound(h: Hypergraph, bound: int) -> None:
    if len(h.vertices) > bound:
        raise SizeBoundExceeded(f"{len(h.vertices)} vertices exceed the exhaustive-search bound {bound}")


def coverwidth(h: Hypergraph, max_vertices: int = COVERWIDTH_VERTEX_BOUND) -> int:
    """Minimum over all orderings of the weight of the fill-in scheme."""
    _check_bound(h, max_vertices)
    return _elimination_optimum(h, lambda c: weight(h, c))[0]


def optimal_scheme(
    h: Hypergraph, max_vertices: int = COVERWIDTH_VERTEX_BOUND, blocks=None
) -> SchemeGraph:
    """A fill-in scheme whose weight equals the (optionally block-restricted) coverwidth."""
    _check_bound(h, max_vertices)
    _, ordering = _elimination_optimum(h, lambda c: weight(h, c), blocks)
    return fill_in_scheme(h, ordering)


def min_max_clique_size(h: Hypergraph, max_vertices: int = COVERWIDTH_VERTEX_BOUND) -> int:
    """Same search with cardinality in place of weight (treewidth + 1 of the primal graph)."""
    _check_bound(h, max_vertices)
    return _elimination_optimum(h, len)[0]


def coverwidth_oracle(h: Hypergraph, max_vertices: int = ORACLE_VERTEX_BOUND) -> int:
    """Exhaustive coverwidth: every chordal supergraph of the primal graph.

    Shares nothing with :func:`coverwidth`: graphs are bitmasks, chordality is
    tested by repeatedly deleting simplicial vertices, weights come from a
    table built over all edge subsets, and a scheme is charged the heaviest of
    *all* its cliques.
    """
    _check_bound(h, max_vertices)
    return _supergraph_search(h, lambda adj, n: _has_peo(adj, n))


def _weight_table(h: Hypergraph) -> list:
    vertices = h.vertices
    n = len(vertices)
    idx = {v: i for i, v in enumerate(vertices)}
    masks = [sum(1 << idx[v] for v in e) for e in h.edges]
    covered = 0
    for m in masks:
        covered |= m
    inf = len(masks) + 1
    cheapest = [inf] * (1 << n)
    for r in range(len(masks) + 1):
        for combo in itertools.combinations(masks, r):
            u = 0
            for m in combo:
                u |= m
            cheapest[u] = min(cheapest[u], r)
    # superset minimum: cheapest cover of anything containing the set
    for i in range(n):
        for s in range(1 << n):
            if not s >> i & 1:
                cheapest[s] = min(cheapest[s], cheapest[s | 1 << i])
    return [cheapest[s & covered] for s in range(1 << n)]


def _has_peo(adj: list, n: int, alive: Optional[int] = None) -> bool:
    alive = (1 << n) - 1 if alive is None else alive
    while alive:
        for v in range(n):
            if alive >> v & 1:
                nb = adj[v] & alive
                if all((adj[u] | 1 << u) & nb == nb for u in range(n) if nb >> u & 1):
                    alive &= ~(1 << v)
                    break
        else:
            return False
    return True


def _supergraph_search(h: Hypergraph, admissible) -> int:
    vertices = h.vertices
    n = len(vertices)
    idx = {v: i for i, v in enumerate(vertices)}
    table = _weight_table(h)
    base = [0] * n
    for p in primal_edges(h):
        u, v = (idx[x] for x in p)
        base[u] |= 1 << v
        base[v] |= 1 << u
    optional = [(u, v) for u, v in itertools.combinations(range(n), 2) if not base[u] >> v & 1]
    best = None
    for extra in range(1 << len(optional)):
        adj = list(base)
        for j, (u, v) in enumerate(optional):
            if extra >> j & 1:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        if not admissible(adj, n):
            continue
        heaviest = 0
        for s in range(1, 1 << n):
            if table[s] > heaviest and all(adj[v] | 1 << v | ~s == -1 for v in range(n) if s >> v & 1):
                heaviest = table[s]
        if best is None or heaviest < best:
            best = heaviest
    return best if best is not None else 0


def brute_force_scheme_width(h: Hypergraph, orderings: Optional[Iterable[Sequence]] = None) -> int:
    """Literal definition: min over orderings of the scheme weight of the fill-in."""
    if orderings is None:
        orderings = itertools.permutations(h.vertices)
    return min(scheme_weight(h, fill_in_scheme(h, o)) for o in orderings)


# -- conversions -----------------------------------------------------------


def scheme_to_decomposition(h: Hypergraph, g: SchemeGraph) -> TreeDecomposition:
    """Clique tree over the ordering.

    One node per vertex, holding its candidate clique.  Each node hangs below
    the node of its latest earlier neighbour; nodes without earlier
    neighbours are chained to the first such node.
    """
    if not is_scheme(h, g):
        raise InvalidScheme("not a scheme of the hypergraph")
    pos = {v: i for i, v in enumerate(g.ordering)}
    lower = g.lower_neighbours()
    bags = {v: frozenset(lower[v]) | {v} for v in g.ordering}
    edges = set()
    first_root = None
    for v in g.ordering:
        if lower[v]:
            parent = max(lower[v], key=pos.__getitem__)
            edges.add(frozenset((v, parent)))
        elif first_root is None:
            first_root = v
        else:
            edges.add(frozenset((v, first_root)))
    return TreeDecomposition(g.ordering, frozenset(edges), bags)


def decomposition_to_scheme(h: Hypergraph, d: TreeDecomposition) -> SchemeGraph:
    """Clique union of the bags, ordered by peeling leaves (reversed)."""
    if not is_tree_decomposition(h, d):
        raise InvalidDecomposition("not a tree decomposition of the hypergraph")
    graph = set()
    for bag in d.bags.values():
        for u, v in itertools.combinations(bag, 2):
            graph.add(frozenset((u, v)))
    adj = d.neighbours()
    remaining = list(d.nodes)
    emitted = []
    while remaining:
        leaf = next(n for n in remaining if len(adj[n]) <= 1)
        remaining.remove(leaf)
        for other in adj.pop(leaf):
            adj[other].discard(leaf)
        elsewhere = frozenset().union(*(d.bags[n] for n in remaining))
        emitted.extend(v for v in h.sorted(d.bags[leaf]) if v not in elsewhere)
    return SchemeGraph(frozenset(graph), tuple(reversed(emitted)))
