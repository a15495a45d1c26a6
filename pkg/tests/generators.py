"""Seeded random instances and fixtures shared by the test modules."""

import itertools
import random

from coverwidth.hypergraph import Hypergraph
from coverwidth.qcsp import EXISTS, FORALL, QuantifiedStructure
from coverwidth.relational import RelationSymbol, Structure

EDGE = [RelationSymbol("E", 2)]


def complete_graph(n):
    u = [str(i) for i in range(n)]
    return Structure(EDGE, u, {"E": [(x, y) for x in u for y in u if x != y]})


K2 = complete_graph(2)
K3 = complete_graph(3)
DIRECTED_EDGE = Structure(EDGE, ["0", "1"], {"E": [("0", "1")]})

TRI_HG = Hypergraph("abc", [{"a", "b"}, {"b", "c"}, {"a", "c"}])
SINGLE_EDGE_HG = Hypergraph("abc", [{"a", "b", "c"}])
FOUR_CYCLE_HG = Hypergraph("wxyz", [{"w", "x"}, {"x", "y"}, {"y", "z"}, {"z", "w"}])
TWO_DISJOINT_HG = Hypergraph("abcd", [{"a", "b"}, {"c", "d"}])


def random_hypergraph(rng, max_vertices=5, max_edges=4):
    n = rng.randint(0, max_vertices)
    vertices = [f"v{i}" for i in range(n)]
    edges = set()
    if n:
        for _ in range(rng.randint(0, max_edges)):
            size = rng.randint(1, n)
            edges.add(frozenset(rng.sample(vertices, size)))
    return Hypergraph(vertices, edges)


def random_signature(rng, max_arity=3):
    return [RelationSymbol(f"R{i}", rng.randint(1, max_arity)) for i in range(rng.randint(1, 2))]


def random_left(rng, signature, n, max_tuples):
    universe = [f"a{i}" for i in range(n)]
    rels = {s.name: set() for s in signature}
    if n:
        for _ in range(rng.randint(1, max_tuples)):
            s = rng.choice(signature)
            rels[s.name].add(tuple(rng.choice(universe) for _ in range(s.arity)))
    return Structure(signature, universe, rels)


def random_right(rng, signature, m, density=None):
    universe = [str(i) for i in range(m)]
    rels = {}
    for s in signature:
        p = rng.uniform(0.2, 0.8) if density is None else density
        rels[s.name] = {t for t in itertools.product(universe, repeat=s.arity) if rng.random() < p}
    return Structure(signature, universe, rels)


def random_graph_left(rng, n, max_tuples):
    universe = [f"a{i}" for i in range(n)]
    pairs = [(x, y) for x in universe for y in universe if x != y]
    count = rng.randint(min(3, len(pairs)), min(max_tuples, len(pairs)))
    return Structure(EDGE, universe, {"E": rng.sample(pairs, count)})


def random_instance(rng, max_left=4, max_tuples=5, max_arity=3, max_right=3):
    """Criterion-2 scale: |A| <= 4, at most 5 tuples of arity <= 3, |B| <= 3.

    Half of the draws are directed graphs without loops, which is where
    cycles (coverwidth 2) and near-misses for small k come from.
    """
    if rng.random() < 0.5:
        a = random_graph_left(rng, rng.randint(3, max_left), max_tuples)
        b = random_right(rng, EDGE, rng.randint(2, max_right))
        return a, b
    sig = random_signature(rng, max_arity)
    a = random_left(rng, sig, rng.randint(1, max_left), max_tuples)
    b = random_right(rng, sig, rng.randint(1, max_right))
    return a, b


def instances(seed, count, **kw):
    rng = random.Random(seed)
    return [random_instance(rng, **kw) for _ in range(count)]


def random_prefix(rng, universe, max_blocks=3):
    """A prefix over a shuffled universe with at most ``max_blocks`` blocks."""
    order = list(universe)
    rng.shuffle(order)
    n = len(order)
    blocks = rng.randint(1, min(max_blocks, max(n, 1)))
    cuts = sorted(rng.sample(range(1, n), blocks - 1)) if n > 1 else []
    first = rng.choice([EXISTS, FORALL])
    prefix = []
    start = 0
    for i, end in enumerate(cuts + [n]):
        q = first if i % 2 == 0 else (FORALL if first == EXISTS else EXISTS)
        prefix.extend((q, v) for v in order[start:end])
        start = end
    return prefix


def random_quantified(rng, max_left=4, max_right=3, max_blocks=3):
    sig = random_signature(rng, 3)
    a = random_left(rng, sig, rng.randint(1, max_left), 5)
    b = random_right(rng, sig, rng.randint(1, max_right))
    return QuantifiedStructure(random_prefix(rng, a.universe, max_blocks), a), b


def inflate(rng, core, extra, new_tuples=4):
    """Add ``extra`` clones of core elements plus tuples over the clones.

    Every clone has an original, and every new tuple is a core tuple with each
    position replaced by some preimage of its element.  Sending clones to their
    originals is therefore a homomorphism onto the core, which sits inside the
    result, so the two are homomorphically equivalent.  Mixing clones of
    different elements is what makes the result wider than the core.
    """
    core_tuples = list(core.tuples())
    universe = list(core.universe)
    rels = {name: set(ts) for name, ts in core.relations.items()}
    if not core_tuples or not universe:
        return core
    preimages = {x: [x] for x in universe}
    for i in range(extra):
        original = rng.choice(core.universe)
        clone = f"c{i}"
        universe.append(clone)
        preimages[original].append(clone)
    for _ in range(new_tuples):
        name, t = rng.choice(core_tuples)
        rels[name].add(tuple(rng.choice(preimages[x]) for x in t))
    return Structure(core.signature, universe, rels)
