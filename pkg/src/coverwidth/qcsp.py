"""Quantified CSP: prefixes, quantified coverwidth, the quantified cover game
and the blockwise consistency procedure, plus a game-tree oracle."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .consistency import build_derived_instance
from .errors import InvalidStructure, SizeBoundExceeded
from .game import Strategy, greatest_fixpoint, member_key
from .hypergraph import (
    COVERWIDTH_VERTEX_BOUND,
    SchemeGraph,
    _check_bound,
    _elimination_optimum,
    _supergraph_search,
    hypergraph_of,
    is_scheme,
    weight,
)
from .relational import Structure, _projective, all_maps, check_signatures

EXISTS = "exists"
FORALL = "forall"
QUANTIFIERS = (EXISTS, FORALL)

ORACLE_ASSIGNMENT_BOUND = 2_000_000
QUANTIFIED_ORACLE_VERTEX_BOUND = 5


@dataclass(frozen=True)
class QuantifierBlock:
    quantifier: str
    variables: tuple
    index: int


class QuantifiedStructure:
    """A quantifier prefix over the universe of a structure.

    The prefix must list every element exactly once; the structure is
    re-listed in prefix order so that prefix order is the universe order.
    """

    __slots__ = ("prefix", "structure")

    def __init__(self, prefix: Sequence, structure: Structure):
        prefix = tuple((str(q), v) for q, v in prefix)
        for q, v in prefix:
            if q not in QUANTIFIERS:
                raise InvalidStructure(f"unknown quantifier {q!r} for {v!r}")
        variables = [v for _, v in prefix]
        if len(set(variables)) != len(variables):
            raise InvalidStructure("a variable is quantified twice")
        if set(variables) != set(structure.universe):
            missing = sorted(set(structure.universe) - set(variables))
            extra = sorted(set(variables) - set(structure.universe))
            raise InvalidStructure(f"prefix does not match the universe (unquantified {missing}, unknown {extra})")
        if tuple(variables) != structure.universe:
            structure = Structure(structure.signature, variables, structure.relations)
        self.prefix = prefix
        self.structure = structure

    def __repr__(self):
        quant = " ".join(("∃" if q == EXISTS else "∀") + v for q, v in self.prefix)
        return f"QuantifiedStructure({quant}, {self.structure!r})"

    def __eq__(self, other):
        if not isinstance(other, QuantifiedStructure):
            return NotImplemented
        return self.prefix == other.prefix and self.structure == other.structure

    def __hash__(self):
        return hash((self.prefix, self.structure))

    def quantifier(self, v) -> str:
        return dict((x, q) for q, x in self.prefix)[v]

    @property
    def blocks(self) -> list:
        return quantifier_blocks(self.prefix)


def quantifier_blocks(prefix) -> list:
    """Maximal runs of equal quantifiers, in prefix order."""
    blocks = []
    for q, group in itertools.groupby(prefix, key=lambda qv: qv[0]):
        blocks.append(QuantifierBlock(q, tuple(v for _, v in group), len(blocks)))
    return blocks


def _block_index(prefix) -> dict:
    return {v: blk.index for blk in quantifier_blocks(prefix) for v in blk.variables}


def comes_after(prefix, vi, vj) -> bool:
    """True iff ``vj`` is in the block of ``vi`` or a later one."""
    where = _block_index(prefix)
    for v in (vi, vj):
        if v not in where:
            raise KeyError(f"{v!r} is not quantified in the prefix")
    return where[vj] >= where[vi]


def is_quantified_scheme(q: QuantifiedStructure, g: SchemeGraph) -> bool:
    if not is_scheme(hypergraph_of(q.structure), g):
        return False
    where = _block_index(q.prefix)
    blocks = [where[v] for v in g.ordering]
    return all(x <= y for x, y in zip(blocks, blocks[1:]))


def quantified_coverwidth(q: QuantifiedStructure, max_vertices: int = COVERWIDTH_VERTEX_BOUND) -> int:
    """Least fill-in scheme weight over orderings that respect the prefix."""
    h = hypergraph_of(q.structure)
    _check_bound(h, max_vertices)
    blocks = [blk.variables for blk in q.blocks]
    return _elimination_optimum(h, lambda c: weight(h, c), blocks)[0]


def quantified_coverwidth_oracle(
    q: QuantifiedStructure, max_vertices: int = QUANTIFIED_ORACLE_VERTEX_BOUND
) -> int:
    """Every supergraph of the primal graph admitting a prefix-respecting
    perfect elimination ordering (tried exhaustively), charged its heaviest clique."""
    h = hypergraph_of(q.structure)
    _check_bound(h, max_vertices)
    idx = {v: i for i, v in enumerate(h.vertices)}
    orderings = [
        [idx[v] for v in itertools.chain.from_iterable(perm)]
        for perm in itertools.product(*(itertools.permutations(b.variables) for b in q.blocks))
    ]

    def admissible(adj, n):
        for order in orderings:
            earlier = 0
            for v in order:
                lower = adj[v] & earlier
                if any((adj[u] | 1 << u) & lower != lower for u in range(n) if lower >> u & 1):
                    break
                earlier |= 1 << v
            else:
                return True
        return False

    return _supergraph_search(h, admissible)


# -- oracle ----------------------------------------------------------------


def qcsp_oracle(q: QuantifiedStructure, b: Structure, bound: int = ORACLE_ASSIGNMENT_BOUND) -> bool:
    """Evaluate the quantified conjunctive sentence over ``b`` by brute force."""
    a = q.structure
    check_signatures(a, b)
    if len(b.universe) ** len(q.prefix) > bound:
        raise SizeBoundExceeded(f"{len(b.universe)}^{len(q.prefix)} assignments exceed {bound}")
    order = {v: i for i, (_, v) in enumerate(q.prefix)}
    # a tuple can be checked once its last variable is assigned
    due = [[] for _ in q.prefix]
    for name, t in a.tuples():
        if t:
            due[max(order[x] for x in t)].append((name, t))

    assignment = {}

    def holds(i: int) -> bool:
        if i == len(q.prefix):
            return True
        quant, v = q.prefix[i]
        results = (_try(i, v, value) for value in b.universe)
        return any(results) if quant == EXISTS else all(results)

    def _try(i, v, value):
        assignment[v] = value
        try:
            for name, t in due[i]:
                if tuple(assignment[x] for x in t) not in b.relations[name]:
                    return False
            return holds(i + 1)
        finally:
            del assignment[v]

    return holds(0)


# -- quantified k-cover game ------------------------------------------------


def quantified_strategy_fixpoint(
    q: QuantifiedStructure,
    b: Structure,
    k: int,
    rng: Optional[random.Random] = None,
    max_elements: int = 8,
) -> Optional[Strategy]:
    """Largest winning strategy of the quantified k-cover game, or ``None``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    a = q.structure
    check_signatures(a, b)
    if len(a.universe) > max_elements:
        raise SizeBoundExceeded(f"{len(a.universe)} left elements exceed the bound {max_elements}")
    hg = hypergraph_of(a)
    where = _block_index(q.prefix)
    quant = dict((v, qq) for qq, v in q.prefix)
    candidates = []
    for r in range(len(a.universe) + 1):
        for dom in itertools.combinations(a.universe, r):
            if weight(hg, dom) <= k:
                candidates.extend(h for h in all_maps(dom, b.universe) if _projective(h, a, b))

    def violates(h, alive):
        dom = h.domain
        for x in dom:
            if h.restrict(dom - {x}) not in alive:
                return True
        latest = max((where[x] for x in dom), default=0)
        for x in a.universe:
            if x in dom or where[x] < latest or weight(hg, dom | {x}) > k:
                continue
            extensions = (h.extend(x, y) in alive for y in b.universe)
            if not (any(extensions) if quant[x] == EXISTS else all(extensions)):
                return True
        return False

    survivors = greatest_fixpoint(candidates, violates, key=lambda h: member_key(h, a, b), rng=rng)
    if not survivors:
        return None
    return Strategy(frozenset(survivors), "full", k, a, b)


# -- blockwise consistency --------------------------------------------------


class _Projections:
    """Projection sets of the current right-hand relations, rebuilt on demand."""

    def __init__(self, rels, scopes):
        self.rels = rels
        self.scopes = scopes
        self.cache = {}

    def forget(self, name):
        self.cache.pop(name, None)

    def projective(self, g) -> bool:
        for name, scope in self.scopes.items():
            positions = tuple(i for i, x in enumerate(scope) if x in g)
            per_name = self.cache.setdefault(name, {})
            seen = per_name.get(positions)
            if seen is None:
                seen = per_name[positions] = {tuple(s[i] for i in positions) for s in self.rels[name]}
            if tuple(g[scope[i]] for i in positions) not in seen:
                return False
        return True


def qcsp_consistency_decide(
    q: QuantifiedStructure, b: Structure, k: int, rng: Optional[random.Random] = None
) -> bool:
    """Decide the QCSP instance, assuming quantified coverwidth at most ``k``.

    Projective k-consistency with one more deletion rule: a tuple ``h`` on
    ``U`` is removed if, for some existential block, restricting ``h`` to the
    blocks up to it and then assigning the later universal variables of ``U``
    arbitrarily can break projectivity.  The empty prefix before the first
    block is treated as such a cut as well.

    Deletions are batched per sweep; with ``rng`` they happen one at a time
    in shuffled order instead.  Both reach the same fixpoint.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    a = q.structure
    check_signatures(a, b)
    if q.prefix and not b.universe:
        return q.prefix[0][0] == FORALL
    if not a.has_tuples():
        return True

    d = build_derived_instance(a, b, k)
    scopes = d.scopes
    rels = {n: set(d.right.relations[n]) for n in scopes}
    where = _block_index(q.prefix)
    universal = {v for qq, v in q.prefix if qq == FORALL}
    cuts = [-1] + [blk.index for blk in q.blocks if blk.quantifier == EXISTS]
    proj = _Projections(rels, scopes)

    # per symbol and cut: positions kept in the restriction, universal variables to extend
    plans = {}
    for name, scope in scopes.items():
        plan = []
        for cut in cuts:
            kept = tuple(i for i, x in enumerate(scope) if where[x] <= cut)
            free = tuple(x for x in scope if where[x] > cut and x in universal)
            if free:
                plan.append((kept, free))
        plans[name] = plan

    def violates(name, t):
        scope = scopes[name]
        if not proj.projective(dict(zip(scope, t))):
            return True
        for kept, free in plans[name]:
            base = {scope[i]: t[i] for i in kept}
            for values in itertools.product(b.universe, repeat=len(free)):
                g = dict(base)
                g.update(zip(free, values))
                if not proj.projective(g):
                    return True
        return False

    items = [(n, t) for n in scopes for t in sorted(rels[n])]
    changed = True
    while changed:
        changed = False
        if rng is None:
            doomed = [(n, t) for n, t in items if violates(n, t)]
            for n, t in doomed:
                rels[n].discard(t)
                proj.forget(n)
            changed = bool(doomed)
        else:
            rng.shuffle(items)
            for n, t in items:
                if t in rels[n] and violates(n, t):
                    rels[n].discard(t)
                    proj.forget(n)
                    changed = True
        items = [(n, t) for n, t in items if t in rels[n]]
    return all(rels[n] for n in scopes)
