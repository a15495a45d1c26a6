"""Projective k-consistency.

The derived instance has one relation symbol per nonempty k-union ``U`` of the
left structure.  On the left it holds the single tuple listing ``U`` in
universe order; on the right, every value tuple whose induced mapping is a
projective homomorphism of the original instance.  Tuples are then deleted
until every surviving tuple is a projective homomorphism of the derived
instance itself.
"""

from __future__ import annotations

import enum
import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Optional

from .hypergraph import hypergraph_of, k_unions
from .relational import PartialMapping, RelationSymbol, Structure, _projective, all_maps, check_signatures

SYMBOL_PREFIX = "U__"


def symbol_name(elements) -> str:
    return SYMBOL_PREFIX + "__".join(elements)


@dataclass(frozen=True)
class DerivedInstance:
    left: Structure
    right: Structure
    k: int
    source: tuple  # (A, B)
    scopes: dict  # symbol name -> canonical element tuple

    def mapping(self, name: str, values: tuple) -> PartialMapping:
        return PartialMapping(zip(self.scopes[name], values))

    def is_empty(self) -> bool:
        return not self.scopes

    def with_right(self, relations: dict) -> "DerivedInstance":
        right = Structure(self.right.signature, self.right.universe, relations)
        return DerivedInstance(self.left, right, self.k, self.source, self.scopes)


class Verdict(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"


def _check_k(k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")


def build_derived_instance(a: Structure, b: Structure, k: int) -> DerivedInstance:
    _check_k(k)
    check_signatures(a, b)
    unions = [u for u in k_unions(hypergraph_of(a), k) if u]
    unions.sort(key=lambda u: (len(u), a.sort_key(a.sorted(u))))
    scopes = {}
    left_rels = {}
    right_rels = {}
    for u in unions:
        scope = a.sorted(u)
        name = symbol_name(scope)
        scopes[name] = scope
        left_rels[name] = {scope}
        right_rels[name] = {
            tuple(h[x] for x in scope) for h in all_maps(scope, b.universe) if _projective(h, a, b)
        }
    signature = [RelationSymbol(name, len(scope)) for name, scope in scopes.items()]
    return DerivedInstance(
        Structure(signature, a.universe, left_rels),
        Structure(signature, b.universe, right_rels),
        k,
        (a, b),
        scopes,
    )


def run_projective_consistency(
    d: DerivedInstance, rng: Optional[random.Random] = None
) -> tuple[DerivedInstance, bool]:
    """Delete right-hand tuples that are not projective homomorphisms of ``d``.

    A tuple of ``R_U`` survives iff, for every other symbol ``R_W``, some tuple
    of ``R_W`` agrees with it on ``U ∩ W``.  Support counts per projection
    onto the shared elements make each deletion cost proportional to the
    tuples it affects.  ``rng`` randomises the deletion order; the fixpoint
    is the same either way.
    """
    names = list(d.scopes)
    rels = {n: set(d.right.relations[n]) for n in names}
    shared = {}
    for n in names:
        for m in names:
            if n != m:
                common = [x for x in d.scopes[n] if x in d.scopes[m]]
                shared[n, m] = (
                    tuple(d.scopes[n].index(x) for x in common),
                    tuple(d.scopes[m].index(x) for x in common),
                )

    def project(t, positions):
        return tuple(t[i] for i in positions)

    support = {}
    watchers = {}
    for (n, m), (pos_n, pos_m) in shared.items():
        support[n, m] = Counter(project(s, pos_m) for s in rels[m])
        w = defaultdict(set)
        for t in rels[n]:
            w[project(t, pos_n)].add(t)
        watchers[n, m] = w

    doomed = []
    marked = set()

    def condemn(n, t):
        if (n, t) not in marked:
            marked.add((n, t))
            doomed.append((n, t))

    initial = [(n, t) for n in names for t in sorted(rels[n])]
    if rng is not None:
        rng.shuffle(initial)
    for n, t in initial:
        for m in names:
            if m != n and not support[n, m][project(t, shared[n, m][0])]:
                condemn(n, t)
                break

    while doomed:
        i = rng.randrange(len(doomed)) if rng is not None else len(doomed) - 1
        doomed[i], doomed[-1] = doomed[-1], doomed[i]
        m, s = doomed.pop()
        rels[m].discard(s)
        for n in names:
            if n == m:
                continue
            key = project(s, shared[n, m][1])
            support[n, m][key] -= 1
            if support[n, m][key] == 0:
                for t in watchers[n, m].get(key, ()):
                    if t in rels[n]:
                        condemn(n, t)

    result = d.with_right(rels)
    inconsistent = bool(names) and any(not rels[n] for n in names)
    return result, inconsistent


def projective_k_consistency(
    a: Structure, b: Structure, k: int, rng: Optional[random.Random] = None
) -> tuple[DerivedInstance, bool]:
    return run_projective_consistency(build_derived_instance(a, b, k), rng=rng)


def degenerate_verdict(a: Structure, b: Structure) -> Optional[Verdict]:
    """Answer instances the consistency algorithm never looks at."""
    if a.universe and not b.universe:
        return Verdict.UNSAT
    if not a.has_tuples():
        return Verdict.SAT
    return None


def decide_promise(a: Structure, b: Structure, k: int) -> Verdict:
    """Decide ``A -> B`` assuming ``A`` is homomorphically equivalent to a
    structure of coverwidth at most ``k``.

    ``UNSAT`` is correct even when the assumption fails; ``SAT`` is only
    guaranteed under it.
    """
    _check_k(k)
    check_signatures(a, b)
    guard = degenerate_verdict(a, b)
    if guard is not None:
        return guard
    _, inconsistent = projective_k_consistency(a, b, k)
    return Verdict.UNSAT if inconsistent else Verdict.SAT
