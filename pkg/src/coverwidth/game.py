"""The existential k-cover game.

Winning strategies for the Duplicator are computed as greatest fixpoints over
explicit sets of partial mappings: the *full* form (every domain of weight at
most k, forth property plus subfunction closure) and the *compact* form
(domains are exactly the k-unions, with the agreement-extension property).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional

from .errors import CoverwidthError, InvalidScheme, InvalidStrategy, LiftDefect, SizeBoundExceeded
from .hypergraph import SchemeGraph, hypergraph_of, is_scheme, k_unions, scheme_weight, weight
from .relational import (
    PartialMapping,
    Structure,
    _projective,
    all_maps,
    check_signatures,
    is_homomorphism,
    is_projective_homomorphism,
)

FULL_STRATEGY_ELEMENT_BOUND = 8


@dataclass(frozen=True)
class Strategy:
    members: frozenset
    kind: str  # "full" or "compact"
    game_k: int
    left: Structure
    right: Structure

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted_members())

    def __contains__(self, h):
        return h in self.members

    def sorted_members(self) -> list:
        return sorted(self.members, key=lambda h: member_key(h, self.left, self.right))


def member_key(h: Mapping, a: Structure, b: Structure) -> tuple:
    """Order members by (sorted domain, image tuple) using universe order."""
    dom = a.sorted(h)
    return (len(dom), a.sort_key(dom), b.sort_key(h[x] for x in dom))


def _check_k(k: int) -> None:
    if k < 1:
        raise ValueError(f"the game needs k >= 1, got {k}")


def greatest_fixpoint(
    items: Iterable,
    violates: Callable[[object, set], bool],
    key: Callable = None,
    rng: Optional[random.Random] = None,
) -> set:
    """Delete violating items one at a time until none is left to delete.

    ``violates(x, alive)`` is judged against the current survivors.  Items are
    visited in ``key`` order, or in an order reshuffled by ``rng`` each sweep.
    When ``violates`` is monotone (fewer survivors never rescue an item) the
    result does not depend on the visiting order.
    """
    order = sorted(items, key=key) if key else list(items)
    alive = set(order)
    changed = True
    while changed:
        changed = False
        if rng is not None:
            rng.shuffle(order)
        for x in order:
            if x in alive and violates(x, alive):
                alive.discard(x)
                changed = True
        order = [x for x in order if x in alive]
    return alive


def _restrictions(h: PartialMapping) -> Iterable[PartialMapping]:
    dom = list(h)
    for r in range(len(dom) + 1):
        for keep in itertools.combinations(dom, r):
            yield h.restrict(keep)


# -- compact strategies ----------------------------------------------------


def _compact_violation(unions, by_domain):
    def violates(h, alive):
        dom = h.domain
        for u in unions:
            shared = [x for x in dom if x in u]
            if not any(g in alive and all(g[x] == h[x] for x in shared) for g in by_domain[u]):
                return True
        return False

    return violates


def compact_strategy_fixpoint(
    a: Structure, b: Structure, k: int, rng: Optional[random.Random] = None
) -> Optional[Strategy]:
    """Largest compact winning strategy for the Duplicator, or ``None``."""
    _check_k(k)
    check_signatures(a, b)
    hg = hypergraph_of(a)
    if not b.universe and hg.covered != hg.vertex_set:
        # an element outside every tuple can still be picked, and has no answer
        return None
    unions = sorted(k_unions(hg, k), key=lambda u: (len(u), a.sort_key(a.sorted(u))))
    by_domain = {}
    for u in unions:
        by_domain[u] = [h for h in all_maps(a.sorted(u), b.universe) if _projective(h, a, b)]
    candidates = [h for u in unions for h in by_domain[u]]
    survivors = greatest_fixpoint(
        candidates, _compact_violation(unions, by_domain), key=lambda h: member_key(h, a, b), rng=rng
    )
    if not survivors:
        return None
    return Strategy(frozenset(survivors), "compact", k, a, b)


def verify_compact_strategy(c, a: Structure, b: Structure, k: int) -> bool:
    members = set(c.members if isinstance(c, Strategy) else c)
    if not members:
        return False
    try:
        if not all(is_projective_homomorphism(h, a, b) for h in members):
            return False
    except CoverwidthError:
        return False
    unions = k_unions(hypergraph_of(a), k)
    by_domain = {u: [] for u in unions}
    for h in members:
        dom = frozenset(h)
        if dom not in by_domain:
            return False
        by_domain[dom].append(h)
    violates = _compact_violation(unions, by_domain)
    return not any(violates(h, members) for h in members)


def expand_compact(c: Strategy) -> Strategy:
    """Close a compact strategy under subfunctions; the result is a full strategy.

    Elements of A that lie in no tuple have weight 0, so the Spoiler may pick
    them at any time.  No k-union contains them, and they constrain nothing,
    so each member is first extended by every way of placing them.
    """
    a, b = c.left, c.right
    if not verify_compact_strategy(c, a, b, c.game_k):
        raise InvalidStrategy("not a compact winning strategy")
    loose = [x for x in a.universe if x not in hypergraph_of(a).covered]
    if loose and not b.universe:
        raise InvalidStrategy("elements outside every tuple have nowhere to go in an empty B")
    members = set()
    for h in c.members:
        for imgs in itertools.product(b.universe, repeat=len(loose)):
            members.update(_restrictions(PartialMapping({**h, **dict(zip(loose, imgs))})))
    return Strategy(frozenset(members), "full", c.game_k, c.left, c.right)


# -- full strategies -------------------------------------------------------


def _full_violation(a, b, k, hg):
    universe = a.universe
    values = b.universe

    def violates(h, alive):
        dom = h.domain
        for x in dom:
            if h.restrict(dom - {x}) not in alive:
                return True
        for x in universe:
            if x in dom or weight(hg, dom | {x}) > k:
                continue
            if not any(h.extend(x, y) in alive for y in values):
                return True
        return False

    return violates


def full_strategy_fixpoint(
    a: Structure,
    b: Structure,
    k: int,
    rng: Optional[random.Random] = None,
    max_elements: int = FULL_STRATEGY_ELEMENT_BOUND,
) -> Optional[Strategy]:
    """Largest winning strategy, straight from the definition.

    Starts from every projective homomorphism whose domain has weight at most
    ``k`` and deletes members that break the forth property or subfunction
    closure.
    """
    _check_k(k)
    check_signatures(a, b)
    if len(a.universe) > max_elements:
        raise SizeBoundExceeded(f"{len(a.universe)} left elements exceed the bound {max_elements}")
    hg = hypergraph_of(a)
    candidates = []
    for r in range(len(a.universe) + 1):
        for dom in itertools.combinations(a.universe, r):
            if weight(hg, dom) <= k:
                candidates.extend(h for h in all_maps(dom, b.universe) if _projective(h, a, b))
    survivors = greatest_fixpoint(
        candidates, _full_violation(a, b, k, hg), key=lambda h: member_key(h, a, b), rng=rng
    )
    if not survivors:
        return None
    return Strategy(frozenset(survivors), "full", k, a, b)


def verify_winning_strategy(s, a: Structure, b: Structure, k: int) -> bool:
    members = {PartialMapping(h) for h in (s.members if isinstance(s, Strategy) else s)}
    if not members:
        return False
    try:
        if not all(is_projective_homomorphism(h, a, b) for h in members):
            return False
    except CoverwidthError:
        return False
    violates = _full_violation(a, b, k, hypergraph_of(a))
    return not any(violates(h, members) for h in members)


# -- lifting homomorphisms along a scheme ------------------------------------


def lift_homomorphism(t: Structure, g: SchemeGraph, f: Mapping, s: Strategy) -> PartialMapping:
    """Turn a homomorphism ``f: T -> A`` into one ``T -> B`` using strategy ``s``.

    Walks the elimination ordering of ``g``; each new vertex either copies the
    value of an earlier neighbour with the same ``f``-image, or takes the value
    offered by the first strategy member extending the certificate of its
    earlier neighbourhood.
    """
    a, b, k = s.left, s.right, s.game_k
    ht = hypergraph_of(t)
    if not is_scheme(ht, g):
        raise InvalidScheme("g is not a scheme of H(T)")
    if scheme_weight(ht, g) > k:
        raise InvalidScheme(f"scheme weight exceeds k = {k}")
    if not is_homomorphism(f, t, a):
        raise ValueError("f is not a homomorphism from T to A")
    if s.kind != "full" or not verify_winning_strategy(s, a, b, k):
        raise InvalidStrategy("s is not a full winning strategy")

    by_domain = {}
    for h in s.sorted_members():
        by_domain.setdefault(h.domain, []).append(h)
    lower = g.lower_neighbours()
    lifted = {}
    for v in g.ordering:
        wanted = {}
        for u in lower[v]:
            if wanted.setdefault(f[u], lifted[u]) != lifted[u]:
                raise LiftDefect(f"earlier neighbours of {v!r} with equal f-image got different values")
        cert = next(
            (h for h in by_domain.get(frozenset(wanted), ()) if all(h[x] == y for x, y in wanted.items())),
            None,
        )
        if cert is None:
            raise LiftDefect(f"no strategy member certifies the earlier neighbourhood of {v!r}")
        fv = f[v]
        if fv in wanted:
            lifted[v] = wanted[fv]
            continue
        ext = next(
            (h for h in by_domain.get(cert.domain | {fv}, ()) if all(h[x] == y for x, y in cert.items())),
            None,
        )
        if ext is None:
            raise LiftDefect(f"strategy has no forth extension of {cert!r} to {fv!r}")
        lifted[v] = ext[fv]
    result = PartialMapping((x, lifted[x]) for x in t.universe)
    if not is_homomorphism(result, t, b):
        raise LiftDefect("lifted map is not a homomorphism")
    return result
