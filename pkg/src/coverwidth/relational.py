"""Relational structures, partial mappings and the brute-force homomorphism oracle.

Elements are opaque strings.  Every structure keeps its universe as an
ordered tuple, and that order drives all enumeration and tie-breaking in the
package.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidStructure, NotTotal, OutsideUniverse, SignatureMismatch

Element = str


@dataclass(frozen=True, order=True)
class RelationSymbol:
    name: str
    arity: int


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    symbol: Optional[str] = None
    tuple: Optional[tuple] = None
    element: Optional[str] = None


class Structure:
    """A finite relational structure.

    ``signature`` is a sequence of :class:`RelationSymbol` (or ``(name, arity)``
    pairs), ``universe`` an ordered sequence of element ids and ``relations`` a
    mapping from symbol name to an iterable of tuples.  Duplicate tuples
    collapse.  Symbols without an entry get the empty relation.

    Construction only normalises; use :func:`validate_structure` to check the
    invariants (the parser does that for you).
    """

    __slots__ = ("signature", "universe", "relations", "_hash", "_index")

    def __init__(self, signature, universe, relations=None):
        symbols = []
        for sym in signature:
            if not isinstance(sym, RelationSymbol):
                name, arity = sym
                sym = RelationSymbol(str(name), int(arity))
            if sym.arity < 1:
                raise InvalidStructure(f"symbol {sym.name!r} has arity {sym.arity}; arity must be >= 1")
            symbols.append(sym)
        self.signature: tuple[RelationSymbol, ...] = tuple(symbols)
        self.universe: tuple[Element, ...] = tuple(universe)
        rels = {sym.name: frozenset() for sym in self.signature}
        for name, tuples in (relations or {}).items():
            rels[name] = frozenset(tuple(t) for t in tuples)
        self.relations: dict[str, frozenset] = rels
        self._hash = None
        self._index = None

    def __repr__(self):
        rels = ", ".join(f"{n}={sorted(ts)}" for n, ts in self.relations.items())
        return f"Structure(universe={list(self.universe)}, {rels})"

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.universe == other.universe
            and set(self.signature) == set(other.signature)
            and self.relations == other.relations
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.universe, frozenset(self.signature), frozenset(self.relations.items())))
        return self._hash

    @property
    def index(self) -> dict[Element, int]:
        """Position of each element in the universe listing."""
        if self._index is None:
            self._index = {a: i for i, a in enumerate(self.universe)}
        return self._index

    def arity(self, name: str) -> int:
        for sym in self.signature:
            if sym.name == name:
                return sym.arity
        raise KeyError(name)

    def tuples(self) -> Iterator[tuple[str, tuple]]:
        """Yield ``(symbol name, tuple)`` for every tuple, in a fixed order."""
        for sym in self.signature:
            for t in sorted(self.relations.get(sym.name, ()), key=self.sort_key):
                yield sym.name, t

    def has_tuples(self) -> bool:
        return any(self.relations.values())

    def sort_key(self, items: Iterable[Element]) -> tuple:
        idx = self.index
        return tuple(idx.get(a, len(idx)) for a in items)

    def sorted(self, elements: Iterable[Element]) -> tuple[Element, ...]:
        """Sort elements by universe order."""
        idx = self.index
        return tuple(sorted(elements, key=lambda a: idx[a]))

    def with_relation(self, symbol: RelationSymbol, tuples) -> "Structure":
        """Return a copy with one more symbol added to the signature."""
        rels = dict(self.relations)
        rels[symbol.name] = tuples
        return Structure(self.signature + (symbol,), self.universe, rels)


def validate_structure(s: Structure) -> list[Violation]:
    """Return every invariant violation of ``s``; an empty list means valid."""
    report = []
    seen = set()
    for sym in s.signature:
        if sym.name in seen:
            report.append(Violation("duplicate-symbol", f"symbol {sym.name!r} declared twice", symbol=sym.name))
        seen.add(sym.name)
    members = set()
    for a in s.universe:
        if a in members:
            report.append(Violation("duplicate-element", f"element {a!r} listed twice", element=a))
        members.add(a)
    declared = {sym.name: sym.arity for sym in s.signature}
    for name, tuples in s.relations.items():
        if name not in declared:
            report.append(Violation("unknown-symbol", f"relation {name!r} has no declared symbol", symbol=name))
            continue
        for t in sorted(tuples, key=repr):
            if len(t) != declared[name]:
                report.append(
                    Violation(
                        "arity",
                        f"tuple {t!r} under {name!r} has length {len(t)}, arity is {declared[name]}",
                        symbol=name,
                        tuple=t,
                    )
                )
            for a in t:
                if a not in members:
                    report.append(
                        Violation(
                            "membership",
                            f"element {a!r} in tuple {t!r} under {name!r} is not in the universe",
                            symbol=name,
                            tuple=t,
                            element=a,
                        )
                    )
    return report


class PartialMapping(Mapping):
    """An immutable, hashable partial function between two universes."""

    __slots__ = ("_d", "_hash")

    def __init__(self, entries=()):
        self._d = dict(entries)
        self._hash = None

    def __getitem__(self, key):
        return self._d[key]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __contains__(self, key):
        return key in self._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, PartialMapping):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == dict(other)
        return NotImplemented

    def __repr__(self):
        inner = ", ".join(f"{k}->{v}" for k, v in self._d.items())
        return "{" + inner + "}"

    @property
    def domain(self) -> frozenset:
        return frozenset(self._d)

    def restrict(self, keys) -> "PartialMapping":
        return PartialMapping((k, v) for k, v in self._d.items() if k in keys)

    def extend(self, key, value) -> "PartialMapping":
        d = dict(self._d)
        d[key] = value
        return PartialMapping(d)

    def agrees_with(self, other: Mapping) -> bool:
        """True when both mappings coincide on their common domain."""
        small, big = (self, other) if len(self) <= len(other) else (other, self)
        return all(big[k] == v for k, v in small.items() if k in big)

    def as_dict(self) -> dict:
        return dict(self._d)


# Total mappings are partial mappings whose domain is the whole left universe.
Assignment = PartialMapping


def check_signatures(a: Structure, b: Structure) -> None:
    if set(a.signature) != set(b.signature):
        raise SignatureMismatch(
            f"signatures differ: {sorted(a.signature)} vs {sorted(b.signature)}"
        )


def _check_mapping(h: Mapping, a: Structure, b: Structure, total: bool) -> None:
    check_signatures(a, b)
    left = a.index
    right = b.index
    for x, y in h.items():
        if x not in left:
            raise OutsideUniverse(f"mapping is defined on {x!r}, which is not a left element")
        if y not in right:
            raise OutsideUniverse(f"image {y!r} of {x!r} is not a right element")
    if total:
        missing = [x for x in a.universe if x not in h]
        if missing:
            raise NotTotal(f"mapping is undefined on {missing}")


def is_homomorphism(h: Mapping, a: Structure, b: Structure) -> bool:
    """True iff the total map ``h`` sends every tuple of ``a`` into ``b``."""
    _check_mapping(h, a, b, total=True)
    return _preserves(h, a, b)


def _preserves(h: Mapping, a: Structure, b: Structure) -> bool:
    for name, tuples in a.relations.items():
        target = b.relations[name]
        for t in tuples:
            if tuple(h[x] for x in t) not in target:
                return False
    return True


def find_homomorphism(a: Structure, b: Structure) -> Optional[Assignment]:
    """Exhaustive search over all ``|B|^|A|`` maps in lexicographic order.

    Returns the first homomorphism found, or ``None``.
    """
    check_signatures(a, b)
    for images in itertools.product(b.universe, repeat=len(a.universe)):
        h = dict(zip(a.universe, images))
        if _preserves(h, a, b):
            return PartialMapping(h)
    return None


def is_projective_homomorphism(h: Mapping, a: Structure, b: Structure) -> bool:
    """Every ``a``-tuple has a ``b``-tuple agreeing with it wherever ``h`` is defined."""
    _check_mapping(h, a, b, total=False)
    return _projective(h, a, b)


def _projective(h: Mapping, a: Structure, b: Structure) -> bool:
    for name, tuples in a.relations.items():
        target = b.relations[name]
        for t in tuples:
            fixed = [(i, h[x]) for i, x in enumerate(t) if x in h]
            if not any(all(s[i] == y for i, y in fixed) for s in target):
                return False
    return True


def are_homomorphically_equivalent(a: Structure, a2: Structure) -> bool:
    return find_homomorphism(a, a2) is not None and find_homomorphism(a2, a) is not None


def all_maps(domain: Iterable[Element], codomain: Iterable[Element]) -> Iterator[PartialMapping]:
    """All functions from ``domain`` to ``codomain``, lexicographically."""
    domain = tuple(domain)
    for images in itertools.product(tuple(codomain), repeat=len(domain)):
        yield PartialMapping(zip(domain, images))
