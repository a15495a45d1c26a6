"""Self-reducing solver that needs no promise about the instance."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Optional

from .consistency import Verdict, degenerate_verdict, projective_k_consistency
from .errors import OutsideUniverse
from .relational import PartialMapping, RelationSymbol, Structure, check_signatures, is_homomorphism

log = logging.getLogger(__name__)


class Status(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    assignment: Optional[PartialMapping] = None

    @classmethod
    def sat(cls, assignment):
        return cls(Status.SAT, PartialMapping(assignment))


UNSAT = SolveOutcome(Status.UNSAT)
UNKNOWN = SolveOutcome(Status.UNKNOWN)


def pin_symbol(v: str) -> str:
    return f"R_{v}"


def add_unary_constraint(a: Structure, b: Structure, v: str, value: str) -> tuple[Structure, Structure]:
    """Force ``v`` onto ``value`` with a fresh unary symbol on both sides."""
    if v not in a.index:
        raise OutsideUniverse(f"{v!r} is not a left element")
    if value not in b.index:
        raise OutsideUniverse(f"{value!r} is not a right element")
    sym = RelationSymbol(pin_symbol(v), 1)
    if any(s.name == sym.name for s in a.signature):
        raise ValueError(f"symbol {sym.name!r} already exists")
    return a.with_relation(sym, {(v,)}), b.with_relation(sym, {(value,)})


def solve_no_promise(a: Structure, b: Structure, k: int) -> SolveOutcome:
    """Return Sat with a verified assignment, Unsat, or Unknown.

    Variables are pinned in universe order, each to the first right element
    (in universe order) that keeps the expanded instance consistent.  Unknown
    only happens when no value works, which cannot occur on satisfiable
    instances of coverwidth at most ``k``.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    check_signatures(a, b)
    if degenerate_verdict(a, b) is Verdict.UNSAT:
        return UNSAT
    _, inconsistent = projective_k_consistency(a, b, k)
    if inconsistent:
        return UNSAT
    cur_a, cur_b = a, b
    pinned = {}
    for v in a.universe:
        for value in b.universe:
            next_a, next_b = add_unary_constraint(cur_a, cur_b, v, value)
            _, inconsistent = projective_k_consistency(next_a, next_b, k)
            if not inconsistent:
                cur_a, cur_b = next_a, next_b
                pinned[v] = value
                break
        else:
            return UNKNOWN
    if not is_homomorphism(pinned, a, b):
        log.warning("pinned map failed verification; reporting unknown")
        return UNKNOWN
    return SolveOutcome.sat((v, pinned[v]) for v in a.universe)
