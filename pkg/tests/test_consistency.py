import itertools
import random

import pytest

from coverwidth.consistency import (
    Verdict,
    build_derived_instance,
    decide_promise,
    projective_k_consistency,
    run_projective_consistency,
    symbol_name,
)
from coverwidth.errors import SignatureMismatch
from coverwidth.game import compact_strategy_fixpoint
from coverwidth.hypergraph import coverwidth, hypergraph_of
from coverwidth.relational import (
    PartialMapping,
    Structure,
    are_homomorphically_equivalent,
    find_homomorphism,
    is_homomorphism,
    is_projective_homomorphism,
)

from generators import EDGE, K2, K3, inflate, instances


def naive_fixpoint(d):
    """Reference deletion loop: recheck every tuple against the whole current instance."""
    rels = {n: set(d.right.relations[n]) for n in d.scopes}
    while True:
        current = d.with_right(rels)
        dead = [
            (n, t)
            for n in rels
            for t in rels[n]
            if not is_projective_homomorphism(PartialMapping(zip(d.scopes[n], t)), current.left, current.right)
        ]
        if not dead:
            return rels
        for n, t in dead:
            rels[n].discard(t)


def homs(a, b):
    return {
        imgs
        for imgs in itertools.product(b.universe, repeat=len(a.universe))
        if is_homomorphism(dict(zip(a.universe, imgs)), a, b)
    }


def test_edgeless_left_has_empty_signature():
    d = build_derived_instance(Structure(EDGE, ["x", "y"]), K2, 2)
    assert d.is_empty() and d.left.signature == ()
    _, inconsistent = run_projective_consistency(d)
    assert not inconsistent


def test_k3_k2_at_k1():
    d = build_derived_instance(K3, K2, 1)
    assert sorted(d.scopes) == [symbol_name(p) for p in (("0", "1"), ("0", "2"), ("1", "2"))]
    for name, scope in d.scopes.items():
        assert d.left.relations[name] == {scope}
        assert d.right.relations[name] == {("0", "1"), ("1", "0")}
    _, inconsistent = run_projective_consistency(d)
    assert not inconsistent


def test_k3_k2_at_k2_triple_is_empty_from_the_start():
    d = build_derived_instance(K3, K2, 2)
    assert d.right.relations[symbol_name(("0", "1", "2"))] == frozenset()
    fixed, inconsistent = run_projective_consistency(d)
    assert inconsistent
    assert all(not ts for ts in fixed.right.relations.values())


def test_derived_instance_invariants():
    for a, b in instances(3, 40):
        d = build_derived_instance(a, b, 2)
        assert d.left.universe == a.universe and d.right.universe == b.universe
        for sym in d.left.signature:
            (scope,) = d.left.relations[sym.name]
            assert sym.arity == len(scope) == len(set(scope))
            assert scope == tuple(a.sorted(scope))
            assert all(len(t) == sym.arity and set(t) <= set(b.universe) for t in d.right.relations[sym.name])


def test_examples():
    assert not projective_k_consistency(K2, K3, 2)[1]
    assert not projective_k_consistency(K3, K3, 2)[1]
    assert decide_promise(K3, K2, 2) is Verdict.UNSAT
    assert decide_promise(K2, K3, 2) is Verdict.SAT


def test_identity_instance_loses_nothing_during_deletion():
    for a, _ in instances(9, 30):
        d = build_derived_instance(a, a, 2)
        fixed, inconsistent = run_projective_consistency(d)
        assert not inconsistent
        for name, scope in d.scopes.items():
            assert scope in fixed.right.relations[name]


def test_degenerate_guards():
    empty = Structure(EDGE, [])
    assert decide_promise(Structure(EDGE, ["x"]), empty, 1) is Verdict.UNSAT
    assert decide_promise(empty, empty, 1) is Verdict.SAT
    assert decide_promise(Structure(EDGE, ["x", "y"]), K2, 3) is Verdict.SAT


def test_errors():
    with pytest.raises(ValueError):
        decide_promise(K2, K3, 0)
    with pytest.raises(SignatureMismatch):
        build_derived_instance(K2, Structure([("F", 2)], ["0"]), 1)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_support_engine_matches_naive_fixpoint(k):
    for a, b in instances(40 + k, 60):
        d = build_derived_instance(a, b, k)
        fixed, inconsistent = run_projective_consistency(d)
        reference = naive_fixpoint(d)
        assert {n: set(ts) for n, ts in fixed.right.relations.items()} == reference
        assert inconsistent == (bool(reference) and any(not ts for ts in reference.values()))


@pytest.mark.parametrize("k", [1, 2])
def test_same_assignments(k):
    for a, b in instances(50 + k, 60):
        fixed, _ = projective_k_consistency(a, b, k)
        assert homs(a, b) == homs(fixed.left, fixed.right)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_soundness_and_strategy_correspondence(k):
    for a, b in instances(60 + k, 80):
        _, inconsistent = projective_k_consistency(a, b, k)
        if inconsistent:
            assert find_homomorphism(a, b) is None
        if a.has_tuples() or b.universe:
            assert inconsistent == (compact_strategy_fixpoint(a, b, k) is None)


def test_promise_completeness():
    seen = 0
    for a, b in instances(70, 150):
        k = max(1, coverwidth(hypergraph_of(a)))
        expected = Verdict.SAT if find_homomorphism(a, b) is not None else Verdict.UNSAT
        assert decide_promise(a, b, k) is expected
        seen += 1
    assert seen == 150


def test_confluence_under_shuffles():
    for a, b in instances(80, 40):
        d = build_derived_instance(a, b, 2)
        base = run_projective_consistency(d)
        for seed in range(4):
            assert run_projective_consistency(d, rng=random.Random(seed)) == base


def test_inflated_structures_stay_equivalent_to_their_core():
    rng = random.Random(13)
    for a, b in instances(14, 40, max_left=3):
        if not a.has_tuples():
            continue
        big = inflate(rng, a, rng.randint(1, 4), new_tuples=6)
        assert are_homomorphically_equivalent(big, a)
        k = max(1, coverwidth(hypergraph_of(a)))
        expected = Verdict.SAT if find_homomorphism(big, b) is not None else Verdict.UNSAT
        assert decide_promise(big, b, k) is expected
