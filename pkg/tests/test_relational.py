import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coverwidth.errors import InvalidStructure, NotTotal, OutsideUniverse, SignatureMismatch
from coverwidth.relational import (
    PartialMapping,
    Structure,
    are_homomorphically_equivalent,
    find_homomorphism,
    is_homomorphism,
    is_projective_homomorphism,
    validate_structure,
)

from generators import DIRECTED_EDGE, EDGE, K2, K3, random_instance


def test_valid_structure_has_empty_report():
    assert validate_structure(K3) == []


def test_arity_violation_names_symbol():
    s = Structure([("P", 1)], ["a", "b"], {"P": [("a", "b")]})
    report = validate_structure(s)
    assert [v.kind for v in report] == ["arity"]
    assert report[0].symbol == "P" and report[0].tuple == ("a", "b")


def test_membership_violation_names_element():
    s = Structure(EDGE, ["a"], {"E": [("a", "z")]})
    report = validate_structure(s)
    assert [(v.kind, v.element) for v in report] == [("membership", "z")]


def test_duplicate_symbol_and_element_reported():
    s = Structure([("P", 1), ("P", 1)], ["a", "a"])
    assert {v.kind for v in validate_structure(s)} == {"duplicate-symbol", "duplicate-element"}


def test_zero_arity_rejected():
    with pytest.raises(InvalidStructure):
        Structure([("P", 0)], ["a"])


def test_duplicate_tuples_collapse():
    s = Structure(EDGE, ["a", "b"], {"E": [("a", "b"), ("a", "b")]})
    assert s.relations["E"] == {("a", "b")}


def test_identity_is_homomorphism():
    assert is_homomorphism({x: x for x in K3.universe}, K3, K3)


def test_k2_into_k3():
    assert is_homomorphism({"0": "0", "1": "1"}, K2, K3)


def test_constant_map_on_k3_fails():
    assert not is_homomorphism({"0": "0", "1": "0", "2": "0"}, K3, K3)


def test_homomorphism_errors_are_distinct():
    other = Structure([("F", 2)], ["0"])
    with pytest.raises(SignatureMismatch):
        is_homomorphism({"0": "0"}, other, K2)
    with pytest.raises(NotTotal):
        is_homomorphism({"0": "0"}, K3, K3)
    with pytest.raises(OutsideUniverse):
        is_homomorphism({"0": "0", "1": "1", "2": "9"}, K3, K3)


def test_find_homomorphism_k2_k3_is_first_in_lexicographic_order():
    # maps in order: 00, 01, ... ; 00 is a loop, 01 is the first hit
    assert find_homomorphism(K2, K3) == {"0": "0", "1": "1"}


def test_find_homomorphism_k3_k2_absent():
    assert all(
        not is_homomorphism(dict(zip(K3.universe, imgs)), K3, K2)
        for imgs in itertools.product(K2.universe, repeat=3)
    )
    assert find_homomorphism(K3, K2) is None


def test_find_homomorphism_empty_left():
    empty = Structure(EDGE, [])
    assert find_homomorphism(empty, K2) == {}
    assert find_homomorphism(empty, Structure(EDGE, [])) == {}


def test_projective_examples():
    assert is_projective_homomorphism({}, K3, K2)
    assert not is_projective_homomorphism({"0": "0", "1": "0"}, K3, K2)
    assert is_projective_homomorphism({"0": "0", "1": "1"}, K3, K2)


def test_projective_empty_map_needs_nonempty_relation():
    assert not is_projective_homomorphism({}, K3, Structure(EDGE, ["0"]))


def test_homomorphic_equivalence_examples():
    assert are_homomorphically_equivalent(K3, K3)
    assert not are_homomorphically_equivalent(K3, K2)
    assert find_homomorphism(DIRECTED_EDGE, K2) is not None
    assert find_homomorphism(K2, DIRECTED_EDGE) is None
    assert not are_homomorphically_equivalent(K2, DIRECTED_EDGE)


def test_partial_mapping_is_hashable_value():
    h = PartialMapping({"a": "0", "b": "1"})
    assert h == {"b": "1", "a": "0"}
    assert hash(h) == hash(PartialMapping([("b", "1"), ("a", "0")]))
    assert h.restrict({"a"}) == {"a": "0"}
    assert h.extend("c", "2").domain == {"a", "b", "c"}


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_returned_witness_verifies(seed):
    a, b = random_instance(random.Random(seed))
    h = find_homomorphism(a, b)
    exists = any(
        is_homomorphism(dict(zip(a.universe, imgs)), a, b)
        for imgs in itertools.product(b.universe, repeat=len(a.universe))
    )
    assert (h is not None) == exists
    if h is not None:
        assert is_homomorphism(h, a, b)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_homomorphisms_are_projective_and_restrictions_stay_projective(seed):
    rng = random.Random(seed)
    a, b = random_instance(rng)
    for imgs in itertools.product(b.universe, repeat=len(a.universe)):
        h = PartialMapping(zip(a.universe, imgs))
        if is_homomorphism(h, a, b):
            assert is_projective_homomorphism(h, a, b)
        if is_projective_homomorphism(h, a, b):
            keep = [x for x in a.universe if rng.random() < 0.5]
            assert is_projective_homomorphism(h.restrict(keep), a, b)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_homomorphic_equivalence_reflexive_symmetric(seed):
    rng = random.Random(seed)
    a, _ = random_instance(rng)
    sig = a.signature
    b = Structure(sig, a.universe, {s.name: set(a.relations[s.name]) for s in sig})
    c, _ = random_instance(rng)
    c = Structure(sig, c.universe, {s.name: {t for t in c.relations.get(s.name, ()) if len(t) == s.arity} for s in sig})
    assert are_homomorphically_equivalent(a, b)
    assert are_homomorphically_equivalent(a, c) == are_homomorphically_equivalent(c, a)
