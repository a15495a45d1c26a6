"""JSON instance files.

::

    {
      "signature": [{"name": "E", "arity": 2}],
      "left":  {"universe": ["0", "1"], "relations": {"E": [["0", "1"]]}},
      "right": {"universe": ["0", "1"], "relations": {"E": [["0", "1"], ["1", "0"]]}},
      "prefix": [["forall", "0"], ["exists", "1"]]
    }

``right`` may be omitted for commands that only look at the left side and
``prefix`` turns the left side into a quantified structure.  Integer element
ids are accepted and read as strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import CoverwidthError, InvalidStructure
from .qcsp import QUANTIFIERS, QuantifiedStructure
from .relational import RelationSymbol, Structure


class InstanceError(CoverwidthError, ValueError):
    """A malformed instance file; the message starts with the JSON path."""


@dataclass(frozen=True)
class Instance:
    left: Structure
    right: Optional[Structure] = None
    prefix: Optional[tuple] = None

    @property
    def quantified(self) -> Optional[QuantifiedStructure]:
        if self.prefix is None:
            return None
        return QuantifiedStructure(self.prefix, self.left)


def _fail(path: str, message: str):
    raise InstanceError(f"{path}: {message}")


def _element(value, path):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        _fail(path, f"element ids must be strings or integers, got {value!r}")
    return str(value)


def _signature(raw) -> list:
    if not isinstance(raw, list):
        _fail("signature", "expected a list of {name, arity} objects")
    symbols = []
    seen = set()
    for i, entry in enumerate(raw):
        path = f"signature[{i}]"
        if not isinstance(entry, dict) or set(entry) != {"name", "arity"}:
            _fail(path, "expected an object with exactly the keys 'name' and 'arity'")
        name, arity = entry["name"], entry["arity"]
        if not isinstance(name, str) or not name:
            _fail(path, "symbol name must be a nonempty string")
        if isinstance(arity, bool) or not isinstance(arity, int) or arity < 1:
            _fail(path, f"arity of {name!r} must be a positive integer, got {arity!r}")
        if name in seen:
            _fail(path, f"duplicate symbol {name!r}")
        seen.add(name)
        symbols.append(RelationSymbol(name, arity))
    return symbols


def _structure(raw, signature, path) -> Structure:
    if not isinstance(raw, dict) or not set(raw) <= {"universe", "relations"} or "universe" not in raw:
        _fail(path, "expected an object with 'universe' and optional 'relations'")
    universe_raw = raw["universe"]
    if not isinstance(universe_raw, list):
        _fail(f"{path}.universe", "expected a list")
    universe = [_element(x, f"{path}.universe[{i}]") for i, x in enumerate(universe_raw)]
    members = set()
    for i, x in enumerate(universe):
        if x in members:
            _fail(f"{path}.universe[{i}]", f"duplicate element {x!r}")
        members.add(x)
    arities = {s.name: s.arity for s in signature}
    relations_raw = raw.get("relations", {})
    if not isinstance(relations_raw, dict):
        _fail(f"{path}.relations", "expected an object keyed by symbol name")
    relations = {}
    for name, tuples in relations_raw.items():
        rpath = f"{path}.relations.{name}"
        if name not in arities:
            _fail(rpath, f"unknown symbol {name!r}")
        if not isinstance(tuples, list):
            _fail(rpath, "expected a list of tuples")
        rel = set()
        for j, t in enumerate(tuples):
            tpath = f"{rpath}[{j}]"
            if not isinstance(t, list):
                _fail(tpath, "a tuple must be a list")
            if len(t) != arities[name]:
                _fail(tpath, f"tuple length {len(t)} does not match arity {arities[name]} of {name!r}")
            t = tuple(_element(x, f"{tpath}[{p}]") for p, x in enumerate(t))
            for x in t:
                if x not in members:
                    _fail(tpath, f"element {x!r} is not in {path}.universe")
            rel.add(t)
        relations[name] = rel
    return Structure(signature, universe, relations)


def _prefix(raw, left: Structure) -> tuple:
    if not isinstance(raw, list):
        _fail("prefix", "expected a list of [quantifier, variable] pairs")
    prefix = []
    for i, entry in enumerate(raw):
        path = f"prefix[{i}]"
        if not isinstance(entry, list) or len(entry) != 2:
            _fail(path, "expected a [quantifier, variable] pair")
        q, v = entry
        if q not in QUANTIFIERS:
            _fail(path, f"quantifier must be one of {list(QUANTIFIERS)}, got {q!r}")
        prefix.append((q, _element(v, f"{path}[1]")))
    try:
        QuantifiedStructure(prefix, left)
    except InvalidStructure as exc:
        _fail("prefix", str(exc))
    return tuple(prefix)


def parse_instance(text: str) -> Instance:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno} column {exc.colno}: malformed JSON ({exc.msg})") from None
    if not isinstance(raw, dict):
        _fail("$", "expected a JSON object")
    unknown = set(raw) - {"signature", "left", "right", "prefix"}
    if unknown:
        _fail("$", f"unknown keys {sorted(unknown)}")
    for key in ("signature", "left"):
        if key not in raw:
            _fail("$", f"missing key {key!r}")
    signature = _signature(raw["signature"])
    left = _structure(raw["left"], signature, "left")
    right = _structure(raw["right"], signature, "right") if "right" in raw else None
    prefix = _prefix(raw["prefix"], left) if "prefix" in raw else None
    if prefix is not None:
        left = QuantifiedStructure(prefix, left).structure
    return Instance(left, right, prefix)


def structure_to_json(s: Structure) -> dict:
    return {
        "universe": list(s.universe),
        "relations": {
            sym.name: [list(t) for t in sorted(s.relations[sym.name], key=s.sort_key)] for sym in s.signature
        },
    }


def signature_to_json(s: Structure) -> list:
    return [{"name": sym.name, "arity": sym.arity} for sym in s.signature]


def instance_to_json(inst: Instance) -> dict:
    out = {"signature": signature_to_json(inst.left), "left": structure_to_json(inst.left)}
    if inst.right is not None:
        out["right"] = structure_to_json(inst.right)
    if inst.prefix is not None:
        out["prefix"] = [list(p) for p in inst.prefix]
    return out


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_json(inst), indent=2) + "\n"
