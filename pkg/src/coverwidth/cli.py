"""Command-line interface.

Results go to stdout as one JSON object per invocation; diagnostics go to
stderr.  Exit codes: 0 success, 1 usage error, 2 invalid instance, 3 size
bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .consistency import Verdict, decide_promise, projective_k_consistency
from .errors import CoverwidthError, SizeBoundExceeded
from .game import compact_strategy_fixpoint
from .hypergraph import coverwidth, coverwidth_oracle, hypergraph_of
from .instance_io import Instance, InstanceError, parse_instance, signature_to_json, structure_to_json
from .qcsp import qcsp_consistency_decide, qcsp_oracle, quantified_coverwidth, quantified_coverwidth_oracle
from .relational import find_homomorphism
from .solver import Status, solve_no_promise

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_TOO_LARGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("k must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coverwidth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help, k=True):
        p = sub.add_parser(name, help=help)
        p.add_argument("instance", help="instance file ('-' for stdin)")
        if k:
            p.add_argument("--k", type=_positive, required=True)
        return p

    solve = command("solve", "decide A -> B and report an assignment")
    solve.add_argument("--mode", choices=["promise", "no-promise"], default="no-promise")
    command("consistency", "run projective k-consistency and dump the derived instance")
    cw = command("coverwidth", "coverwidth of the left structure", k=False)
    cw.add_argument("--quantified", action="store_true", help="respect the quantifier prefix")
    command("game", "who wins the existential k-cover game")
    command("qcsp", "decide a quantified instance (assumes quantified coverwidth <= k)")

    oracle = sub.add_parser("oracle", help="exhaustive reference verdicts")
    oracle.add_argument("which", choices=["hom", "qcsp", "coverwidth"])
    oracle.add_argument("instance")
    oracle.add_argument("--quantified", action="store_true")
    return parser


def _read(path: str) -> Instance:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}")
    return parse_instance(text)


def _need_right(inst: Instance):
    if inst.right is None:
        raise InstanceError("$: this command needs a 'right' structure")
    return inst.left, inst.right


def _need_prefix(inst: Instance):
    if inst.prefix is None:
        raise InstanceError("$: this command needs a 'prefix'")
    return inst.quantified


def _assignment_json(h, order) -> dict:
    return {x: h[x] for x in order}


def run(args) -> dict:
    inst = _read(args.instance)
    cmd = args.command
    if cmd == "solve":
        a, b = _need_right(inst)
        if args.mode == "promise":
            return {"status": decide_promise(a, b, args.k).value}
        outcome = solve_no_promise(a, b, args.k)
        out = {"status": outcome.status.value}
        if outcome.status is Status.SAT:
            out["assignment"] = _assignment_json(outcome.assignment, a.universe)
        return out
    if cmd == "consistency":
        a, b = _need_right(inst)
        derived, inconsistent = projective_k_consistency(a, b, args.k)
        return {
            "inconsistent": inconsistent,
            "derived": {
                "signature": signature_to_json(derived.left),
                "left": structure_to_json(derived.left),
                "right": structure_to_json(derived.right),
            },
        }
    if cmd == "coverwidth":
        if args.quantified:
            return {"coverwidth": quantified_coverwidth(_need_prefix(inst))}
        return {"coverwidth": coverwidth(hypergraph_of(inst.left))}
    if cmd == "game":
        a, b = _need_right(inst)
        won = compact_strategy_fixpoint(a, b, args.k) is not None
        return {"winner": "duplicator" if won else "spoiler"}
    if cmd == "qcsp":
        _, b = _need_right(inst)
        return {"value": qcsp_consistency_decide(_need_prefix(inst), b, args.k)}
    if cmd == "oracle":
        if args.which == "hom":
            a, b = _need_right(inst)
            h = find_homomorphism(a, b)
            out = {"status": Verdict.UNSAT.value if h is None else Verdict.SAT.value}
            if h is not None:
                out["assignment"] = _assignment_json(h, a.universe)
            return out
        if args.which == "qcsp":
            _, b = _need_right(inst)
            return {"value": qcsp_oracle(_need_prefix(inst), b)}
        if args.quantified:
            return {"coverwidth": quantified_coverwidth_oracle(_need_prefix(inst))}
        return {"coverwidth": coverwidth_oracle(hypergraph_of(inst.left))}
    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result = run(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeBoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (CoverwidthError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(json.dumps(result) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
