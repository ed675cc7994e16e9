"""Command-line interface.

Exit codes: 0 for a positive answer, 1 for a negative one, 2 for any error
(printed as a single ``error: ...`` line on stderr).
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import canonical, proof
from .errors import NavlogicError
from .formula import format_formula, parse_atom, parse_formula, parse_view_list
from .navigation import (
    KINDS,
    MEMORYLESS,
    check_memoryless_witness,
    check_recall_witness,
    evaluate,
    navigability_table,
    synth_memoryless,
    synth_recall,
)
from .strategies import format_machine, format_memoryless, parse_machine, parse_memoryless
from .system import format_system, parse_system
from .testkit import SystemParams, run_fuzz


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Result:
    status: int
    stdout: str = ""
    stderr: str = ""


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _system(path):
    return parse_system(_read(path))


def cmd_check(args):
    T = _system(args.system)
    value = evaluate(T, parse_formula(args.formula), args.kind)
    return Result(0 if value else 1, "true\n" if value else "false\n")


def cmd_synth(args):
    T = _system(args.system)
    A, B = parse_view_list(args.src), parse_view_list(args.dst)
    if args.kind == MEMORYLESS:
        s = synth_memoryless(T, A, B)
        text = None if s is None else format_memoryless(s, T)
    else:
        m = synth_recall(T, A, B)
        text = None if m is None else format_machine(m, T)
    if text is None:
        return Result(1, "none\n")
    return Result(0, text)


def cmd_verify(args):
    T = _system(args.system)
    A, B = parse_view_list(args.src), parse_view_list(args.dst)
    text = _read(args.strategy)
    if args.kind == MEMORYLESS:
        ok = check_memoryless_witness(T, parse_memoryless(text, T), A, B)
    else:
        ok = check_recall_witness(T, parse_machine(text, T), A, B)
    return Result(0 if ok else 1, "ok\n" if ok else "fail\n")


def cmd_table(args):
    return Result(0, navigability_table(_system(args.system)).format())


def _views(args, hyps, goal=None):
    if args.views:
        return parse_view_list(args.views)
    names = set()
    for s in hyps + ([goal] if goal else []):
        names |= s.views
    return frozenset(names)


def cmd_derive(args):
    hyps = [parse_atom(h) for h in args.hyp]
    goal = parse_atom(args.goal)
    views = _views(args, hyps, goal)
    d = proof.derive_proof(args.axioms, hyps, goal, views)
    if d is None:
        return Result(1, "not derivable\n")
    out = "derivable\n"
    if args.proof:
        out += proof.format_proof(d)
    return Result(0, out)


def cmd_checkproof(args):
    d = proof.parse_proof(_read(args.proof_file))
    errors = proof.proof_errors(args.axioms, d)
    if errors:
        return Result(1, "fail\n", "".join(f"{e}\n" for e in errors))
    return Result(0, "ok\n")


def cmd_canonical(args):
    hyps = [parse_atom(h) for h in args.hyp]
    views = _views(args, hyps)
    T = canonical.build_canonical(args.axioms, hyps, views)
    return Result(0, format_system(T))


def cmd_fuzz(args):
    params = SystemParams(max_states=args.max_states)
    lines, violations = run_fuzz(args.seed, args.count, params)
    return Result(1 if violations else 0, "\n".join(lines) + "\n")


def cmd_format(args):
    return Result(0, format_formula(parse_formula(args.formula)) + "\n")


def build_parser():
    p = _Parser(prog="navlogic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def kind(sp):
        sp.add_argument("--kind", choices=KINDS, required=True)

    def endpoints(sp):
        sp.add_argument("--from", dest="src", required=True, help="views, e.g. vA,vB")
        sp.add_argument("--to", dest="dst", required=True, help="views, e.g. vE")

    def axioms(sp):
        sp.add_argument("--axioms", choices=(proof.RECALL, proof.MEMORYLESS), required=True)

    sp = sub.add_parser("check", help="evaluate a formula on a system")
    sp.add_argument("system")
    sp.add_argument("formula")
    kind(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("synth", help="synthesize a witness strategy")
    sp.add_argument("system")
    endpoints(sp)
    kind(sp)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("verify", help="check a strategy file against A |> B")
    sp.add_argument("system")
    sp.add_argument("strategy")
    endpoints(sp)
    kind(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("table", help="navigability between all classes")
    sp.add_argument("system")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("derive", help="decide derivability of an atom")
    axioms(sp)
    sp.add_argument("--hyp", action="append", default=[])
    sp.add_argument("--goal", required=True)
    sp.add_argument("--views", help="view universe (default: views mentioned)")
    sp.add_argument("--proof", action="store_true", help="print the derivation")
    sp.set_defaults(func=cmd_derive)

    sp = sub.add_parser("checkproof", help="check a proof file")
    axioms(sp)
    sp.add_argument("proof_file")
    sp.set_defaults(func=cmd_checkproof)

    sp = sub.add_parser("canonical", help="emit the canonical system for hypotheses")
    axioms(sp)
    sp.add_argument("--views", required=True)
    sp.add_argument("--hyp", action="append", default=[])
    sp.set_defaults(func=cmd_canonical)

    sp = sub.add_parser("fuzz", help="property fuzzing on random systems")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--max-states", type=int, default=6)
    sp.set_defaults(func=cmd_fuzz)

    sp = sub.add_parser("format", help="print a formula in canonical form")
    sp.add_argument("formula")
    sp.set_defaults(func=cmd_format)
    return p


def _one_line(text):
    return " ".join(str(text).split())


def run_command(argv) -> Result:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as e:
        return Result(2, "", f"error: {_one_line(e)}\n")
    except (NavlogicError, OSError, ValueError) as e:
        return Result(2, "", f"error: {_one_line(e)}\n")


def main(argv=None):
    res = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(res.stdout)
    sys.stderr.write(res.stderr)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
