"""Derivability of atomic navigation statements in the two axiom systems.

Recall: Reflexivity, Augmentation, Transitivity (Armstrong's axioms).
Memoryless: Reflexivity, Augmentation, Monotonicity.

Hypotheses and goals are atoms only.  ``derives`` uses closed forms,
``saturate`` is the brute-force oracle they are cross-checked against, and
``derive_proof`` / ``check_proof`` produce and verify explicit derivations.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import BudgetExceeded, FormatError, NavlogicError, UnknownView
from .formula import NavStatement, format_set, parse_atom, parse_view_list

RECALL = "recall"
MEMORYLESS = "memoryless"

RULES = {
    RECALL: frozenset({"hyp", "refl", "aug", "trans"}),
    MEMORYLESS: frozenset({"hyp", "refl", "aug", "mono"}),
}

SATURATE_BUDGET = 4


def _system(name) -> str:
    if name not in RULES:
        raise ValueError(f"unknown axiom system {name!r}")
    return name


def _universe(views, hyps, goal=None):
    if views is None:
        return None
    views = frozenset(views)
    for stmt in list(hyps) + ([goal] if goal is not None else []):
        missing = stmt.views - views
        if missing:
            raise UnknownView(f"view(s) {format_set(missing)} not in the universe")
    return views


# -- closures -------------------------------------------------------------


def closure_recall(hyps: Iterable[NavStatement], B, views=None) -> frozenset:
    """Least superset of B closed under: C |> D in hyps and D inside -> add C."""
    hyps = list(hyps)
    _universe(views, hyps)
    cl = set(B)
    if views is not None and not cl <= set(views):
        raise UnknownView(f"view(s) {format_set(set(cl) - set(views))} not in the universe")
    changed = True
    while changed:
        changed = False
        for h in hyps:
            if h.rhs <= cl and not h.lhs <= cl:
                cl |= h.lhs
                changed = True
    return frozenset(cl)


def derives(system: str, hyps: Iterable[NavStatement], goal: NavStatement, views=None) -> bool:
    system = _system(system)
    hyps = list(hyps)
    _universe(views, hyps, goal)
    A, B = goal.lhs, goal.rhs
    if system == RECALL:
        return A <= closure_recall(hyps, B)
    if A <= B:
        return True
    return any(h.rhs <= B and A <= h.lhs | B for h in hyps)


# -- proof objects --------------------------------------------------------


@dataclass(frozen=True)
class Line:
    stmt: NavStatement
    rule: str  # hyp | refl | aug | trans | mono
    refs: tuple = ()  # hypothesis index, or earlier line indices (0-based)
    side: frozenset = None  # C for aug, A for mono


@dataclass(frozen=True)
class Derivation:
    hypotheses: tuple
    lines: tuple

    @property
    def conclusion(self):
        return self.lines[-1].stmt if self.lines else None


def proof_errors(system: str, d: Derivation, views=None) -> list:
    """Diagnostics for every line that fails its local check."""
    system = _system(system)
    errors = []
    allowed = RULES[system]
    views = frozenset(views) if views is not None else None
    for k, line in enumerate(d.lines):
        where = f"line {k + 1}"
        s, rule, refs = line.stmt, line.rule, line.refs
        if rule not in allowed:
            errors.append(f"{where}: rule {rule!r} is not part of the {system} system")
            continue
        if views is not None and not s.views <= views:
            errors.append(f"{where}: uses views outside the universe")
            continue
        if rule in ("aug", "trans", "mono") and any(not 0 <= r < k for r in refs):
            errors.append(f"{where}: refers to a line that does not precede it")
            continue
        if rule == "hyp":
            if len(refs) != 1 or not 0 <= refs[0] < len(d.hypotheses):
                errors.append(f"{where}: no such hypothesis")
            elif d.hypotheses[refs[0]] != s:
                errors.append(f"{where}: does not match hypothesis {refs[0] + 1}")
        elif rule == "refl":
            if not s.lhs <= s.rhs:
                errors.append(f"{where}: reflexivity needs lhs inside rhs")
        elif rule == "aug":
            src = d.lines[refs[0]].stmt
            C = line.side
            if not C:
                errors.append(f"{where}: augmentation needs a nonempty side set")
            elif views is not None and not C <= views:
                errors.append(f"{where}: augmentation side set outside the universe")
            elif s != NavStatement(src.lhs | C, src.rhs | C):
                errors.append(f"{where}: not the augmentation of line {refs[0] + 1}")
        elif rule == "trans":
            if len(refs) != 2:
                errors.append(f"{where}: transitivity takes two lines")
                continue
            first, second = d.lines[refs[0]].stmt, d.lines[refs[1]].stmt
            if first.rhs != second.lhs:
                errors.append(f"{where}: middle sets of lines {refs[0] + 1} and {refs[1] + 1} differ")
            elif s != NavStatement(first.lhs, second.rhs):
                errors.append(f"{where}: wrong conclusion for transitivity")
        elif rule == "mono":
            src = d.lines[refs[0]].stmt
            A = line.side
            if not A or not A <= src.lhs:
                errors.append(f"{where}: monotonicity needs a nonempty subset of the lhs")
            elif s != NavStatement(A, src.rhs):
                errors.append(f"{where}: wrong conclusion for monotonicity")
    if not d.lines:
        errors.append("empty derivation")
    return errors


def check_proof(system: str, d: Derivation, views=None) -> bool:
    try:
        return not proof_errors(system, d, views)
    except (NavlogicError, IndexError, TypeError):
        return False


class _Builder:
    def __init__(self, hyps):
        self.hyps = tuple(hyps)
        self.lines = []

    def add(self, stmt, rule, refs=(), side=None) -> int:
        self.lines.append(Line(stmt, rule, tuple(refs), side))
        return len(self.lines) - 1

    def derivation(self):
        return Derivation(self.hyps, tuple(self.lines))


def _recall_proof(hyps, goal) -> Derivation:
    A, B = goal.lhs, goal.rhs
    p = _Builder(hyps)
    if A <= B:
        p.add(goal, "refl")
        return p.derivation()
    for k, h in enumerate(hyps):
        if h.rhs == B and A <= h.lhs:
            if A == h.lhs:
                p.add(goal, "hyp", (k,))
            else:
                r = p.add(NavStatement(A, h.lhs), "refl")
                hl = p.add(h, "hyp", (k,))
                p.add(goal, "trans", (r, hl))
            return p.derivation()

    # Replay the closure run, keeping a proof of cur |> B.  Each firing
    # hypothesis C |> D (D inside cur) is augmented by cur to give
    # (C u cur) |> cur, then chained onto cur |> B.
    cur = frozenset(B)
    cur_line = None  # None while cur == B (reflexive, not yet written)
    changed = True
    while changed and not A <= cur:
        changed = False
        for k, h in enumerate(hyps):
            if h.rhs <= cur and not h.lhs <= cur:
                hl = p.add(h, "hyp", (k,))
                bigger = cur | h.lhs
                al = p.add(NavStatement(bigger, cur), "aug", (hl,), cur)
                if cur_line is None:
                    cur_line = al
                else:
                    cur_line = p.add(NavStatement(bigger, B), "trans", (al, cur_line))
                cur = bigger
                changed = True
                if A <= cur:
                    break
    if A != cur:
        r = p.add(NavStatement(A, cur), "refl")
        p.add(goal, "trans", (r, cur_line))
    return p.derivation()


def _memoryless_proof(hyps, goal) -> Derivation:
    A, B = goal.lhs, goal.rhs
    p = _Builder(hyps)
    if A <= B:
        p.add(goal, "refl")
        return p.derivation()
    k, h = next((k, h) for k, h in enumerate(hyps) if h.rhs <= B and A <= h.lhs | B)
    last = p.add(h, "hyp", (k,))
    augmented = NavStatement(h.lhs | B, h.rhs | B)
    if augmented != h:
        last = p.add(augmented, "aug", (last,), frozenset(B))
    if augmented.lhs != A:
        p.add(goal, "mono", (last,), frozenset(A))
    return p.derivation()


def derive_proof(system: str, hyps: Iterable[NavStatement], goal: NavStatement, views=None):
    system = _system(system)
    hyps = tuple(hyps)
    if not derives(system, hyps, goal, views):
        return None
    if system == RECALL:
        return _recall_proof(hyps, goal)
    return _memoryless_proof(hyps, goal)


# -- saturation oracle ----------------------------------------------------


def nonempty_subsets(views) -> list:
    views = sorted(views)
    return [frozenset(c) for r in range(1, len(views) + 1) for c in combinations(views, r)]


def all_atoms(views) -> list:
    subs = nonempty_subsets(views)
    return [NavStatement(a, b) for a in subs for b in subs]


def saturate(system: str, hyps: Iterable[NavStatement], views, bound=SATURATE_BUDGET) -> frozenset:
    """Every atom over ``views`` derivable from ``hyps``, by exhaustive rule application."""
    system = _system(system)
    views = frozenset(views)
    if len(views) > bound:
        raise BudgetExceeded(f"saturation over {len(views)} views exceeds bound {bound}")
    hyps = list(hyps)
    _universe(views, hyps)
    subs = nonempty_subsets(views)
    known = set(hyps)
    known.update(NavStatement(a, b) for a in subs for b in subs if a <= b)
    while True:
        new = set()
        for s in known:
            for c in subs:
                new.add(NavStatement(s.lhs | c, s.rhs | c))
            if system == MEMORYLESS:
                for a in subs:
                    if a <= s.lhs:
                        new.add(NavStatement(a, s.rhs))
        if system == RECALL:
            by_lhs: dict = {}
            for s in known:
                by_lhs.setdefault(s.lhs, []).append(s)
            for s in known:
                for t in by_lhs.get(s.rhs, ()):
                    new.add(NavStatement(s.lhs, t.rhs))
        new -= known
        if not new:
            return frozenset(known)
        known |= new


# -- text format ----------------------------------------------------------

_HYP = re.compile(r"^hyp\s+(\d+)\s*:\s*(.+)$")
_LINE = re.compile(r"^line\s+(\d+)\s*:\s*(.+?)\s+by\s+(.+)$")


def format_proof(d: Derivation) -> str:
    out = [f"hyp {k + 1}: {h}" for k, h in enumerate(d.hypotheses)]
    for k, line in enumerate(d.lines):
        if line.rule == "refl":
            why = "refl"
        elif line.rule == "hyp":
            why = f"hyp {line.refs[0] + 1}"
        elif line.rule == "trans":
            why = f"trans {line.refs[0] + 1} {line.refs[1] + 1}"
        else:
            why = f"{line.rule} {line.refs[0] + 1} {format_set(line.side)}"
        out.append(f"line {k + 1}: {line.stmt} by {why}")
    return "\n".join(out) + "\n"


def parse_proof(text: str) -> Derivation:
    hyps = []
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            if m := _HYP.match(body):
                if int(m.group(1)) != len(hyps) + 1:
                    raise FormatError("hypotheses must be numbered 1, 2, ...", lineno)
                if lines:
                    raise FormatError("hypotheses must precede proof lines", lineno)
                hyps.append(parse_atom(m.group(2)))
            elif m := _LINE.match(body):
                if int(m.group(1)) != len(lines) + 1:
                    raise FormatError("lines must be numbered 1, 2, ...", lineno)
                lines.append(_parse_justification(parse_atom(m.group(2)), m.group(3), lineno))
            else:
                raise FormatError("expected 'hyp <n>: ...' or 'line <n>: ... by ...'", lineno)
        except FormatError:
            raise
        except NavlogicError as e:
            raise FormatError(str(e), lineno) from None
    return Derivation(tuple(hyps), tuple(lines))


def _parse_justification(stmt, text, lineno) -> Line:
    rule, _, rest = text.strip().partition(" ")
    rest = rest.strip()
    if rule == "refl" and not rest:
        return Line(stmt, "refl")
    if rule == "hyp" and rest.isdigit():
        return Line(stmt, "hyp", (int(rest) - 1,))
    if rule == "trans":
        parts = rest.split()
        if len(parts) == 2 and all(p.isdigit() for p in parts):
            return Line(stmt, "trans", tuple(int(p) - 1 for p in parts))
    if rule in ("aug", "mono"):
        ref, _, side = rest.partition(" ")
        if ref.isdigit() and side.strip():
            return Line(stmt, rule, (int(ref) - 1,), parse_view_list(side))
    raise FormatError(f"bad justification {text.strip()!r}", lineno)
