"""Canonical transition systems built from a finite set of atomic hypotheses.

Both constructions use one state per view plus an absorbing sink.  The
recall system has an instruction ``(A, B)`` for every derivable ``A |> B``
that moves any state of A into B.  The memoryless system only keeps
derivable pairs with disjoint sides and routes each through its own
wormhole state; all wormholes share one observation class.

Instruction ``(A, B)`` is named ``x+y:z`` and its wormhole ``@w:x+y:z``.
"""
from __future__ import annotations

from .errors import BudgetExceeded, InvalidSystem, UnknownView
from .proof import MEMORYLESS, RECALL, derives, nonempty_subsets
from .formula import NavStatement
from .system import TransitionSystem, is_identifier

SINK = "@sink"
DUMMY = "@idle"

RECALL_BOUND = 4
MEMORYLESS_BOUND = 3


def instruction_name(A, B) -> str:
    return "+".join(sorted(A)) + ":" + "+".join(sorted(B))


def parse_instruction_name(name: str):
    lhs, _, rhs = name.partition(":")
    return frozenset(lhs.split("+")), frozenset(rhs.split("+"))


def wormhole(A, B) -> str:
    return "@w:" + instruction_name(A, B)


def _prepare(hyps, views, bound):
    views = sorted(set(views))
    if not views:
        raise InvalidSystem("the view universe must be nonempty")
    if len(views) > bound:
        raise BudgetExceeded(f"{len(views)} views exceeds the canonical bound {bound}")
    for v in views:
        if not is_identifier(v) or v.startswith("@") or "+" in v or ":" in v:
            raise InvalidSystem(f"view name {v!r} cannot be used in a canonical system")
    hyps = list(hyps)
    for h in hyps:
        if not h.views <= set(views):
            raise UnknownView(f"hypothesis {h} uses views outside the universe")
    return views, hyps


def build_recall_canonical(hyps, views, bound=RECALL_BOUND) -> TransitionSystem:
    views, hyps = _prepare(hyps, views, bound)
    pairs = [
        (a, b)
        for a in nonempty_subsets(views)
        for b in nonempty_subsets(views)
        if derives(RECALL, hyps, NavStatement(a, b))
    ]
    states = views + [SINK]
    edges = []
    for a, b in pairs:
        name = instruction_name(a, b)
        for w in states:
            edges.append((w, name, sorted(b) if w in a else [SINK]))
    return TransitionSystem.build(
        states,
        [instruction_name(a, b) for a, b in pairs],
        edges,
        views=[(v, v) for v in views],
        name="canonical_recall",
    )


def build_memoryless_canonical(hyps, views, bound=MEMORYLESS_BOUND) -> TransitionSystem:
    views, hyps = _prepare(hyps, views, bound)
    pairs = [
        (a, b)
        for a in nonempty_subsets(views)
        for b in nonempty_subsets(views)
        if not a & b and derives(MEMORYLESS, hyps, NavStatement(a, b))
    ]
    holes = [wormhole(a, b) for a, b in pairs]
    states = views + [SINK] + holes
    edges = []
    for a, b in pairs:
        name = instruction_name(a, b)
        hole = wormhole(a, b)
        for w in states:
            if w in a:
                edges.append((w, name, [hole]))
            elif w == hole:
                edges.append((w, name, sorted(b)))
            else:
                edges.append((w, name, [SINK]))
    instructions = [instruction_name(a, b) for a, b in pairs]
    if not instructions:
        # instruction sets must be nonempty; this one only leads to the sink
        instructions = [DUMMY]
        edges = [(w, DUMMY, [SINK]) for w in states]
    return TransitionSystem.build(
        states,
        instructions,
        edges,
        obs=[holes] if holes else [],
        views=[(v, v) for v in views],
        name="canonical_memoryless",
    )


def build_canonical(kind: str, hyps, views) -> TransitionSystem:
    if kind == RECALL:
        return build_recall_canonical(hyps, views)
    if kind == MEMORYLESS:
        return build_memoryless_canonical(hyps, views)
    raise ValueError(f"unknown axiom system {kind!r}")
