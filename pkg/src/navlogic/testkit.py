"""Verification helpers: random systems, an independent recall oracle,
seeded simulation, the T0 fixture certificate and the axiom-closure fuzzer.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import BudgetExceeded, InvalidParams, UnknownState
from .formula import Atom, Implies, NavStatement, Not
from .navigation import (
    BELIEF_BUDGET,
    KINDS,
    MEMORYLESS,
    RECALL,
    belief_count,
    check_memoryless_witness,
    check_recall_witness,
    compose_recall,
    navigability_table,
    synth_recall,
    true_atoms,
)
from .proof import nonempty_subsets
from .strategies import MemorylessStrategy, RecallMachine, parse_machine
from .system import History, TransitionSystem, format_class, parse_system

# -- random systems -------------------------------------------------------


@dataclass(frozen=True)
class SystemParams:
    max_states: int = 6
    max_instructions: int = 3
    max_classes: int = 4
    max_class_size: int = 6
    min_branching: int = 1
    max_branching: int = 2

    def validate(self):
        for name, value in vars(self).items():
            if not isinstance(value, int) or value < 1:
                raise InvalidParams(f"{name} must be a positive integer, got {value!r}")
        if self.min_branching > self.max_branching:
            raise InvalidParams("min_branching exceeds max_branching")


def random_system(seed: int, params: SystemParams = SystemParams()) -> TransitionSystem:
    """Seed-deterministic random system with one view ``v<k>`` per class."""
    params.validate()
    rng = random.Random(seed)
    n = rng.randint(1, params.max_states)
    states = [f"s{k}" for k in range(n)]
    lo = -(-n // params.max_class_size)  # fewest classes the size bound allows
    hi = min(n, params.max_classes)
    if lo > hi:
        raise InvalidParams("class bounds cannot cover the sampled state count")
    k = rng.randint(lo, hi)
    while True:
        labels = [rng.randrange(k) for _ in states]
        sizes = [labels.count(c) for c in range(k)]
        if min(sizes) >= 1 and max(sizes) <= params.max_class_size:
            break
    groups = [[s for s, lab in zip(states, labels) if lab == c] for c in range(k)]
    instructions = [f"i{j}" for j in range(rng.randint(1, params.max_instructions))]
    edges = []
    for s in states:
        for i in instructions:
            size = rng.randint(params.min_branching, min(params.max_branching, n))
            edges.append((s, i, rng.sample(states, size)))
    T = TransitionSystem.build(states, instructions, edges, obs=groups, name=f"random{seed}")
    views = [(f"v{j}", c[0]) for j, c in enumerate(T.classes)]
    return TransitionSystem.build(states, instructions, edges, obs=groups, views=views,
                                  name=f"random{seed}")


def random_formula(rng: random.Random, views=("vA", "vB", "vC", "vD"), depth: int = 3):
    """Random formula tree over ``views`` with nesting at most ``depth``."""
    roll = rng.random()
    if depth == 0 or roll < 0.35:
        lhs = rng.sample(views, rng.randint(1, len(views)))
        rhs = rng.sample(views, rng.randint(1, len(views)))
        return Atom(NavStatement(frozenset(lhs), frozenset(rhs)))
    if roll < 0.6:
        return Not(random_formula(rng, views, depth - 1))
    return Implies(random_formula(rng, views, depth - 1), random_formula(rng, views, depth - 1))


# -- independent recall oracle ----------------------------------------------


def _split(T, belief, instr):
    image = set()
    for w in belief:
        image.update(T.succ(w, instr))
    return [tuple(w for w in c if w in image) for c in T.classes if image.intersection(c)]


def recall_oracle(T: TransitionSystem, A, B, budget=BELIEF_BUDGET) -> bool:
    """Decide recall navigability by AND-OR search over observation histories.

    OR over the instruction issued, AND over the class observed next; a
    node wins once its class is in B*.  Depth is capped by the number of
    distinct beliefs, beyond which a winning strategy would have to repeat
    a belief and could be shortened.
    """
    depth_cap = belief_count(T)
    if depth_cap > budget:
        raise BudgetExceeded(f"belief space {depth_cap} exceeds budget {budget}")
    goal = T.star(B)

    @lru_cache(maxsize=None)
    def wins(belief, depth):
        if T.class_of(belief[0]) in goal:
            return True
        if depth == 0:
            return False
        return any(
            all(wins(part, depth - 1) for part in _split(T, belief, i))
            for i in T.instructions
        )

    return all(wins(c, depth_cap) for c in T.star(A))


# -- simulation ----------------------------------------------------------------


def simulate(T: TransitionSystem, strategy, start, steps: int, seed: int) -> History:
    """Follow ``strategy`` for ``steps`` transitions, resolving nondeterminism
    by a seeded uniform choice."""
    if not T.has_state(start):
        raise UnknownState(f"unknown state {start!r}")
    strategy.validate(T)
    rng = random.Random(seed)
    if isinstance(strategy, MemorylessStrategy):
        choice = strategy.as_dict()
        policy = lambda w, mem: (choice[T.class_of(w)], None)  # noqa: E731
        memory = None
    else:
        init, update, output = strategy.tables()
        memory = init[T.class_of(start)]

        def policy(w, mem):
            return output[mem], mem

    w = start
    out = []
    for _ in range(steps):
        instr, _ = policy(w, memory)
        w = rng.choice(T.succ(w, instr))
        if memory is not None:
            memory = update[(memory, T.class_of(w))]
        out.append((instr, w))
    return History(start, tuple(out))


# -- the T0 fixture -----------------------------------------------------------

T0_STATES = "abcdefgh"
T0_OBS = (("a", "b"), ("c", "d"))
# edges fixed by the textual description; the rest are searched for
T0_KNOWN_EDGES = {
    ("a", "0"): "g", ("b", "0"): "g", ("g", "1"): "a", ("a", "1"): "e",
    ("e", "1"): "c", ("c", "0"): "h", ("b", "1"): "f", ("d", "1"): "h",
    ("h", "1"): "h",
}
T0_FREE_EDGES = (
    ("g", "0"), ("h", "0"), ("e", "0"), ("f", "0"), ("f", "1"), ("c", "1"), ("d", "0"),
)
T0_TABLE = (
    "m m r r m r",
    "- m - - - r",
    "m m m r m m",
    "m m r m m m",
    "m m m m m m",
    "- - - - - m",
)


def load_fixture(name: str) -> str:
    return resources.files("navlogic").joinpath("fixtures", name).read_text()


def load_t0() -> TransitionSystem:
    return parse_system(load_fixture("t0.system"))


def load_t0_machine(T: TransitionSystem | None = None) -> RecallMachine:
    """The '0 once, then 1 until e' recall strategy."""
    return parse_machine(load_fixture("t0_zero_then_one.machine"), T or load_t0())


def _stays_within(T, start, instr, allowed):
    seen, todo = set(), [start]
    while todo:
        w = todo.pop()
        if w in seen:
            continue
        seen.add(w)
        todo.extend(T.succ(w, instr))
    return seen <= set(allowed)


def t0_claims(T: TransitionSystem):
    """(description, predicate) pairs for every textual claim about T0."""
    const = lambda i: MemorylessStrategy.constant(T, i)  # noqa: E731

    def table_matches():
        tab = navigability_table(T)
        return tuple(" ".join(r) for r in tab.cells) == T0_TABLE

    return [
        ("deterministic", lambda: all(len(d) == 1 for _, d in T.transitions)),
        ("classes {a,b},{c,d},{e},{f},{g},{h}",
         lambda: T.classes == (("a", "b"), ("c", "d"), ("e",), ("f",), ("g",), ("h",))),
        ("known edges", lambda: all(T.succ(s, i) == (d,) for (s, i), d in T0_KNOWN_EDGES.items())),
        ("always-0 from b locked in {a,g,b}", lambda: _stays_within(T, "b", "0", "agb")),
        ("always-1 from b locked in {b,f,d,h}", lambda: _stays_within(T, "b", "1", "bfdh")),
        ("0 from c locked in h", lambda: _stays_within(T, T.succ("c", "0")[0], "0", "h")
         and _stays_within(T, T.succ("c", "0")[0], "1", "h")),
        ("1 from d locked in h", lambda: _stays_within(T, T.succ("d", "1")[0], "0", "h")
         and _stays_within(T, T.succ("d", "1")[0], "1", "h")),
        ("always-1 navigates {a,b} to {c,d}", lambda: check_memoryless_witness(T, const("1"), ["vA"], ["vC"])),
        ("always-1 navigates {a,b} to {e},{f}", lambda: check_memoryless_witness(T, const("1"), ["vA"], ["vE", "vF"])),
        ("always-0 navigates {a,b} to {g}", lambda: check_memoryless_witness(T, const("0"), ["vA"], ["vG"])),
        ("always-1 navigates {g} to {e}", lambda: check_memoryless_witness(T, const("1"), ["vG"], ["vE"])),
        ("navigability table", table_matches),
    ]


def certify_t0(T: TransitionSystem) -> list:
    """Names of the T0 claims that ``T`` violates (empty means certified)."""
    return [name for name, pred in t0_claims(T) if not pred()]


def t0_candidate(free_targets) -> TransitionSystem:
    edges = dict(T0_KNOWN_EDGES)
    edges.update(zip(T0_FREE_EDGES, free_targets))
    return TransitionSystem.build(
        T0_STATES, "01", [(s, i, [d]) for (s, i), d in sorted(edges.items())],
        obs=T0_OBS, views=[(f"v{s.upper()}", s) for s in T0_STATES], name="T0",
    )


def t0_completions():
    """Every deterministic completion of the free T0 edges meeting all claims."""
    for targets in itertools.product(T0_STATES, repeat=len(T0_FREE_EDGES)):
        T = t0_candidate(targets)
        if all(pred() for _, pred in t0_claims(T)):
            yield targets


# -- axiom-closure fuzzing ------------------------------------------------------


def closure_violations(T: TransitionSystem, kind: str):
    """Rule instances whose premises are true in T but whose conclusion is not.

    Checked over the atoms built from all declared views.
    """
    true = true_atoms(T, kind)
    subsets = nonempty_subsets(T.view_names)
    out = []
    for a in subsets:
        for b in subsets:
            if a <= b and (a, b) not in true:
                out.append(("reflexivity", a, b))
    for a, b in true:
        for c in subsets:
            if (a | c, b | c) not in true:
                out.append(("augmentation", a | c, b | c))
        if kind == RECALL:
            for b2, c in true:
                if b2 == b and (a, c) not in true:
                    out.append(("transitivity", a, c))
        else:
            for a2 in subsets:
                if a2 <= a and (a2, b) not in true:
                    out.append(("monotonicity", a2, b))
    return out


def oracle_disagreements(T: TransitionSystem):
    subsets = nonempty_subsets(T.view_names)
    out = []
    for a in subsets:
        for b in subsets:
            if (synth_recall(T, a, b) is not None) != recall_oracle(T, a, b):
                out.append(("oracle-equivalence", a, b))
    return out


def composition_failures(T: TransitionSystem):
    """Composed witnesses that fail, over all view triples with witnesses."""
    subsets = nonempty_subsets(T.view_names)
    out = []
    checked = 0
    for a in subsets:
        for b in subsets:
            m1 = synth_recall(T, a, b)
            if m1 is None:
                continue
            for c in subsets:
                m2 = synth_recall(T, b, c)
                if m2 is None:
                    continue
                checked += 1
                if not check_recall_witness(T, compose_recall(T, m1, m2, b), a, c):
                    out.append(("composition", a, c))
    return out, checked


def _fmt(a, b):
    return f"{format_class(sorted(a))} |> {format_class(sorted(b))}"


def run_fuzz(seed: int, count: int, params: SystemParams = SystemParams()):
    """Fuzz ``count`` systems starting at ``seed``; returns (report lines, violations)."""
    lines = []
    violations = 0
    for s in range(seed, seed + count):
        T = random_system(s, params)
        found = []
        for kind in KINDS:
            found += [(f"{kind}-{rule}", a, b) for rule, a, b in closure_violations(T, kind)]
        if belief_count(T) <= 64:
            found += oracle_disagreements(T)
        found += composition_failures(T)[0]
        for prop, a, b in found:
            lines.append(f"seed {s} {prop} {_fmt(a, b)}")
        violations += len(found)
    lines.append(f"checked {count} systems from seed {seed}: {violations} violations")
    return lines, violations


__all__ = [
    "SystemParams", "random_system", "random_formula", "recall_oracle", "simulate", "load_t0",
    "load_t0_machine", "certify_t0", "t0_completions", "closure_violations",
    "oracle_disagreements", "composition_failures", "run_fuzz", "MEMORYLESS", "RECALL",
]
