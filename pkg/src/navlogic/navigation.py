"""Navigability between sets of observation classes.

A statement ``A |> B`` holds for a strategy when every infinite path that
starts in a class of A* (and follows the strategy) visits a class of B*,
where a visit at step 0 counts.  Because every state has successors, a
strategy fails exactly when some start reaches a goal-avoiding cycle.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import BudgetExceeded
from .formula import Atom, Implies, Not, parse_formula
from .strategies import MemorylessStrategy, RecallMachine
from .system import TransitionSystem, format_class

MEMORYLESS_BUDGET = 2**20
BELIEF_BUDGET = 2**20

MEMORYLESS = "memoryless"
RECALL = "recall"
KINDS = (MEMORYLESS, RECALL)


def _classes(T, views) -> frozenset:
    return T.star(views)


def _goal_states(T, goal_classes) -> frozenset:
    return frozenset(w for c in goal_classes for w in c)


def _avoids_forever(starts, successors, is_goal) -> bool:
    """True iff some start has an infinite path that never meets a goal node.

    Iterative DFS over non-goal nodes; a back edge is a goal-avoiding lasso.
    """
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict = {}
    for s in starts:
        if is_goal(s) or color.get(s) == BLACK:
            continue
        stack = [(s, iter(successors(s)))]
        color[s] = GREY
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if is_goal(nxt):
                    continue
                c = color.get(nxt, WHITE)
                if c == GREY:
                    return True
                if c == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(successors(nxt))))
                    break
            else:
                color[node] = BLACK
                stack.pop()
    return False


# -- witness checks -----------------------------------------------------------


def check_memoryless_witness(T: TransitionSystem, s: MemorylessStrategy, A, B) -> bool:
    s.validate(T)
    start_classes, goal_classes = _classes(T, A), _classes(T, B)
    choice = s.as_dict()
    goal = _goal_states(T, goal_classes)
    starts = [w for c in T.classes if c in start_classes for w in c]
    return not _avoids_forever(
        starts, lambda w: T.succ(w, choice[T.class_of(w)]), goal.__contains__
    )


def check_recall_witness(T: TransitionSystem, M: RecallMachine, A, B) -> bool:
    M.validate(T)
    start_classes, goal_classes = _classes(T, A), _classes(T, B)
    init, update, output = M.tables()
    goal = _goal_states(T, goal_classes)

    def successors(node):
        w, m = node
        return [(v, update[(m, T.class_of(v))]) for v in T.succ(w, output[m])]

    starts = [(w, init[c]) for c in T.classes if c in start_classes for w in c]
    return not _avoids_forever(starts, successors, lambda node: node[0] in goal)


# -- memoryless synthesis -----------------------------------------------------


def _perfect_info_losing(T, goal) -> frozenset:
    """States from which even a state-observing controller cannot force the goal."""
    win = set(goal)
    changed = True
    while changed:
        changed = False
        for w in T.states:
            if w not in win and any(
                all(v in win for v in T.succ(w, i)) for i in T.instructions
            ):
                win.add(w)
                changed = True
    return frozenset(T.states) - win


def _partial_conflict(T, assign, class_idx, starts, goal, losing):
    """Find a counterexample under a partial class assignment.

    Looks for a path from a start, through assigned non-goal states, that
    either closes a cycle or steps into a state from which the goal cannot
    be forced at all.  Returns the class indices along that path, or None.
    """
    done: set = set()
    for s in starts:
        if s in done:
            continue
        if assign[class_idx[s]] is None:
            continue
        on_stack = {s}
        stack = [(s, iter(T.succ(s, assign[class_idx[s]])))]
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if nxt in goal:
                    continue
                if nxt in losing or nxt in on_stack:
                    return {class_idx[n] for n, _ in stack}
                if nxt in done or assign[class_idx[nxt]] is None:
                    continue
                on_stack.add(nxt)
                stack.append((nxt, iter(T.succ(nxt, assign[class_idx[nxt]]))))
                break
            else:
                done.add(node)
                on_stack.discard(node)
                stack.pop()
    return None


def _synth_memoryless(T, start_classes, goal_classes, budget=MEMORYLESS_BUDGET):
    n = len(T.classes)
    if len(T.instructions) ** n > budget:
        raise BudgetExceeded(
            f"memoryless search space {len(T.instructions)}^{n} exceeds budget {budget}"
        )
    goal = _goal_states(T, goal_classes)
    starts = [w for c in T.classes if c in start_classes for w in c if w not in goal]
    losing = _perfect_info_losing(T, goal)
    if any(w in losing for w in starts):
        return None
    class_idx = {w: k for k, c in enumerate(T.classes) for w in c}
    assign: list = [None] * n

    # Depth-first over class->instruction maps in lexicographic order with
    # conflict-directed backjumping: a counterexample path only depends on
    # the classes it passes through, so subtrees that keep those fixed are
    # skipped.  The first full map reached is the lexicographically first
    # passing one.
    def search(k):
        if k == n:
            return list(assign)
        conflict: set = set()
        for instr in T.instructions:
            assign[k] = instr
            found = _partial_conflict(T, assign, class_idx, starts, goal, losing)
            if found is None:
                found = search(k + 1)
                if isinstance(found, list):
                    return found
            if k not in found:
                assign[k] = None
                return found
            conflict |= found - {k}
        assign[k] = None
        return conflict

    result = search(0)
    if not isinstance(result, list):
        return None
    return MemorylessStrategy(tuple(zip(T.classes, result)))


@lru_cache(maxsize=4096)
def _synth_memoryless_cached(T, start_classes, goal_classes, budget):
    return _synth_memoryless(T, start_classes, goal_classes, budget)


def synth_memoryless(T: TransitionSystem, A, B, budget=MEMORYLESS_BUDGET):
    """Lexicographically first memoryless witness for ``A |> B``, or None."""
    return _synth_memoryless_cached(T, _classes(T, A), _classes(T, B), budget)


# -- recall synthesis ---------------------------------------------------------


def belief_count(T: TransitionSystem) -> int:
    return sum(2 ** len(c) - 1 for c in T.classes)


def _belief_key(T, b):
    return (T.class_index(T.class_of(b[0])), len(b), [T.state_index(w) for w in b])


def _belief_successors(T, b, instr):
    """Split the image of belief ``b`` under ``instr`` by observation class."""
    image = set()
    for w in b:
        image.update(T.succ(w, instr))
    out = []
    for c in T.classes:
        part = tuple(w for w in c if w in image)
        if part:
            out.append((c, part))
    return out


@dataclass(frozen=True)
class RecallSolution:
    """Ranked winning beliefs for one goal set.

    ``rank[b]`` is the round in which belief ``b`` entered the fixpoint and
    ``policy[b]`` the instruction recorded then (None for goal beliefs).
    """

    goal_classes: frozenset
    rank: dict
    policy: dict

    def wins(self, c) -> bool:
        return c in self.rank


@lru_cache(maxsize=1024)
def recall_solution(T: TransitionSystem, goal_classes: frozenset, budget=BELIEF_BUDGET):
    if belief_count(T) > budget:
        raise BudgetExceeded(
            f"belief space {belief_count(T)} exceeds budget {budget}"
        )
    # Beliefs reachable from any full class under any instruction; the
    # winning region restricted to these is closed under successors.
    beliefs = []
    seen = set()
    frontier = list(T.classes)
    succs: dict = {}
    while frontier:
        b = frontier.pop(0)
        if b in seen:
            continue
        seen.add(b)
        beliefs.append(b)
        succs[b] = {i: [p for _, p in _belief_successors(T, b, i)] for i in T.instructions}
        for i in T.instructions:
            frontier.extend(p for p in succs[b][i] if p not in seen)
    beliefs.sort(key=lambda b: _belief_key(T, b))

    rank: dict = {}
    policy: dict = {}
    for b in beliefs:
        if T.class_of(b[0]) in goal_classes:
            rank[b] = 0
            policy[b] = None
    n = 0
    while True:
        n += 1
        added = {}
        for b in beliefs:
            if b in rank:
                continue
            for i in T.instructions:
                if all(p in rank for p in succs[b][i]):
                    added[b] = i
                    break
        if not added:
            break
        for b, i in added.items():
            rank[b] = n
            policy[b] = i
    return RecallSolution(goal_classes, rank, policy)


def recall_navigable(T: TransitionSystem, start_classes, goal_classes, budget=BELIEF_BUDGET) -> bool:
    sol = recall_solution(T, frozenset(goal_classes), budget)
    return all(sol.wins(c) for c in start_classes)


DONE = "done"


def _extract_machine(T, sol: RecallSolution, start_classes) -> RecallMachine:
    goal_classes = sol.goal_classes
    # memories: non-goal winning beliefs reachable under the recorded policy
    order = []
    frontier = [c for c in T.classes if c in start_classes and c not in goal_classes]
    seen = set()
    while frontier:
        b = frontier.pop(0)
        if b in seen:
            continue
        seen.add(b)
        order.append(b)
        for c, p in _belief_successors(T, b, sol.policy[b]):
            if c not in goal_classes and p not in seen:
                frontier.append(p)
    order.sort(key=lambda b: _belief_key(T, b))
    names = {b: f"m{k + 1}" for k, b in enumerate(order)}

    def memory_for(c, belief):
        if c in goal_classes or belief not in names:
            return DONE
        return names[belief]

    memories = [DONE] + [names[b] for b in order]
    init = {c: memory_for(c, c) for c in T.classes}
    output = {DONE: T.instructions[0]}
    update = {(DONE, c): DONE for c in T.classes}
    for b in order:
        m = names[b]
        output[m] = sol.policy[b]
        parts = dict(_belief_successors(T, b, sol.policy[b]))
        for c in T.classes:
            update[(m, c)] = memory_for(c, parts.get(c))
    return RecallMachine.build(memories, init, update, output)


def synth_recall(T: TransitionSystem, A, B, budget=BELIEF_BUDGET):
    """Belief-tracking machine witnessing ``A |> B`` under perfect recall, or None."""
    start_classes, goal_classes = _classes(T, A), _classes(T, B)
    sol = recall_solution(T, goal_classes, budget)
    if not all(sol.wins(c) for c in start_classes):
        return None
    return _extract_machine(T, sol, start_classes)


# -- composition ---------------------------------------------------------------


def compose_recall(T: TransitionSystem, M1: RecallMachine, M2: RecallMachine, B) -> RecallMachine:
    """Follow M1 until a class of B* is observed, then run M2 afresh from there.

    Memories are ``1:<m>`` (still in M1) or ``2:<m>`` (switched to M2); the
    switch is permanent and also happens at step 0.
    """
    M1.validate(T)
    M2.validate(T)
    switch = _classes(T, B)
    init1, upd1, out1 = M1.tables()
    init2, upd2, out2 = M2.tables()
    first = {m: f"1:{m}" for m in M1.memories}
    second = {m: f"2:{m}" for m in M2.memories}
    memories = [first[m] for m in M1.memories] + [second[m] for m in M2.memories]
    init = {
        c: second[init2[c]] if c in switch else first[init1[c]] for c in T.classes
    }
    output = {first[m]: out1[m] for m in M1.memories}
    output.update({second[m]: out2[m] for m in M2.memories})
    update = {}
    for c in T.classes:
        for m in M1.memories:
            update[(first[m], c)] = second[init2[c]] if c in switch else first[upd1[(m, c)]]
        for m in M2.memories:
            update[(second[m], c)] = second[upd2[(m, c)]]
    return RecallMachine.build(memories, init, update, output)


# -- formulas and tables -------------------------------------------------------


def holds(T: TransitionSystem, A, B, kind: str) -> bool:
    if kind == MEMORYLESS:
        return synth_memoryless(T, A, B) is not None
    if kind == RECALL:
        return recall_navigable(T, _classes(T, A), _classes(T, B))
    raise ValueError(f"unknown strategy kind {kind!r}")


def evaluate(T: TransitionSystem, f, kind: str) -> bool:
    if isinstance(f, str):
        f = parse_formula(f)
    if isinstance(f, Atom):
        return holds(T, f.stmt.lhs, f.stmt.rhs, kind)
    if isinstance(f, Not):
        return not evaluate(T, f.arg, kind)
    if isinstance(f, Implies):
        return (not evaluate(T, f.lhs, kind)) or evaluate(T, f.rhs, kind)
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class NavigabilityTable:
    classes: tuple
    cells: tuple  # rows of "m" | "r" | "-"

    def cell(self, x, y) -> str:
        return self.cells[self.classes.index(x)][self.classes.index(y)]

    def format(self) -> str:
        labels = [format_class(c, " ") for c in self.classes]
        lines = ["# columns: " + " ".join(labels)]
        for label, row in zip(labels, self.cells):
            lines.append(f"{label}: " + " ".join(row))
        return "\n".join(lines) + "\n"


def navigability_table(T: TransitionSystem) -> NavigabilityTable:
    rows = []
    for x in T.classes:
        row = []
        for y in T.classes:
            src, dst = frozenset([x]), frozenset([y])
            if _synth_memoryless_cached(T, src, dst, MEMORYLESS_BUDGET) is not None:
                row.append("m")
            elif recall_navigable(T, src, dst):
                row.append("r")
            else:
                row.append("-")
        rows.append(tuple(row))
    return NavigabilityTable(T.classes, tuple(rows))


def true_atoms(T: TransitionSystem, kind: str, views: Iterable[str] | None = None):
    """All atoms over ``views`` (default: every declared view) true in T."""
    from itertools import combinations

    views = sorted(T.view_names if views is None else views)
    subsets = [
        frozenset(c) for r in range(1, len(views) + 1) for c in combinations(views, r)
    ]
    return {(a, b) for a in subsets for b in subsets if holds(T, a, b, kind)}
