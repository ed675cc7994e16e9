"""Finite transition systems with indistinguishability, views and histories.

Observation classes are represented as tuples of state identifiers in
declaration order; the tuple itself is the class identity.  All orderings
(states, classes, instructions, views) follow declaration order so every
algorithm downstream is deterministic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    EmptySuccessorSet,
    FormatError,
    InvalidSystem,
    MalformedSequence,
    MissingTransition,
    NoInstructions,
    NotAHistory,
    UnknownInstruction,
    UnknownState,
    UnknownView,
)

Class = tuple  # tuple[str, ...], members in declaration order

_TOKEN = re.compile(r"[^\s{},|>!()\-]+")


def is_identifier(name) -> bool:
    return isinstance(name, str) and _TOKEN.fullmatch(name) is not None


def _check_identifier(name, what):
    if not is_identifier(name):
        raise InvalidSystem(f"invalid {what} identifier {name!r}")


@dataclass(frozen=True)
class TransitionSystem:
    """A validated finite transition system.

    Use :func:`validate_system` or :meth:`build` rather than the raw
    constructor; they normalise orderings and check every invariant.
    """

    name: str
    states: tuple
    classes: tuple
    instructions: tuple
    # ((state, instruction), successors) pairs, states-major order
    transitions: tuple
    # (view name, class) pairs in declaration order
    views: tuple

    _index: dict = field(default=None, compare=False, hash=False, repr=False)
    _class_of: dict = field(default=None, compare=False, hash=False, repr=False)
    _delta: dict = field(default=None, compare=False, hash=False, repr=False)
    _view_map: dict = field(default=None, compare=False, hash=False, repr=False)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.name, self.states, self.classes, self.instructions,
                      self.transitions, self.views))
            object.__setattr__(self, "_hash", h)
        return h

    def __post_init__(self):
        object.__setattr__(self, "_index", {s: k for k, s in enumerate(self.states)})
        object.__setattr__(
            self, "_class_of", {s: c for c in self.classes for s in c}
        )
        object.__setattr__(self, "_delta", dict(self.transitions))
        object.__setattr__(self, "_view_map", dict(self.views))

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        instructions: Iterable[str],
        edges: Iterable[tuple],
        obs: Iterable[Iterable[str]] = (),
        views: Mapping[str, str] | Iterable[tuple] = (),
        name: str = "system",
    ) -> "TransitionSystem":
        """Validate a structured description.

        ``edges`` holds ``(src, instr, dsts)`` triples, repeated triples
        union their destinations.  ``obs`` groups are merged transitively.
        ``views`` maps view names to a representative state.
        """
        states = _dedup(states)
        if not states:
            raise InvalidSystem("system has no states")
        for s in states:
            _check_identifier(s, "state")
        instructions = _dedup(instructions)
        if not instructions:
            raise NoInstructions("system declares no instructions")
        for i in instructions:
            _check_identifier(i, "instruction")
        index = {s: k for k, s in enumerate(states)}

        def known(s):
            if s not in index:
                raise UnknownState(f"undeclared state {s!r}")
            return s

        parent = {s: s for s in states}

        def find(s):
            while parent[s] != s:
                parent[s] = parent[parent[s]]
                s = parent[s]
            return s

        for group in obs:
            group = [known(s) for s in group]
            for s in group[1:]:
                a, b = find(group[0]), find(s)
                if a != b:
                    # keep the earliest-declared state as root
                    if index[a] > index[b]:
                        a, b = b, a
                    parent[b] = a
        blocks: dict = {}
        for s in states:
            blocks.setdefault(find(s), []).append(s)
        classes = tuple(
            sorted((tuple(b) for b in blocks.values()), key=lambda c: index[c[0]])
        )
        class_of = {s: c for c in classes for s in c}

        succ: dict = {}
        for src, instr, dsts in edges:
            known(src)
            if instr not in instructions:
                raise UnknownInstruction(f"undeclared instruction {instr!r}")
            dsts = list(dsts)
            if not dsts:
                raise EmptySuccessorSet(f"edge {src} {instr} has no destinations")
            succ.setdefault((src, instr), set()).update(known(d) for d in dsts)
        transitions = []
        for s in states:
            for i in instructions:
                if (s, i) not in succ:
                    raise MissingTransition(
                        f"no transition for state {s!r} under instruction {i!r}"
                    )
                transitions.append(
                    ((s, i), tuple(sorted(succ[(s, i)], key=index.__getitem__)))
                )

        if isinstance(views, Mapping):
            views = views.items()
        view_pairs = []
        seen = set()
        for vname, state in views:
            _check_identifier(vname, "view")
            if vname in seen:
                raise InvalidSystem(f"view {vname!r} declared twice")
            seen.add(vname)
            view_pairs.append((vname, class_of[known(state)]))

        return cls(
            name=name,
            states=states,
            classes=classes,
            instructions=instructions,
            transitions=tuple(transitions),
            views=tuple(view_pairs),
        )

    # -- lookups ---------------------------------------------------------

    def has_state(self, w) -> bool:
        return w in self._index

    def state_index(self, w) -> int:
        try:
            return self._index[w]
        except KeyError:
            raise UnknownState(f"unknown state {w!r}") from None

    def class_of(self, w) -> Class:
        try:
            return self._class_of[w]
        except KeyError:
            raise UnknownState(f"unknown state {w!r}") from None

    def succ(self, w, instr) -> tuple:
        try:
            return self._delta[(w, instr)]
        except KeyError:
            if w not in self._index:
                raise UnknownState(f"unknown state {w!r}") from None
            raise UnknownInstruction(f"unknown instruction {instr!r}") from None

    @property
    def view_names(self) -> tuple:
        return tuple(v for v, _ in self.views)

    def view(self, name) -> Class:
        try:
            return self._view_map[name]
        except KeyError:
            raise UnknownView(f"unknown view {name!r}") from None

    def star(self, names: Iterable[str]) -> frozenset:
        return frozenset(self.view(v) for v in names)

    def class_index(self, c) -> int:
        return self.classes.index(c)


def _dedup(items):
    out = []
    for x in items:
        if x not in out:
            out.append(x)
    return tuple(out)


# -- free-function surface ---------------------------------------------


def class_of(T: TransitionSystem, w) -> Class:
    return T.class_of(w)


def star(T: TransitionSystem, views: Iterable[str]) -> frozenset:
    """Image of a set of view names under the view map; duplicates collapse."""
    return T.star(views)


def format_class(c, sep=",") -> str:
    return "{" + sep.join(c) + "}"


# -- text format ----------------------------------------------------------


def parse_system(text: str) -> TransitionSystem:
    name = "system"
    states: list = []
    instructions: list = []
    obs: list = []
    edges: list = []
    views: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        kw, args = line[0], line[1:]
        for tok in args:
            if not is_identifier(tok):
                raise FormatError(f"invalid identifier {tok!r}", lineno)
        if kw == "system":
            if len(args) != 1:
                raise FormatError("'system' takes exactly one name", lineno)
            name = args[0]
        elif kw == "states":
            states.extend(args)
        elif kw == "instructions":
            instructions.extend(args)
        elif kw == "obs":
            if not args:
                raise FormatError("'obs' needs at least one state", lineno)
            obs.append(args)
        elif kw == "edge":
            if len(args) < 2:
                raise FormatError("'edge' needs a source and an instruction", lineno)
            edges.append((args[0], args[1], args[2:]))
        elif kw == "view":
            if len(args) != 2:
                raise FormatError("'view' takes a name and a state", lineno)
            views.append((args[0], args[1]))
        else:
            raise FormatError(f"unknown keyword {kw!r}", lineno)
    return TransitionSystem.build(states, instructions, edges, obs, views, name)


def validate_system(raw) -> TransitionSystem:
    """Validate raw text or a dict description into a :class:`TransitionSystem`."""
    if isinstance(raw, TransitionSystem):
        return raw
    if isinstance(raw, str):
        return parse_system(raw)
    if isinstance(raw, Mapping):
        return TransitionSystem.build(
            states=raw.get("states", ()),
            instructions=raw.get("instructions", ()),
            edges=raw.get("edges", ()),
            obs=raw.get("obs", ()),
            views=raw.get("views", ()),
            name=raw.get("name", "system"),
        )
    raise TypeError(f"cannot build a transition system from {type(raw).__name__}")


def format_system(T: TransitionSystem) -> str:
    lines = [f"system {T.name}", "states " + " ".join(T.states)]
    for c in T.classes:
        if len(c) > 1:
            lines.append("obs " + " ".join(c))
    lines.append("instructions " + " ".join(T.instructions))
    for (s, i), dsts in T.transitions:
        lines.append(f"edge {s} {i} " + " ".join(dsts))
    for v, c in T.views:
        lines.append(f"view {v} {c[0]}")
    return "\n".join(lines) + "\n"


# -- histories ------------------------------------------------------------


@dataclass(frozen=True)
class History:
    start: str
    steps: tuple = ()  # ((instruction, state), ...)

    @classmethod
    def from_sequence(cls, seq: Sequence) -> "History":
        seq = [str(x) for x in seq]
        if not seq or len(seq) % 2 == 0:
            raise MalformedSequence(
                "a history alternates states and instructions, "
                "starting and ending with a state"
            )
        return cls(seq[0], tuple(zip(seq[1::2], seq[2::2])))

    @property
    def head(self) -> str:
        return self.steps[-1][1] if self.steps else self.start

    @property
    def states(self) -> tuple:
        return (self.start,) + tuple(w for _, w in self.steps)

    @property
    def instructions(self) -> tuple:
        return tuple(i for i, _ in self.steps)

    def __len__(self):
        return len(self.steps)

    def to_sequence(self) -> tuple:
        out = [self.start]
        for i, w in self.steps:
            out += [i, w]
        return tuple(out)

    def prefix(self, n) -> "History":
        return History(self.start, self.steps[:n])

    def suffix(self, k) -> "History":
        """The history starting at its k-th state."""
        states = self.states
        return History(states[k], self.steps[k:])

    def __str__(self):
        return ",".join(self.to_sequence())


def _as_history(h) -> History:
    return h if isinstance(h, History) else History.from_sequence(h)


def is_history(T: TransitionSystem, seq) -> bool:
    h = _as_history(seq)
    if not T.has_state(h.start):
        return False
    prev = h.start
    for i, w in h.steps:
        if i not in T.instructions or not T.has_state(w):
            return False
        if w not in T.succ(prev, i):
            return False
        prev = w
    return True


def _require_history(T, h) -> History:
    h = _as_history(h)
    if not is_history(T, h):
        raise NotAHistory(f"{h} is not a history of {T.name}")
    return h


def histories_indistinguishable(T: TransitionSystem, h1, h2) -> bool:
    h1, h2 = _require_history(T, h1), _require_history(T, h2)
    if len(h1) != len(h2) or h1.instructions != h2.instructions:
        return False
    return all(
        T.class_of(a) == T.class_of(b) for a, b in zip(h1.states, h2.states)
    )


def class_sequence(T: TransitionSystem, h) -> tuple:
    return tuple(T.class_of(w) for w in _as_history(h).states)


def truncate_history(T: TransitionSystem, h, B: Iterable[str]) -> History:
    """Drop the prefix before the first state whose class is in B*.

    If no state qualifies the result is the single final state.
    """
    h = _require_history(T, h)
    goal = T.star(B)
    for k, w in enumerate(h.states):
        if T.class_of(w) in goal:
            return h.suffix(k)
    return h.suffix(len(h))
