"""Strategy representations and their line-oriented file formats.

Memoryless file::

    map {a,b} 0
    map * 1            # optional default, lowest priority

Recall machine file::

    memories m0 m1
    init {a,b} m1
    init * m0
    out m0 0
    upd m1 {g} m0
    upd m1 * m1
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .errors import FormatError, PartialStrategy, UnknownInstruction, UnknownState
from .system import TransitionSystem, format_class, is_identifier


@dataclass(frozen=True)
class MemorylessStrategy:
    """Class -> instruction map; ``choice`` holds (class, instruction) pairs."""

    choice: tuple

    def __post_init__(self):
        object.__setattr__(self, "choice", tuple(sorted(self.choice)))

    @classmethod
    def from_dict(cls, mapping) -> "MemorylessStrategy":
        return cls(tuple(mapping.items()))

    @classmethod
    def constant(cls, T: TransitionSystem, instr) -> "MemorylessStrategy":
        return cls(tuple((c, instr) for c in T.classes))

    def as_dict(self) -> dict:
        return dict(self.choice)

    def __getitem__(self, c):
        return self.as_dict()[c]

    def validate(self, T: TransitionSystem):
        d = self.as_dict()
        for c in T.classes:
            if c not in d:
                raise PartialStrategy(f"strategy has no instruction for class {format_class(c)}")
            if d[c] not in T.instructions:
                raise UnknownInstruction(f"unknown instruction {d[c]!r}")


@dataclass(frozen=True)
class RecallMachine:
    """Finite observation-driven memory machine.

    The machine starts in ``init[class of the start state]``, emits
    ``output[memory]`` and, on observing the class ``c`` of the next state,
    moves to ``update[(memory, c)]``.  It only ever reads the class
    sequence, so it assigns one instruction to every class of
    indistinguishable histories.
    """

    memories: tuple
    init: tuple  # (class, memory)
    update: tuple  # ((memory, class), memory)
    output: tuple  # (memory, instruction)

    def __post_init__(self):
        # table order is not semantic; keep a canonical order for equality
        for name in ("init", "update", "output"):
            object.__setattr__(self, name, tuple(sorted(getattr(self, name))))

    @classmethod
    def build(cls, memories, init, update, output) -> "RecallMachine":
        return cls(
            tuple(memories),
            tuple(init.items()),
            tuple(update.items()),
            tuple(output.items()),
        )

    def tables(self):
        return dict(self.init), dict(self.update), dict(self.output)

    def validate(self, T: TransitionSystem):
        init, update, output = self.tables()
        mems = set(self.memories)
        if not mems:
            raise PartialStrategy("machine has no memories")
        for c in T.classes:
            if init.get(c) not in mems:
                raise PartialStrategy(f"no initial memory for class {format_class(c)}")
        for m in self.memories:
            if output.get(m) not in T.instructions:
                if m not in output:
                    raise PartialStrategy(f"no output for memory {m!r}")
                raise UnknownInstruction(f"unknown instruction {output[m]!r}")
            for c in T.classes:
                if update.get((m, c)) not in mems:
                    raise PartialStrategy(
                        f"no update for memory {m!r} on class {format_class(c)}"
                    )

    def run(self, T: TransitionSystem, states):
        """Instructions the machine emits along a state sequence.

        Returns one instruction per state (the instruction issued there).
        """
        init, update, output = self.tables()
        m = init[T.class_of(states[0])]
        out = [output[m]]
        for w in states[1:]:
            m = update[(m, T.class_of(w))]
            out.append(output[m])
        return out


def lift_memoryless(T: TransitionSystem, s: MemorylessStrategy) -> RecallMachine:
    """One-mode machine whose memory is the current class."""
    s.validate(T)
    choice = s.as_dict()
    names = {c: f"c{k}" for k, c in enumerate(T.classes)}
    return RecallMachine.build(
        memories=[names[c] for c in T.classes],
        init={c: names[c] for c in T.classes},
        update={(names[m], c): names[c] for m in T.classes for c in T.classes},
        output={names[c]: choice[c] for c in T.classes},
    )


# -- text formats -----------------------------------------------------------

_CLASS_FIELD = re.compile(r"\s*(\*|\{[^{}]*\})\s*")


def _resolve_class(T, text, lineno):
    members = [m for m in re.split(r"[\s,]+", text.strip()[1:-1]) if m]
    if not members:
        raise FormatError("empty class", lineno)
    try:
        c = T.class_of(members[0])
    except UnknownState as e:
        raise FormatError(str(e), lineno) from None
    if set(members) != set(c):
        raise FormatError(f"{text.strip()} is not an observation class", lineno)
    return c


def _split_class_line(rest, lineno):
    """Split ``<class-field> <tail>`` where class-field is ``*`` or ``{...}``."""
    m = _CLASS_FIELD.match(rest)
    if m is None:
        raise FormatError("expected a class '{...}' or '*'", lineno)
    return m.group(1), rest[m.end():].split()


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            kw, _, rest = line.partition(" ")
            yield lineno, kw, rest


def parse_memoryless(text: str, T: TransitionSystem) -> MemorylessStrategy:
    explicit: dict = {}
    default = None
    for lineno, kw, rest in _lines(text):
        if kw != "map":
            raise FormatError(f"unknown keyword {kw!r}", lineno)
        field, tail = _split_class_line(rest, lineno)
        if len(tail) != 1:
            raise FormatError("'map' takes a class and one instruction", lineno)
        if field == "*":
            default = tail[0]
        else:
            explicit[_resolve_class(T, field, lineno)] = tail[0]
    choice = {}
    for c in T.classes:
        instr = explicit.get(c, default)
        if instr is None:
            raise PartialStrategy(f"strategy has no instruction for class {format_class(c)}")
        choice[c] = instr
    s = MemorylessStrategy.from_dict(choice)
    s.validate(T)
    return s


def format_memoryless(s: MemorylessStrategy, T: TransitionSystem) -> str:
    d = s.as_dict()
    return "".join(f"map {format_class(c)} {d[c]}\n" for c in T.classes)


def parse_machine(text: str, T: TransitionSystem) -> RecallMachine:
    memories: list = []
    init: dict = {}
    init_default = None
    update: dict = {}
    update_default: dict = {}
    output: dict = {}
    for lineno, kw, rest in _lines(text):
        if kw == "memories":
            names = rest.split()
            for n in names:
                if not is_identifier(n):
                    raise FormatError(f"invalid memory name {n!r}", lineno)
            memories.extend(n for n in names if n not in memories)
        elif kw == "out":
            parts = rest.split()
            if len(parts) != 2:
                raise FormatError("'out' takes a memory and an instruction", lineno)
            output[parts[0]] = parts[1]
        elif kw == "init":
            field, tail = _split_class_line(rest, lineno)
            if len(tail) != 1:
                raise FormatError("'init' takes a class and a memory", lineno)
            if field == "*":
                init_default = tail[0]
            else:
                init[_resolve_class(T, field, lineno)] = tail[0]
        elif kw == "upd":
            mem, _, rest2 = rest.strip().partition(" ")
            field, tail = _split_class_line(rest2, lineno)
            if len(tail) != 1:
                raise FormatError("'upd' takes a memory, a class and a memory", lineno)
            if field == "*":
                update_default[mem] = tail[0]
            else:
                update[(mem, _resolve_class(T, field, lineno))] = tail[0]
        else:
            raise FormatError(f"unknown keyword {kw!r}", lineno)
    for c in T.classes:
        if c not in init and init_default is not None:
            init[c] = init_default
    for m in memories:
        for c in T.classes:
            if (m, c) not in update and m in update_default:
                update[(m, c)] = update_default[m]
    machine = RecallMachine.build(memories, init, update, output)
    machine.validate(T)
    return machine


def _most_common(values):
    counts = Counter(values)
    best = max(counts.values())
    return next(v for v in values if counts[v] == best)


def format_machine(M: RecallMachine, T: TransitionSystem) -> str:
    init, update, output = M.tables()
    lines = ["memories " + " ".join(M.memories)]
    default = _most_common([init[c] for c in T.classes])
    lines += [f"init {format_class(c)} {init[c]}" for c in T.classes if init[c] != default]
    lines.append(f"init * {default}")
    for m in M.memories:
        lines.append(f"out {m} {output[m]}")
    for m in M.memories:
        targets = [update[(m, c)] for c in T.classes]
        default = _most_common(targets)
        lines += [
            f"upd {m} {format_class(c)} {update[(m, c)]}"
            for c in T.classes
            if update[(m, c)] != default
        ]
        lines.append(f"upd {m} * {default}")
    return "\n".join(lines) + "\n"
