"""Navigation formulas: atoms ``A |> B`` over nonempty view sets, ``!`` and ``->``.

Concrete syntax::

    formula := imp
    imp     := unary ('->' imp)?
    unary   := '!' unary | '(' formula ')' | atom
    atom    := set '|>' set
    set     := '{' name (',' name)* '}'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .errors import EmptySet, FormulaSyntaxError


def view_set(names: Iterable[str]) -> frozenset:
    """Build a nonempty set of view names."""
    vs = frozenset(names)
    if not vs:
        raise EmptySet("view sets must be nonempty")
    return vs


@dataclass(frozen=True)
class NavStatement:
    lhs: frozenset
    rhs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "lhs", view_set(self.lhs))
        object.__setattr__(self, "rhs", view_set(self.rhs))

    @property
    def views(self) -> frozenset:
        return self.lhs | self.rhs

    def __str__(self):
        return f"{format_set(self.lhs)} |> {format_set(self.rhs)}"


@dataclass(frozen=True)
class Atom:
    stmt: NavStatement


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


Formula = Union[Atom, Not, Implies]


def atom(lhs, rhs) -> Atom:
    return Atom(NavStatement(frozenset(lhs), frozenset(rhs)))


def atoms_of(f) -> list:
    """Atoms of ``f`` in left-to-right order (with repeats)."""
    if isinstance(f, Atom):
        return [f.stmt]
    if isinstance(f, Not):
        return atoms_of(f.arg)
    return atoms_of(f.lhs) + atoms_of(f.rhs)


# -- printing -------------------------------------------------------------


def format_set(vs) -> str:
    return "{" + ",".join(sorted(vs)) + "}"


def format_formula(f) -> str:
    if isinstance(f, NavStatement):
        return str(f)
    if isinstance(f, Atom):
        return str(f.stmt)
    if isinstance(f, Not):
        inner = format_formula(f.arg)
        return "!" + (inner if isinstance(f.arg, Not) else f"({inner})")
    left = format_formula(f.lhs)
    if isinstance(f.lhs, Implies):
        left = f"({left})"
    return f"{left} -> {format_formula(f.rhs)}"


# -- parsing --------------------------------------------------------------

_LEX = re.compile(
    r"\s*(?:(?P<op>\|>|->|[{},!()])|(?P<name>[^\s{},|>!()\-]+)|(?P<bad>\S))"
)


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _LEX.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group("bad") is not None:
            raise FormulaSyntaxError(
                f"unexpected character {m.group('bad')!r}", m.start("bad")
            )
        kind = "op" if m.group("op") is not None else "name"
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self, value, expected=None):
        kind, val, pos = self.peek()
        if val != value or kind == "name":
            got = "end of input" if kind == "eof" else repr(val)
            raise FormulaSyntaxError(f"unexpected {got}", pos, expected or repr(value))
        self.k += 1

    def formula(self):
        left = self.unary()
        if self.peek()[:2] == ("op", "->"):
            self.k += 1
            return Implies(left, self.formula())
        return left

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "!":
            self.k += 1
            return Not(self.unary())
        if kind == "op" and val == "(":
            self.k += 1
            f = self.formula()
            self.take(")")
            return f
        if kind == "op" and val == "{":
            lhs = self.set()
            self.take("|>")
            rhs = self.set()
            return Atom(NavStatement(lhs, rhs))
        got = "end of input" if kind == "eof" else repr(val)
        raise FormulaSyntaxError(f"unexpected {got}", pos, "'!', '(' or '{'")

    def set(self):
        _, _, start = self.peek()
        self.take("{")
        if self.peek()[:2] == ("op", "}"):
            raise EmptySet(f"empty view set at position {start}")
        names = [self.name()]
        while self.peek()[:2] == ("op", ","):
            self.k += 1
            names.append(self.name())
        self.take("}", "',' or '}'")
        return frozenset(names)

    def name(self):
        kind, val, pos = self.peek()
        if kind != "name":
            got = "end of input" if kind == "eof" else repr(val)
            raise FormulaSyntaxError(f"unexpected {got}", pos, "a view name")
        self.k += 1
        return val

    def done(self):
        kind, val, pos = self.peek()
        if kind != "eof":
            raise FormulaSyntaxError(f"unexpected {val!r}", pos, "end of input")


def parse_formula(text: str):
    p = _Parser(text)
    f = p.formula()
    p.done()
    return f


def parse_atom(text: str) -> NavStatement:
    """Parse text that must be a single atom (used for hypotheses and goals)."""
    f = parse_formula(text)
    if not isinstance(f, Atom):
        raise FormulaSyntaxError(f"expected a single atom, got {format_formula(f)!r}")
    return f.stmt


def parse_view_list(text: str) -> frozenset:
    """Parse ``vA,vB`` or ``{vA,vB}`` (whitespace also separates)."""
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    return view_set(n for n in re.split(r"[\s,]+", body) if n)
