"""Regular-expression front end: parsing, rendering, DFA compilation.

Grammar: single-character letters from the declared alphabet, ``_`` for the
empty word, ``#`` for the empty set, juxtaposition for concatenation, ``|``
for union, postfix ``*`` for iteration, parentheses for grouping.
Precedence: star > concatenation > union.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import (
    Alphabet,
    Dfa,
    _crawl,
    dfa_combine,
    dfa_minimize,
    empty_dfa,
    epsilon_dfa,
    letter_dfa,
)
from .errors import ParseError

RESERVED = "|*()_#"


class Regex:
    """Base class for regular-expression AST nodes."""


@dataclass(frozen=True)
class Empty(Regex):
    pass


@dataclass(frozen=True)
class Epsilon(Regex):
    pass


@dataclass(frozen=True)
class Letter(Regex):
    letter: str


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


def parse_regex(text: str, alphabet: Alphabet) -> Regex:
    """Parse ``text`` into an AST; deterministic, with positions in errors."""
    i = 0
    n = len(text)

    def peek() -> str | None:
        return text[i] if i < n else None

    def atom_follows() -> bool:
        ch = peek()
        return ch is not None and ch not in ")|*"

    def parse_atom() -> Regex:
        nonlocal i
        ch = peek()
        if ch is None:
            raise ParseError("expected an expression, found end of input", i)
        if ch == "(":
            i += 1
            node = parse_union()
            if peek() != ")":
                raise ParseError("expected ')'", i)
            i += 1
            return node
        if ch == "_":
            i += 1
            return Epsilon()
        if ch == "#":
            i += 1
            return Empty()
        if ch in ")|*":
            raise ParseError(f"unexpected {ch!r}", i)
        if ch not in alphabet:
            raise ParseError(f"letter {ch!r} not in alphabet", i)
        i += 1
        return Letter(ch)

    def parse_postfix() -> Regex:
        nonlocal i
        node = parse_atom()
        while peek() == "*":
            i += 1
            node = Star(node)
        return node

    def parse_concat() -> Regex:
        node = parse_postfix()
        while atom_follows():
            node = Concat(node, parse_postfix())
        return node

    def parse_union() -> Regex:
        nonlocal i
        node = parse_concat()
        while peek() == "|":
            i += 1
            node = Union(node, parse_concat())
        return node

    node = parse_union()
    if i != n:
        raise ParseError(f"unexpected {text[i]!r}", i)
    return node


def render_regex(r: Regex) -> str:
    """Text form that re-parses to a structurally identical AST."""

    def go(node: Regex) -> tuple[str, int]:
        # precedence: 4 atom, 3 star, 2 concat, 1 union
        if isinstance(node, Empty):
            return "#", 4
        if isinstance(node, Epsilon):
            return "_", 4
        if isinstance(node, Letter):
            return node.letter, 4
        if isinstance(node, Star):
            t, p = go(node.inner)
            if p < 3:
                t = f"({t})"
            return t + "*", 3
        if isinstance(node, Concat):
            lt, lp = go(node.left)
            rt, rp = go(node.right)
            if lp < 2:
                lt = f"({lt})"
            if rp < 2 or isinstance(node.right, Concat):
                rt = f"({rt})"
            return lt + rt, 2
        if isinstance(node, Union):
            lt, _ = go(node.left)
            rt, rp = go(node.right)
            if rp <= 1:
                rt = f"({rt})"
            return f"{lt}|{rt}", 1
        raise TypeError(f"not a regex node: {node!r}")

    return go(r)[0]


def _star(d: Dfa) -> Dfa:
    # Subset construction with a fresh re-entry marker (-1): reading a letter
    # from the marker behaves like reading it from d's initial state, and any
    # move into an accepting state re-arms the marker.
    def follow(states, j):
        nxt = set()
        for s in states:
            t = d.transitions[d.initial if s == -1 else s][j]
            nxt.add(t)
            if t in d.accepting:
                nxt.add(-1)
        return frozenset(nxt)

    def final(states):
        return -1 in states

    return dfa_minimize(_crawl(d.alphabet, frozenset({-1}), follow, final))


def regex_to_dfa(r: Regex, alphabet: Alphabet) -> Dfa:
    """Minimal complete DFA for the regex's language over ``alphabet``."""

    def go(node: Regex) -> Dfa:
        if isinstance(node, Empty):
            return empty_dfa(alphabet)
        if isinstance(node, Epsilon):
            return epsilon_dfa(alphabet)
        if isinstance(node, Letter):
            return letter_dfa(alphabet, node.letter)
        if isinstance(node, Union):
            return dfa_combine("union", go(node.left), go(node.right))
        if isinstance(node, Concat):
            return dfa_combine("concatenation", go(node.left), go(node.right))
        if isinstance(node, Star):
            return _star(go(node.inner))
        raise TypeError(f"not a regex node: {node!r}")

    return dfa_minimize(go(r))
