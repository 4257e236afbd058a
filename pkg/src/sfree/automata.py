"""Complete deterministic finite automata over explicit alphabets.

This is the semantic ground truth for every language in the package:
boolean combinations, concatenation, canonical minimization, equivalence
testing, and brute-force word enumeration all live here.

All values are immutable after construction and all operations are pure,
so everything may be shared freely between concurrent tasks.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import TYPE_CHECKING, Callable, Iterable, Iterator

from .errors import AlphabetError, MonoidError, ParseError

if TYPE_CHECKING:  # pragma: no cover - import cycle is type-only
    from .monoid import Homomorphism

#: A word is a tuple of letters.  Plain strings work too for single-character
#: alphabets, since iterating a string yields its characters.
Word = tuple[str, ...]

COMBINE_KINDS = ("union", "difference", "intersection", "concatenation")


@dataclass(frozen=True)
class Alphabet:
    """Ordered alphabet of distinct letter tokens.

    The declared order matters: it drives canonical state numbering, word
    enumeration order, and the deterministic letter choice made by the
    synthesis recursion.
    """

    letters: tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))
        for tok in self.letters:
            if not isinstance(tok, str) or not tok or not tok.isprintable():
                raise AlphabetError(f"letter {tok!r} is not a nonempty printable token")
        if len(set(self.letters)) != len(self.letters):
            raise AlphabetError(f"duplicate letters in {self.letters!r}")
        object.__setattr__(self, "_pos", {a: i for i, a in enumerate(self.letters)})

    @classmethod
    def of(cls, letters: str | Iterable[str]) -> "Alphabet":
        """Build an alphabet from a string of characters or any letter iterable."""
        return cls(tuple(letters))

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, letter: object) -> bool:
        return letter in self._pos  # type: ignore[attr-defined]

    def index(self, letter: str) -> int:
        try:
            return self._pos[letter]  # type: ignore[attr-defined]
        except KeyError:
            raise AlphabetError(
                f"letter {letter!r} not in alphabet {list(self.letters)!r}"
            ) from None

    def without(self, letter: str) -> "Alphabet":
        """The alphabet with one letter removed, order preserved."""
        self.index(letter)
        return Alphabet(tuple(a for a in self.letters if a != letter))


def alph(word: Iterable[str]) -> frozenset[str]:
    """The set of letters occurring in a word."""
    return frozenset(word)


@dataclass(frozen=True)
class Dfa:
    """Complete DFA.  ``transitions[s][j]`` is the successor of state ``s`` on
    the ``j``-th alphabet letter; complementation is just flipping the
    accepting set."""

    alphabet: Alphabet
    transitions: tuple[tuple[int, ...], ...]
    initial: int
    accepting: frozenset[int]

    def __post_init__(self):
        object.__setattr__(
            self, "transitions", tuple(tuple(row) for row in self.transitions)
        )
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        m = len(self.transitions)
        if m == 0:
            raise ValueError("a DFA needs at least one state")
        k = len(self.alphabet)
        for s, row in enumerate(self.transitions):
            if len(row) != k:
                raise ValueError(
                    f"state {s}: transition row has {len(row)} entries, expected {k}"
                )
            for t in row:
                if not isinstance(t, int) or not 0 <= t < m:
                    raise ValueError(f"state {s}: successor {t!r} out of range")
        if not 0 <= self.initial < m:
            raise ValueError(f"initial state {self.initial} out of range")
        for s in self.accepting:
            if not 0 <= s < m:
                raise ValueError(f"accepting state {s} out of range")

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    def step(self, state: int, letter: str) -> int:
        return self.transitions[state][self.alphabet.index(letter)]

    def run(self, word: Iterable[str]) -> int:
        """State reached from the initial state after reading ``word``."""
        s = self.initial
        for a in word:
            s = self.transitions[s][self.alphabet.index(a)]
        return s

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) in self.accepting


def dfa_accepts(d: Dfa, word: Iterable[str]) -> bool:
    """Membership by transition walk; raises on letters outside d's alphabet."""
    return d.accepts(word)


def enumerate_members(d: Dfa, maxlen: int) -> list[Word]:
    """All accepted words of length <= maxlen, in length-lexicographic order
    (using the alphabet's declared letter order)."""
    out: list[Word] = []
    for n in range(maxlen + 1):
        for combo in product(d.alphabet.letters, repeat=n):
            if d.accepts(combo):
                out.append(combo)
    return out


# ---------------------------------------------------------------------------
# canonical minimization


def dfa_minimize(d: Dfa) -> Dfa:
    """Minimal complete DFA for the same language.

    Unreachable states are dropped, equivalent states merged (Moore partition
    refinement), and the result is renumbered breadth-first from the initial
    state with letters in alphabet order.  The numbering makes the result
    canonical: two language-equal DFAs minimize to structurally identical
    values.
    """
    k = len(d.alphabet)

    # restrict to reachable states, BFS in letter order
    order = [d.initial]
    pos = {d.initial: 0}
    for s in order:
        for t in d.transitions[s]:
            if t not in pos:
                pos[t] = len(order)
                order.append(t)
    trans = [tuple(pos[d.transitions[s][j]] for j in range(k)) for s in order]
    acc = {pos[s] for s in d.accepting if s in pos}
    m = len(order)

    # Moore refinement: split classes by (finality, successor classes)
    block = [1 if s in acc else 0 for s in range(m)]
    n_classes = len(set(block))
    while True:
        ids: dict[tuple, int] = {}
        block = [
            ids.setdefault((block[s], tuple(block[t] for t in trans[s])), len(ids))
            for s in range(m)
        ]
        if len(ids) == n_classes:
            break
        n_classes = len(ids)

    # quotient automaton
    btrans: list[tuple[int, ...] | None] = [None] * n_classes
    bacc = set()
    for s in range(m):
        b = block[s]
        if btrans[b] is None:
            btrans[b] = tuple(block[t] for t in trans[s])
        if s in acc:
            bacc.add(b)

    # canonical renumbering
    order2 = [block[0]]
    pos2 = {block[0]: 0}
    for b in order2:
        for t in btrans[b]:  # type: ignore[union-attr]
            if t not in pos2:
                pos2[t] = len(order2)
                order2.append(t)
    assert len(order2) == n_classes, "quotient of a reachable DFA is reachable"
    final = tuple(
        tuple(pos2[btrans[b][j]] for j in range(k))  # type: ignore[index]
        for b in order2
    )
    return Dfa(d.alphabet, final, 0, frozenset(pos2[b] for b in bacc))


def _require_same_alphabet(d1: Dfa, d2: Dfa) -> None:
    if d1.alphabet != d2.alphabet:
        raise AlphabetError(
            f"alphabet mismatch: {list(d1.alphabet.letters)!r} vs "
            f"{list(d2.alphabet.letters)!r}"
        )


def dfa_equivalent(d1: Dfa, d2: Dfa) -> bool:
    """True iff both DFAs accept the same language (product reachability of a
    distinguishing state pair)."""
    _require_same_alphabet(d1, d2)
    k = len(d1.alphabet)
    start = (d1.initial, d2.initial)
    seen = {start}
    queue = deque([start])
    while queue:
        s, t = queue.popleft()
        if (s in d1.accepting) != (t in d2.accepting):
            return False
        for j in range(k):
            nxt = (d1.transitions[s][j], d2.transitions[t][j])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


# ---------------------------------------------------------------------------
# combinators


def dfa_complement(d: Dfa) -> Dfa:
    """Flip the accepting states; sound because every DFA here is complete."""
    return Dfa(d.alphabet, d.transitions, d.initial, frozenset(range(d.n_states)) - d.accepting)


def _product(d1: Dfa, d2: Dfa, keep: Callable[[bool, bool], bool]) -> Dfa:
    k = len(d1.alphabet)
    start = (d1.initial, d2.initial)
    order = [start]
    pos = {start: 0}
    rows = []
    for s, t in order:
        row = []
        for j in range(k):
            nxt = (d1.transitions[s][j], d2.transitions[t][j])
            i = pos.get(nxt)
            if i is None:
                i = pos[nxt] = len(order)
                order.append(nxt)
            row.append(i)
        rows.append(tuple(row))
    acc = frozenset(
        i for i, (s, t) in enumerate(order) if keep(s in d1.accepting, t in d2.accepting)
    )
    return Dfa(d1.alphabet, tuple(rows), 0, acc)


def _crawl(
    alphabet: Alphabet,
    start,
    follow: Callable,
    final: Callable,
) -> Dfa:
    """Subset-construction helper: explore an implicitly given deterministic
    state space from ``start``, following letters in alphabet order."""
    k = len(alphabet)
    order = [start]
    pos = {start: 0}
    rows = []
    for state in order:
        row = []
        for j in range(k):
            nxt = follow(state, j)
            i = pos.get(nxt)
            if i is None:
                i = pos[nxt] = len(order)
                order.append(nxt)
            row.append(i)
        rows.append(tuple(row))
    acc = frozenset(i for i, state in enumerate(order) if final(state))
    return Dfa(alphabet, tuple(rows), 0, acc)


def _concatenate(d1: Dfa, d2: Dfa) -> Dfa:
    # Epsilon-free nondeterministic composition, determinized on the fly.
    # A tracked state (0, s) lives in d1; whenever it hits an accepting state
    # of d1 we additionally spawn (1, d2.initial).
    start = {(0, d1.initial)}
    if d1.initial in d1.accepting:
        start.add((1, d2.initial))

    def follow(states, j):
        nxt = set()
        for tag, s in states:
            if tag == 0:
                t = d1.transitions[s][j]
                nxt.add((0, t))
                if t in d1.accepting:
                    nxt.add((1, d2.initial))
            else:
                nxt.add((1, d2.transitions[s][j]))
        return frozenset(nxt)

    def final(states):
        return any(tag == 1 and s in d2.accepting for tag, s in states)

    return _crawl(d1.alphabet, frozenset(start), follow, final)


def dfa_combine(kind: str, d1: Dfa, d2: Dfa) -> Dfa:
    """Language operation on two DFAs over the same alphabet.

    ``kind`` is one of ``union``, ``difference``, ``intersection``,
    ``concatenation``.  The result is minimized (canonically)."""
    _require_same_alphabet(d1, d2)
    if kind == "union":
        out = _product(d1, d2, lambda x, y: x or y)
    elif kind == "difference":
        out = _product(d1, d2, lambda x, y: x and not y)
    elif kind == "intersection":
        out = _product(d1, d2, lambda x, y: x and y)
    elif kind == "concatenation":
        out = _concatenate(d1, d2)
    else:
        raise ValueError(f"unknown combine kind {kind!r}; expected one of {COMBINE_KINDS}")
    return dfa_minimize(out)


# ---------------------------------------------------------------------------
# small factories


def universal_dfa(alphabet: Alphabet) -> Dfa:
    """Accepts every word."""
    k = len(alphabet)
    return Dfa(alphabet, ((0,) * k,), 0, frozenset({0}))


def empty_dfa(alphabet: Alphabet) -> Dfa:
    """Accepts nothing."""
    k = len(alphabet)
    return Dfa(alphabet, ((0,) * k,), 0, frozenset())


def epsilon_dfa(alphabet: Alphabet) -> Dfa:
    """Accepts exactly the empty word."""
    k = len(alphabet)
    if k == 0:
        return Dfa(alphabet, ((),), 0, frozenset({0}))
    return Dfa(alphabet, ((1,) * k, (1,) * k), 0, frozenset({0}))


def letter_dfa(alphabet: Alphabet, letter: str) -> Dfa:
    """Accepts exactly the one-letter word ``letter``."""
    j = alphabet.index(letter)
    k = len(alphabet)
    row0 = tuple(1 if i == j else 2 for i in range(k))
    sink = (2,) * k
    return Dfa(alphabet, (row0, sink, sink), 0, frozenset({1}))


def dfa_from_homomorphism(h: "Homomorphism", targets: Iterable[int]) -> Dfa:
    """DFA accepting exactly the words whose image under ``h`` lies in
    ``targets``.

    States are the monoid elements reachable from the identity under right
    multiplication by letter images (discovered breadth-first, letters in
    alphabet order); the transition on letter ``a`` multiplies by the image
    of ``a``."""
    monoid = h.monoid
    targets = frozenset(targets)
    for t in targets:
        if not 0 <= t < monoid.size:
            raise MonoidError(f"target {t!r} is not a monoid element")
    images = h.letter_image
    k = len(h.alphabet)
    order = [monoid.identity]
    pos = {monoid.identity: 0}
    rows = []
    for x in order:
        row = []
        for j in range(k):
            y = monoid.mul(x, images[j])
            i = pos.get(y)
            if i is None:
                i = pos[y] = len(order)
                order.append(y)
            row.append(i)
        rows.append(tuple(row))
    acc = frozenset(i for i, x in enumerate(order) if x in targets)
    return Dfa(h.alphabet, tuple(rows), 0, acc)


# ---------------------------------------------------------------------------
# JSON file format


def dfa_to_dict(d: Dfa) -> dict:
    return {
        "alphabet": list(d.alphabet.letters),
        "states": d.n_states,
        "initial": d.initial,
        "accepting": sorted(d.accepting),
        "delta": [list(row) for row in d.transitions],
    }


def dfa_from_dict(obj) -> Dfa:
    if not isinstance(obj, dict):
        raise ParseError("DFA file must contain a JSON object")
    missing = {"alphabet", "states", "initial", "accepting", "delta"} - set(obj)
    if missing:
        raise ParseError(f"DFA object is missing keys: {sorted(missing)}")
    letters = obj["alphabet"]
    if not isinstance(letters, list):
        raise ParseError("'alphabet' must be a list of letters")
    alphabet = Alphabet(tuple(letters))
    m = obj["states"]
    delta = obj["delta"]
    if not isinstance(m, int) or m < 1:
        raise ParseError("'states' must be a positive integer")
    if not isinstance(delta, list) or len(delta) != m:
        raise ParseError(f"'delta' must list one row per state ({m} rows)")
    for s, row in enumerate(delta):
        if not isinstance(row, list) or len(row) != len(letters):
            raise ParseError(f"'delta' row {s} is not total over the alphabet")
    try:
        return Dfa(
            alphabet,
            tuple(tuple(row) for row in delta),
            obj["initial"],
            frozenset(obj["accepting"]),
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(f"invalid DFA object: {exc}") from exc


def load_dfa(path) -> Dfa:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in DFA file: {exc}") from exc
    return dfa_from_dict(obj)


def save_dfa(d: Dfa, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dfa_to_dict(d), fh)
        fh.write("\n")
