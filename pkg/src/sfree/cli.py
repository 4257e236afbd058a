"""Command-line front end.

Subcommands: ``analyze`` (star-freeness verdict with certificate),
``synthesize`` (verdict plus a star-free expression), ``verify``
(equivalence of a language and an expression file), ``bound`` (pumping
threshold of an expression), and ``oracle`` (brute-force membership
comparison of two language specs).

Exit codes: 0 star-free / equivalent / agreement, 1 the negative outcome,
2 input error (reported as one line ``error: <code>: <message>``).
"""

from __future__ import annotations

import argparse
import json
import sys

from .automata import Alphabet, Dfa, dfa_equivalent, dfa_minimize, load_dfa
from .errors import AlphabetError, MonoidSizeError, ParseError, SfreeError
from .monoid import (
    DEFAULT_MONOID_CAP,
    Homomorphism,
    is_aperiodic,
    parse_monoid_table,
    transition_monoid,
)
from .regex import RESERVED, parse_regex, regex_to_dfa
from .sfexpr import eval_expr, expr_letters, metrics, n_bound, parse_expr, render_expr
from .synthesis import decide_star_free

WORD_LIMIT_DEFAULT = 8


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _SpecAction(argparse.Action):
    """Collect (kind, value) pairs in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        specs = getattr(namespace, "specs", None)
        if specs is None:
            specs = []
            setattr(namespace, "specs", specs)
        specs.append((self.dest, values))


def _build_parser() -> _Parser:
    parser = _Parser(prog="sfree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_language_source(p, with_monoid=False):
        p.add_argument("--regex", help="regular expression for the input language")
        p.add_argument("--dfa", help="path to a DFA JSON file")
        if with_monoid:
            p.add_argument("--monoid", help="path to a monoid table file")
            p.add_argument(
                "--letters",
                help="letter map 'a=0,b=3' validated against the monoid",
            )
        p.add_argument(
            "--alphabet",
            help="alphabet for --regex as a string of letters (default: the "
            "letters occurring in the pattern)",
        )

    p = sub.add_parser("analyze", help="decide star-freeness")
    add_language_source(p, with_monoid=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-monoid", type=int, default=DEFAULT_MONOID_CAP)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("synthesize", help="produce a star-free expression")
    add_language_source(p)
    p.add_argument("--no-simplify", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-monoid", type=int, default=DEFAULT_MONOID_CAP)
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("verify", help="check a language against an expression file")
    add_language_source(p)
    p.add_argument("--expr", required=True, help="path to an expression file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bound", help="pumping threshold of an expression")
    p.add_argument("--expr", required=True, help="path to an expression file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("oracle", help="compare two language specs word by word")
    p.add_argument("--regex", action=_SpecAction, help="language given by a regex")
    p.add_argument("--dfa", action=_SpecAction, help="language given by a DFA file")
    p.add_argument("--expr", action=_SpecAction, help="language given by an expression file")
    p.add_argument("--alphabet", help="shared alphabet for regex/expression specs")
    p.add_argument("--maxlen", type=int, default=WORD_LIMIT_DEFAULT)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_oracle)

    return parser


# ---------------------------------------------------------------------------
# input loading


def _regex_alphabet(pattern: str, declared: str | None) -> Alphabet:
    if declared is not None:
        return Alphabet.of(declared)
    return Alphabet(tuple(sorted({ch for ch in pattern if ch not in RESERVED})))


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_expr_dfa(path: str, declared: str | None) -> Dfa:
    text = _read_text(path)
    expr = parse_expr(text, None)
    if declared is not None:
        alphabet = Alphabet.of(declared)
    else:
        alphabet = Alphabet(tuple(sorted(expr_letters(expr))))
    return eval_expr(parse_expr(text, alphabet), alphabet)


def _load_language(args) -> Dfa:
    sources = [s for s in ("regex", "dfa") if getattr(args, s, None) is not None]
    if len(sources) != 1:
        raise _UsageError("exactly one of --regex/--dfa is required")
    if args.regex is not None:
        alphabet = _regex_alphabet(args.regex, args.alphabet)
        return regex_to_dfa(parse_regex(args.regex, alphabet), alphabet)
    d = load_dfa(args.dfa)
    if args.alphabet is not None and Alphabet.of(args.alphabet) != d.alphabet:
        raise AlphabetError(
            f"--alphabet {args.alphabet!r} does not match the DFA file's alphabet"
        )
    return d


def _parse_letter_map(spec: str, monoid) -> Homomorphism:
    letters = []
    images = []
    for item in spec.split(","):
        if "=" not in item:
            raise ParseError(f"bad letter map entry {item!r}")
        letter, _, idx = item.partition("=")
        letter = letter.strip()
        try:
            images.append(int(idx))
        except ValueError:
            raise ParseError(f"bad element index {idx!r} in letter map") from None
        letters.append(letter)
    return Homomorphism(Alphabet(tuple(letters)), monoid, tuple(images))


# ---------------------------------------------------------------------------
# reports


def _witness_dict(witness):
    if witness is None:
        return None
    return {"element": witness.element, "index": witness.index, "period": witness.period}


def _print_analysis(size, witness, *, star_free_line=True):
    print(f"monoid size: {size}")
    print(f"aperiodic: {'yes' if witness is None else 'no'}")
    if witness is not None:
        print(
            f"witness: element {witness.element}, index {witness.index}, "
            f"period {witness.period}"
        )
    if star_free_line:
        print(f"star-free: {'yes' if witness is None else 'no'}")


def _report_json(size, witness, expression=None, expr_metrics=None):
    obj = {
        "verdict": "star-free" if witness is None else "not-star-free",
        "monoid_size": size,
        "witness": _witness_dict(witness),
        "expression": expression,
        "metrics": None
        if expr_metrics is None
        else {
            "node_count": expr_metrics.node_count,
            "concat_depth": expr_metrics.concat_depth,
            "n_bound": expr_metrics.n_bound,
        },
    }
    print(json.dumps(obj))


# ---------------------------------------------------------------------------
# commands


def _cmd_analyze(args) -> int:
    if getattr(args, "monoid", None) is not None:
        if args.regex is not None or args.dfa is not None:
            raise _UsageError("--monoid cannot be combined with --regex/--dfa")
        monoid = parse_monoid_table(_read_text(args.monoid))
        if monoid.size > args.max_monoid:
            raise MonoidSizeError(
                f"monoid size {monoid.size} exceeds the cap {args.max_monoid}"
            )
        if args.letters is not None:
            _parse_letter_map(args.letters, monoid)  # validation only
        witness = is_aperiodic(monoid)
        size = monoid.size
        language_input = False
    else:
        if getattr(args, "letters", None) is not None:
            raise _UsageError("--letters requires --monoid")
        d = _load_language(args)
        monoid, _, _ = transition_monoid(dfa_minimize(d), max_size=args.max_monoid)
        witness = is_aperiodic(monoid)
        size = monoid.size
        language_input = True
    if args.json:
        _report_json(size, witness)
    else:
        _print_analysis(size, witness, star_free_line=language_input)
    return 0 if witness is None else 1


def _cmd_synthesize(args) -> int:
    d = _load_language(args)
    verdict = decide_star_free(
        d, max_monoid=args.max_monoid, simplify_output=not args.no_simplify
    )
    if not verdict.star_free:
        if args.json:
            _report_json(verdict.monoid_size, verdict.witness)
        else:
            _print_analysis(verdict.monoid_size, verdict.witness)
            print("no expression: language is not star-free")
        return 1
    expression = verdict.language_expression()
    text = render_expr(expression)
    m = metrics(expression)
    if args.json:
        _report_json(verdict.monoid_size, None, text, m)
    else:
        _print_analysis(verdict.monoid_size, None)
        print(f"expression: {text}")
        print(f"nodes: {m.node_count}")
        print(f"concat depth: {m.concat_depth}")
        print(f"n bound: {m.n_bound}")
    return 0


def _cmd_verify(args) -> int:
    d = _load_language(args)
    expr = parse_expr(_read_text(args.expr), d.alphabet)
    equivalent = dfa_equivalent(d, eval_expr(expr, d.alphabet))
    if args.json:
        print(json.dumps({"equivalent": equivalent}))
    else:
        print(f"equivalent: {'yes' if equivalent else 'no'}")
    return 0 if equivalent else 1


def _cmd_bound(args) -> int:
    expr = parse_expr(_read_text(args.expr), None)
    value = n_bound(expr)
    if args.json:
        print(json.dumps({"n_bound": value}))
    else:
        print(value)
    return 0


def _format_word(word: tuple[str, ...]) -> str:
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return " ".join(word)


def _cmd_oracle(args) -> int:
    specs = getattr(args, "specs", None) or []
    if len(specs) != 2:
        raise _UsageError("oracle needs exactly two language specs")
    dfas = []
    for kind, value in specs:
        if kind == "regex":
            alphabet = _regex_alphabet(value, args.alphabet)
            dfas.append(regex_to_dfa(parse_regex(value, alphabet), alphabet))
        elif kind == "dfa":
            dfas.append(load_dfa(value))
        else:
            dfas.append(_load_expr_dfa(value, args.alphabet))
    d1, d2 = dfas
    if d1.alphabet != d2.alphabet:
        raise AlphabetError(
            f"the two specs use different alphabets: "
            f"{list(d1.alphabet.letters)!r} vs {list(d2.alphabet.letters)!r}"
        )
    from itertools import product

    for n in range(args.maxlen + 1):
        for word in product(d1.alphabet.letters, repeat=n):
            m1, m2 = d1.accepts(word), d2.accepts(word)
            if m1 != m2:
                if args.json:
                    print(
                        json.dumps(
                            {
                                "agree": False,
                                "word": _format_word(word),
                                "left": m1,
                                "right": m2,
                            }
                        )
                    )
                else:
                    print(
                        f"disagree: word '{_format_word(word)}' "
                        f"left={'yes' if m1 else 'no'} right={'yes' if m2 else 'no'}"
                    )
                return 1
    if args.json:
        print(json.dumps({"agree": True, "maxlen": args.maxlen}))
    else:
        print(f"agree: no disagreement up to length {args.maxlen}")
    return 0


# ---------------------------------------------------------------------------
# entry points


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 2
    except SfreeError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
