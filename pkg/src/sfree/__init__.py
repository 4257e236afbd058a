"""Decide star-freeness of regular languages and synthesize star-free
expressions, with exact DFA-equivalence verification.

A regular language is star-free exactly when its syntactic monoid is
aperiodic; for aperiodic inputs this package constructs an expression built
from the full language, single letters, union, set difference, and
concatenation only, and checks it against the input by automata
equivalence."""

from .automata import (
    Alphabet,
    Dfa,
    alph,
    dfa_accepts,
    dfa_combine,
    dfa_complement,
    dfa_equivalent,
    dfa_from_homomorphism,
    dfa_minimize,
    empty_dfa,
    enumerate_members,
    epsilon_dfa,
    letter_dfa,
    load_dfa,
    save_dfa,
    universal_dfa,
)
from .errors import (
    AlphabetError,
    MonoidError,
    MonoidSizeError,
    NonAperiodicError,
    NotMinimalError,
    ParseError,
    SfreeError,
)
from .monoid import (
    DEFAULT_MONOID_CAP,
    AperiodicityWitness,
    FiniteMonoid,
    Homomorphism,
    LocalDivisor,
    image_submonoid,
    is_aperiodic,
    local_divisor,
    parse_monoid_table,
    psi_image,
    transition_monoid,
    unit_factorization_check,
    validate_monoid,
)
from .regex import parse_regex, regex_to_dfa, render_regex
from .sfexpr import (
    SfExpr,
    SfMetrics,
    desugar,
    eval_expr,
    expr_letters,
    metrics,
    n_bound,
    parse_expr,
    render_expr,
    simplify,
)
from .synthesis import (
    StarFreenessVerdict,
    SynthesisContext,
    commuting_diagram_check,
    decide_star_free,
    element_token,
    embed_expr,
    sigma_inverse,
    synthesize,
    token_element,
)

__version__ = "0.1.0"
