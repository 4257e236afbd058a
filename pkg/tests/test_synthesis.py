import random

import pytest

from corpus import APERIODIC_CORPUS, NON_APERIODIC, corpus_dfa, words_upto
from sfree.automata import (
    Alphabet,
    dfa_combine,
    dfa_equivalent,
    dfa_from_homomorphism,
    dfa_minimize,
    enumerate_members,
)
from sfree.errors import AlphabetError, MonoidError, NonAperiodicError
from sfree.monoid import (
    FiniteMonoid,
    Homomorphism,
    image_submonoid,
    local_divisor,
    transition_monoid,
)
from sfree.sfexpr import (
    ALL,
    EMPTY,
    EPSILON,
    Concat,
    Difference,
    Empty,
    Letter,
    Union,
    eval_expr,
)
from sfree.synthesis import (
    SynthesisContext,
    commuting_diagram_check,
    decide_star_free,
    element_token,
    embed_expr,
    sigma_inverse,
    synthesize,
    token_element,
)

AB = Alphabet.of("ab")
A1 = Alphabet.of("a")
B_ONLY = Alphabet.of("b")

TRIVIAL = FiniteMonoid(((0,),), 0)
ABSORBING = FiniteMonoid(((0, 1), (1, 1)), 0)
Z2 = FiniteMonoid(((0, 1), (1, 0)), 0)


def ab_star_setup():
    d, _ = corpus_dfa("(ab)*", "ab")
    monoid, hom, accept = transition_monoid(d)
    return d, monoid, hom, accept


class TestTokens:
    def test_round_trip(self):
        assert token_element(element_token(17)) == 17

    def test_bad_tokens(self):
        for tok in ("m", "x3", "m-1", "3"):
            with pytest.raises(MonoidError):
                token_element(tok)


class TestEmbed:
    def test_identity_when_alphabets_match(self):
        e = Union(ALL, Letter("a"))
        assert embed_expr(e, AB, AB) is e

    def test_all_over_subalphabet(self):
        got = embed_expr(ALL, A1, AB)
        assert got == Difference(ALL, Concat(Concat(ALL, Letter("b")), ALL))

    def test_letters_unchanged(self):
        got = embed_expr(Letter("a"), A1, AB)
        assert got == Letter("a")
        assert enumerate_members(eval_expr(got, AB), 3) == [("a",)]

    def test_preserves_word_set(self):
        # expressions over {a} keep their languages when read over {a,b}
        cases = [ALL, Letter("a"), Concat(Letter("a"), ALL), EPSILON, EMPTY]
        for e in cases:
            inner = enumerate_members(eval_expr(e, A1), 5)
            outer = enumerate_members(eval_expr(embed_expr(e, A1, AB), AB), 5)
            assert inner == outer

    def test_foreign_letter_rejected(self):
        with pytest.raises(AlphabetError):
            embed_expr(Letter("b"), A1, AB)

    def test_not_a_subalphabet(self):
        with pytest.raises(AlphabetError):
            embed_expr(ALL, AB, A1)


def sigma_setup():
    """(ab)* morphism with c='a': returns (hom, ctx, synth_letter, tokens)."""
    _, monoid, hom, _ = ab_star_setup()
    sub = hom.alphabet.without("a")
    h_sub = hom.restrict(sub)
    ctx = SynthesisContext()

    def synth_letter(t):
        return synthesize(h_sub, t, context=ctx)

    reachable = image_submonoid(hom, sub)
    tokens = [element_token(t) for t in reachable]
    return hom, synth_letter, reachable, tokens


class TestSigmaInverse:
    def test_all_tokens_translate_to_words_ending_in_c(self):
        hom, synth_letter, _, _ = sigma_setup()
        got = sigma_inverse(ALL, hom, "a", synth_letter)
        assert got == Union(Concat(ALL, Letter("a")), EPSILON)
        d = eval_expr(got, AB)
        for w in words_upto("ab", 5):
            assert d.accepts(w) == (w == () or w[-1] == "a")

    def test_letter_translation_is_preimage_then_c(self):
        hom, synth_letter, reachable, tokens = sigma_setup()
        monoid = hom.monoid
        for t, tok in zip(reachable, tokens):
            got = sigma_inverse(Letter(tok), hom, "a", synth_letter)
            d = eval_expr(got, AB)
            # brute force: w is a b-block of image t followed by the letter a
            for w in words_upto("ab", 6):
                expected = (
                    len(w) >= 1
                    and w[-1] == "a"
                    and "a" not in w[:-1]
                    and hom.evaluate(w[:-1]) == t
                )
                assert d.accepts(w) == expected

    def test_sugar_translates_to_itself(self):
        hom, synth_letter, _, _ = sigma_setup()
        assert sigma_inverse(EMPTY, hom, "a", synth_letter) == EMPTY
        assert sigma_inverse(EPSILON, hom, "a", synth_letter) == EPSILON

    def test_concatenation_law_small_instance(self):
        # the nontrivial structural case: translation of a concatenation is
        # the concatenation of translations (verified by brute force too)
        hom, synth_letter, _, tokens = sigma_setup()
        k1, k2 = Letter(tokens[0]), Letter(tokens[1])
        combined = sigma_inverse(Concat(k1, k2), hom, "a", synth_letter)
        left = sigma_inverse(k1, hom, "a", synth_letter)
        right = sigma_inverse(k2, hom, "a", synth_letter)
        d_combined = eval_expr(combined, AB)
        d_pair = dfa_combine("concatenation", eval_expr(left, AB), eval_expr(right, AB))
        assert dfa_equivalent(d_combined, d_pair)
        assert enumerate_members(d_combined, 8) == enumerate_members(d_pair, 8)

    def test_unknown_token_rejected(self):
        hom, synth_letter, reachable, _ = sigma_setup()
        outside = next(x for x in range(hom.monoid.size) if x not in reachable)
        with pytest.raises(MonoidError):
            sigma_inverse(Letter(element_token(outside)), hom, "a", synth_letter)


class TestSynthesize:
    def test_trivial_image(self):
        h = Homomorphism(A1, TRIVIAL, (0,))
        assert synthesize(h, 0) == ALL

    def test_two_element_monoid_over_one_letter(self):
        h = Homomorphism(A1, ABSORBING, (1,))
        for p in (0, 1):
            e = synthesize(h, p)
            got = eval_expr(e, A1)
            want = dfa_from_homomorphism(h, {p})
            assert dfa_equivalent(got, want)
            assert enumerate_members(got, 6) == enumerate_members(want, 6)

    def test_preimages_of_ab_star_morphism(self):
        _, monoid, hom, accept = ab_star_setup()
        ctx = SynthesisContext()
        for p in range(monoid.size):
            e = synthesize(hom, p, context=ctx)
            assert dfa_equivalent(
                eval_expr(e, AB), dfa_from_homomorphism(hom, {p})
            )

    def test_unreachable_target_is_empty(self):
        # image of the morphism over {a} inside the absorbing 3-element chain
        chain = FiniteMonoid(((0, 1, 2), (1, 2, 2), (2, 2, 2)), 0)
        h = Homomorphism(A1, chain, (2,))
        assert 1 not in h.image
        assert isinstance(synthesize(h, 1), Empty)

    def test_non_aperiodic_rejected(self):
        h = Homomorphism(A1, Z2, (1,))
        with pytest.raises(NonAperiodicError):
            synthesize(h, 0)

    def test_monoid_cap(self):
        _, _, hom, _ = ab_star_setup()
        with pytest.raises(MonoidError):
            synthesize(hom, 0, context=SynthesisContext(max_monoid=3))

    def test_memoized_subproblems_denote_their_preimages(self):
        _, monoid, hom, accept = ab_star_setup()
        ctx = SynthesisContext()
        for p in sorted(accept):
            synthesize(hom, p, context=ctx)
        assert ctx.calls > 0 and ctx.peak_depth >= 2
        assert len(ctx.trace) <= 200
        for sub_hom, target, expr in ctx.trace:
            got = eval_expr(expr, sub_hom.alphabet)
            want = dfa_from_homomorphism(sub_hom, {target})
            assert dfa_equivalent(got, want)


class TestFactorizationSoundness:
    def test_three_way_split_at_first_and_last_c(self):
        # every word maps into the enumerated factorization ranges
        for name, pattern, letters in APERIODIC_CORPUS:
            d, alphabet = corpus_dfa(pattern, letters)
            monoid, hom, _ = transition_monoid(d)
            one = monoid.identity
            cs = [a for a in alphabet if hom.image_of(a) != one]
            if not cs:
                continue
            c = cs[0]
            sub = alphabet.without(c)
            reachable = set(image_submonoid(hom, sub))
            ld = local_divisor(monoid, hom.image_of(c))
            for w in words_upto(alphabet.letters, 6):
                p = hom.evaluate(w)
                if c not in w:
                    assert hom.restrict(sub).evaluate(w) == p
                    assert p in reachable
                    continue
                i = w.index(c)
                j = len(w) - 1 - w[::-1].index(c)
                w1, w2, w3 = w[:i], w[i : j + 1], w[j + 1 :]
                assert c not in w1 and c not in w3
                assert w2[0] == c and w2[-1] == c
                p1, p2, p3 = (hom.evaluate(x) for x in (w1, w2, w3))
                assert monoid.mul(monoid.mul(p1, p2), p3) == p
                assert p1 in reachable and p3 in reachable
                assert p2 in ld.carrier


class TestDecide:
    def test_negative_verdicts_with_valid_witnesses(self):
        for name, pattern, letters in NON_APERIODIC:
            d, _ = corpus_dfa(pattern, letters)
            verdict = decide_star_free(d)
            assert not verdict.star_free
            assert verdict.expressions is None
            monoid, _, _ = transition_monoid(dfa_minimize(d))
            assert verdict.witness.period >= 2
            assert verdict.witness.holds_in(monoid)
            with pytest.raises(NonAperiodicError):
                verdict.language_expression()

    def test_universal_language(self):
        d, _ = corpus_dfa("(a|b)*", "ab")
        verdict = decide_star_free(d)
        assert verdict.star_free
        assert verdict.language_expression() == ALL

    def test_empty_language_gets_empty_expression(self):
        d, _ = corpus_dfa("#", "ab")
        verdict = decide_star_free(d)
        assert verdict.star_free and verdict.expressions == ()
        assert isinstance(verdict.language_expression(), Empty)

    def test_ab_star_round_trip(self):
        d, _ = corpus_dfa("(ab)*", "ab")
        verdict = decide_star_free(d)
        assert verdict.star_free and verdict.monoid_size == 6
        assert dfa_equivalent(eval_expr(verdict.language_expression(), AB), d)

    def test_simplify_opt_out(self):
        d, _ = corpus_dfa("(ab)*", "ab")
        raw = decide_star_free(d, simplify_output=False)
        assert dfa_equivalent(eval_expr(raw.language_expression(), AB), d)

    def test_accepts_non_minimal_input(self):
        # decide minimizes internally
        from sfree.automata import Dfa

        bloated = Dfa(AB, ((1, 2), (3, 0), (2, 2), (3, 3)), 0, frozenset({0}))
        verdict = decide_star_free(bloated)
        assert verdict.star_free and verdict.monoid_size == 6


def random_block_word(rng, sub_letters, c, max_len):
    """Random word made of blocks (B* c), total length <= max_len."""
    word = []
    while True:
        block_len = rng.randint(0, 3)
        if len(word) + block_len + 1 > max_len or rng.random() < 0.25:
            return tuple(word)
        word.extend(rng.choice(sub_letters) for _ in range(block_len))
        word.append(c)


class TestCommutingDiagram:
    def test_empty_word(self):
        _, _, hom, _ = ab_star_setup()
        assert commuting_diagram_check(hom, "a", ())

    def test_single_block(self):
        _, _, hom, _ = ab_star_setup()
        assert commuting_diagram_check(hom, "a", ("a",))

    def test_random_words(self):
        _, _, hom, _ = ab_star_setup()
        rng = random.Random(7)
        for _ in range(100):
            w = random_block_word(rng, ["b"], "a", 12)
            assert commuting_diagram_check(hom, "a", w)

    def test_word_outside_block_language_rejected(self):
        _, _, hom, _ = ab_star_setup()
        with pytest.raises(ValueError):
            commuting_diagram_check(hom, "a", ("a", "b"))


class TestEndToEndCorpus:
    def test_every_corpus_language_round_trips(self):
        for name, pattern, letters in APERIODIC_CORPUS:
            d, alphabet = corpus_dfa(pattern, letters)
            verdict = decide_star_free(d)
            assert verdict.star_free, name
            e = verdict.language_expression()
            assert dfa_equivalent(eval_expr(e, alphabet), d), name


from hypothesis import given, settings, strategies as st  # noqa: E402

from sfree import regex as rx  # noqa: E402
from sfree.regex import regex_to_dfa  # noqa: E402

_regex_leaves = st.sampled_from(
    [rx.Letter("a"), rx.Letter("b"), rx.Epsilon(), rx.Empty()]
)
_regexes = st.recursive(
    _regex_leaves,
    lambda inner: st.one_of(
        st.builds(rx.Union, inner, inner),
        st.builds(rx.Concat, inner, inner),
        st.builds(rx.Star, inner),
    ),
    max_leaves=6,
)


@settings(max_examples=60, deadline=None)
@given(_regexes)
def test_random_languages_round_trip_or_witness(ast):
    d = regex_to_dfa(ast, AB)
    verdict = decide_star_free(d)
    if verdict.star_free:
        e = verdict.language_expression()
        assert dfa_equivalent(eval_expr(e, AB), d)
    else:
        monoid, _, _ = transition_monoid(dfa_minimize(d))
        assert verdict.witness.holds_in(monoid)
