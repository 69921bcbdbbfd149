from fractions import Fraction
from itertools import product

import pytest

from automata import evaluate, iter_values, words_of_length
from conftest import B, matrix
from constructions import (Nfa, automaton_from_nfa, hat, hat_family, nfa_to_gamma,
                           nfa_to_urk_family, star_extend, tilde)
from oracle import brute_min_word, random_automaton, random_family, random_matrix, random_word
from semigroup_jsr import (certify_jsr_negative, jsr_exact_finite,
                           urk_exact_finite, urk_upper_bound)
from spectral import spectral_radius, ultimate_rank_matrix
from tropical_core import (BOTTOM, DimensionError, TropicalError, TropicalMatrix, identity, ratio,
                           tmul)

STAR = "*"


def nfa(states, transitions, initial, final):
    return Nfa(states, frozenset(transitions), frozenset(initial), frozenset(final))


UNIVERSAL = nfa(1, [(0, "a", 0), (0, "b", 0)], [0], [0])
ONLY_A = nfa(1, [(0, "a", 0)], [0], [0])


def all_nfas(states):
    triples = [(p, s, q) for p in range(states) for s in "ab" for q in range(states)]
    subsets = [frozenset(q for q, keep in zip(range(states), bits) if keep)
               for bits in product((False, True), repeat=states)]
    for mask in product((False, True), repeat=len(triples)):
        transitions = [t for t, keep in zip(triples, mask) if keep]
        for initial in subsets:
            for final in subsets:
                yield nfa(states, transitions, initial, final)


def random_nfa(rng, states):
    triples = [(p, s, q) for p in range(states) for s in "ab" for q in range(states)]
    transitions = [t for t in triples if rng.random() < 0.5]
    initial = [q for q in range(states) if rng.random() < 0.6]
    final = [q for q in range(states) if rng.random() < 0.6]
    return nfa(states, transitions, initial, final)


def zero_minus_one(rng, d, zero_diagonal=False):
    rows = [[int(v) for v in rng.integers(-1, 1, size=d)] for _ in range(d)]
    if zero_diagonal:
        for i in range(d):
            rows[i][i] = 0
    return TropicalMatrix.from_rows(rows)


class TestNfa:
    def test_accepts(self):
        assert UNIVERSAL.accepts(("a", "b", "b"))
        assert ONLY_A.accepts(("a", "a")) and not ONLY_A.accepts(("a", "b"))

    def test_shortest_rejected(self):
        assert UNIVERSAL.shortest_rejected() is None and UNIVERSAL.accepts_all_nonempty()
        assert ONLY_A.shortest_rejected() == ("b",)
        ends_in_b = nfa(2, [(0, "a", 0), (0, "b", 0), (0, "b", 1)], [0], [1])
        assert ends_in_b.shortest_rejected() == ("a",)

    def test_shortest_rejected_matches_enumeration(self, rng):
        for _ in range(100):
            n = random_nfa(rng, int(rng.integers(1, 4)))
            rejected = [w for k in range(1, 2 ** n.states + 1)
                        for w in words_of_length("ab", k) if not n.accepts(w)]
            found = n.shortest_rejected()
            if not rejected:
                assert found is None
            else:
                assert len(found) == len(rejected[0]) and not n.accepts(found)

    def test_validation(self):
        with pytest.raises(TropicalError):
            nfa(0, [], [], [])
        with pytest.raises(TropicalError):
            nfa(1, [(0, "c", 0)], [0], [0])
        with pytest.raises(TropicalError):
            nfa(1, [(0, "a", 1)], [0], [0])

    def test_weight_zero_automaton(self):
        a = automaton_from_nfa(ONLY_A)
        assert evaluate(a, "aaa") == 0
        assert evaluate(a, "ab") is BOTTOM


class TestStarExtend:
    def test_shape(self, max_count):
        ext = star_extend(max_count)
        assert ext.dim == 3
        assert ext.alphabet == ("a", "b", STAR)
        assert ext.initial == (0, 0, 0) and ext.final == (0, 0, 0)

    def test_star_powers(self, max_count):
        ext = star_extend(max_count)
        for m in range(1, 6):
            assert evaluate(ext, (STAR,) * m) == 0

    def test_star_framed_words(self, max_count, rng):
        ext = star_extend(max_count)
        for _ in range(50):
            w = random_word(rng, ("a", "b"), int(rng.integers(1, 6)))
            assert evaluate(ext, (STAR,) + w + (STAR,)) == evaluate(max_count, w)
            assert evaluate(ext, ((STAR,) + w) * 3 + (STAR,)) == 3 * evaluate(max_count, w)

    def test_repeated_frames_scale_the_value(self, rng):
        for _ in range(500):
            a = random_automaton(rng, ("a", "b"), int(rng.integers(1, 4)), -2, 2)
            ext = star_extend(a)
            w = random_word(rng, ("a", "b"), int(rng.integers(1, 5)))
            k = int(rng.integers(1, 6))
            value = evaluate(a, w)
            expected = BOTTOM if value is BOTTOM else k * value
            assert evaluate(ext, ((STAR,) + w) * k + (STAR,)) == expected

    def test_framed_mean_bounds_the_extension(self, rng):
        max_len = 7
        for _ in range(10):
            a = random_automaton(rng, ("a", "b"), 2, -2, 2, bottom_prob=0.0)
            ext = star_extend(a)
            best = min(ratio(v, len(w)) for w, v in iter_values(ext, max_len))
            for u, value in iter_values(a, 3):
                k = 1
                while k * (len(u) + 1) + 1 <= max_len:
                    assert best <= Fraction(k * value, k * (len(u) + 1) + 1)
                    k += 1

    def test_nonnegative_automaton_stays_nonnegative(self, max_count, rng):
        max_len = 4
        cases = [max_count] + [random_automaton(rng, ("a", "b"), 2, -1, 2, bottom_prob=0.0)
                               for _ in range(30)]
        checked = 0
        for a in cases:
            _, least = brute_min_word(a, max_len, bottom_negative=True)
            if least is BOTTOM or least < 0:
                continue
            checked += 1
            for w, value in iter_values(star_extend(a), max_len):
                assert value is not BOTTOM and value >= 0, w
        assert checked > 0

    def test_framed_words_follow_language(self, rng):
        for _ in range(30):
            n = random_nfa(rng, 2)
            ext = star_extend(automaton_from_nfa(n))
            for w in words_of_length("ab", 3):
                expected = 0 if n.accepts(w) else BOTTOM
                assert evaluate(ext, (STAR,) + w + (STAR,)) == expected

    def test_symbol_collision(self, max_count):
        with pytest.raises(TropicalError):
            star_extend(max_count, "a")


def _hat_dichotomy(rng, count):
    for _ in range(count):
        m = random_matrix(rng, int(rng.integers(1, 5)), -2, 2, 0.4)
        rho = spectral_radius(m)
        negative = rho is BOTTOM or rho < 0
        assert (ultimate_rank_matrix(hat(m)) == 1) == negative
        if not negative:
            assert ultimate_rank_matrix(hat(m)) >= 2


def _tilde_dichotomy(rng, count):
    for _ in range(count):
        m = zero_minus_one(rng, int(rng.integers(1, 5)))
        rank = ultimate_rank_matrix(tilde(m))
        if spectral_radius(m) < 0:
            assert rank == 1
        else:
            assert rank == 1 + ultimate_rank_matrix(m)


class TestHat:
    def test_examples(self):
        h = hat(matrix([-1]))
        assert h == matrix([-1, B, B], [B, -1, B], [B, B, 0])
        assert ultimate_rank_matrix(h) == 1
        assert ultimate_rank_matrix(hat(identity(1))) == 3
        assert ultimate_rank_matrix(hat(matrix([1]))) == 2

    def test_homomorphism(self, rng):
        for _ in range(50):
            a, b = random_matrix(rng, 3, -3, 3, 0.3), random_matrix(rng, 3, -3, 3, 0.3)
            assert hat(tmul(a, b)) == tmul(hat(a), hat(b))

    def test_rank_dichotomy(self, rng):
        _hat_dichotomy(rng, 300)

    @pytest.mark.slow
    def test_rank_dichotomy_full(self, rng):
        _hat_dichotomy(rng, 1000)

    def test_family_rank_tracks_negative_products(self, rng):
        for _ in range(30):
            family = random_family(rng, 2, 2, 1, bottom_prob=0.3)
            certified = certify_jsr_negative(family, 3) is not None
            assert (urk_upper_bound(hat_family(family), 3) == 1) == certified

    def test_non_square(self):
        with pytest.raises(DimensionError):
            hat(matrix([0, 1]))


class TestTilde:
    def test_examples(self):
        t = tilde(matrix([-1]))
        assert t == matrix([-1, -1], [-1, 0])
        assert ultimate_rank_matrix(t) == 1
        assert ultimate_rank_matrix(tilde(matrix([0]))) == 2

    def test_rank_dichotomy(self, rng):
        _tilde_dichotomy(rng, 300)

    @pytest.mark.slow
    def test_rank_dichotomy_full(self, rng):
        _tilde_dichotomy(rng, 1000)

    def test_homomorphism_with_zero_diagonal(self, rng):
        for _ in range(50):
            d = int(rng.integers(1, 5))
            a, b = zero_minus_one(rng, d, zero_diagonal=True), zero_minus_one(rng, d)
            assert tilde(tmul(a, b)) == tmul(tilde(a), tilde(b))

    def test_products_clip_at_minus_two(self):
        m = matrix([-1])
        top_left = tmul(tilde(m), tilde(m)).entries[0][0]
        assert top_left == -2

    def test_entry_check(self):
        with pytest.raises(TropicalError):
            tilde(matrix([1]))
        with pytest.raises(TropicalError):
            tilde(matrix([B]))
        with pytest.raises(DimensionError):
            tilde(matrix([0, -1]))


def _universality_agrees(n):
    gamma = nfa_to_gamma(n)
    universal = n.accepts_all_nonempty()
    certificate = certify_jsr_negative(gamma, 2 ** n.states + 1)
    assert (certificate is None) == universal
    exact = jsr_exact_finite(nfa_to_gamma(n, replace_bottom_by_minus_one=True))
    assert (exact == 0) == universal
    assert exact <= 0


class TestNfaReduction:
    def test_universal_family(self):
        gamma = nfa_to_gamma(UNIVERSAL)
        assert len(gamma) == 3 and gamma.dim == 2
        assert certify_jsr_negative(gamma, 3) is None
        assert jsr_exact_finite(nfa_to_gamma(UNIVERSAL, replace_bottom_by_minus_one=True)) == 0

    def test_bottom_certificate(self):
        word, value = certify_jsr_negative(nfa_to_gamma(ONLY_A), 3)
        assert value is BOTTOM
        assert 1 in word

    def test_minus_one_variant_is_negative(self):
        assert jsr_exact_finite(nfa_to_gamma(ONLY_A, replace_bottom_by_minus_one=True)) < 0

    def test_one_state_nfas(self):
        for n in all_nfas(1):
            _universality_agrees(n)

    def test_sampled_two_state_nfas(self, rng):
        for _ in range(200):
            _universality_agrees(random_nfa(rng, 2))

    @pytest.mark.slow
    def test_all_two_state_nfas(self):
        for n in all_nfas(2):
            _universality_agrees(n)

    @pytest.mark.slow
    def test_sampled_three_state_nfas(self, rng):
        for _ in range(50):
            _universality_agrees(random_nfa(rng, 3))

    def test_urk_family(self):
        for n in all_nfas(1):
            family = nfa_to_urk_family(n)
            assert family.dim == 3
            assert (urk_exact_finite(family) >= 2) == n.accepts_all_nonempty()

    def test_alphabet_must_have_two_letters(self):
        single = Nfa(1, frozenset(), frozenset([0]), frozenset([0]), alphabet=("a",))
        with pytest.raises(TropicalError):
            nfa_to_gamma(single)

    def test_generator_order(self):
        gamma = nfa_to_gamma(ONLY_A)
        assert gamma.generators[0] == matrix([0, B], [B, B])
        assert gamma.generators[1] == matrix([B, B], [B, B])
        assert gamma.generators[2] == matrix([0, 0], [0, 0])
