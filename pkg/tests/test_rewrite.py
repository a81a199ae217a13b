import itertools
import random

import jsonschema
import pytest
from hypothesis import given, settings, strategies as st

from varietal.identities import IdentitySystem, Variety, basis, ident, parse_identity
from varietal.oracles import (
    check_variety,
    holds_in_F_join_dual_E,
    necessary_filter,
)
from varietal.rewrite import (
    DERIVATION_SCHEMA,
    Bounds,
    Derivation,
    NotFound,
    absorb_square,
    closure,
    closure_trace,
    derive,
    match_instances,
    normalize_con3,
    one_step,
    replay,
    swap_adjacent,
)
from varietal.identities import Identity
from varietal.words import Word, parse_word

from helpers import random_word

W = parse_word

PHI = basis(Variety.F)  # any small system with the padding identity


def brute_matches(pattern: Word, subject: Word):
    """Independent enumerator over all per-variable image-length vectors."""
    variables = tuple(dict.fromkeys(pattern))
    n = len(subject)
    found = set()
    for start in range(n + 1):
        for end in range(start, n + 1):
            factor = subject[start:end]
            for lengths in itertools.product(
                range(len(factor) + 1), repeat=len(variables)
            ):
                if sum(lengths[variables.index(c)] for c in pattern) != len(factor):
                    continue
                images: dict[str, Word] = {}
                pos = 0
                ok = True
                for c in pattern:
                    size = lengths[variables.index(c)]
                    piece = factor[pos : pos + size]
                    if c in images and images[c] != piece:
                        ok = False
                        break
                    images[c] = piece
                    pos += size
                if ok:
                    found.add(
                        (
                            subject[:start],
                            tuple((c, images[c]) for c in variables),
                            subject[end:],
                        )
                    )
    return found


class TestMatchInstances:
    def test_square_pattern(self):
        matches = match_instances(W("x^2"), W("a a"))
        assert any(
            m.prefix == W("") and m.suffix == W("") and dict(m.images)["x"] == W("a")
            for m in matches
        )

    def test_sandwich_pattern(self):
        matches = match_instances(W("x y x"), W("a b a"))
        assert any(
            dict(m.images) == {"x": W("a"), "y": W("b")}
            and m.prefix == W("")
            and m.suffix == W("")
            for m in matches
        )

    def test_empty_images_counted(self):
        matches = match_instances(W("x y x"), W("a b"))
        assert len(matches) == 6
        assert all(dict(m.images)["x"] == W("") for m in matches)

    def test_deduplicated(self):
        matches = match_instances(W("x y x"), W("a b"))
        keys = [(m.prefix, m.images, m.suffix) for m in matches]
        assert len(keys) == len(set(keys))

    def test_exhaustive_against_brute_force(self):
        patterns = [
            Word(p)
            for k in range(1, 5)
            for p in itertools.product("xy", repeat=k)
        ]
        subjects = [
            Word(s)
            for k in range(0, 7)
            for s in itertools.product("ab", repeat=k)
        ]
        rng = random.Random(5)
        subjects = rng.sample(subjects, 40)
        for pattern in patterns:
            for subject in subjects:
                got = {
                    (m.prefix, m.images, m.suffix)
                    for m in match_instances(pattern, subject)
                }
                assert got == brute_matches(pattern, subject), (pattern, subject)

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.sampled_from("xyz"), min_size=1, max_size=4).map(Word),
        st.lists(st.sampled_from("abc"), max_size=5).map(Word),
    )
    def test_random_against_brute_force(self, pattern, subject):
        got = {
            (m.prefix, m.images, m.suffix)
            for m in match_instances(pattern, subject)
        }
        assert got == brute_matches(pattern, subject)


class TestOneStep:
    def test_padding_step(self):
        results = {w for w, _ in one_step(W("x y x"), PHI)}
        assert W("x y x^2") in results

    def test_erasing_image_step(self):
        system = IdentitySystem("ext", (ident("x y z x = x y x z x"),))
        results = {w for w, _ in one_step(W("x y x"), system)}
        assert W("x y x^2") in results

    def test_empty_word(self):
        assert one_step(W(""), PHI) == ()

    def test_step_fields(self):
        result, step = one_step(W("x y x"), PHI)[0]
        assert step.rule in {i.label for i in PHI}
        assert step.direction in ("lr", "rl")
        assert dict(step.images).keys() == {"x", "y"}

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.sampled_from("xy"), min_size=1, max_size=5).map(Word))
    def test_symmetry(self, w):
        for result, _ in one_step(w, PHI):
            back = {u for u, _ in one_step(result, PHI)}
            assert w in back


class TestClosure:
    def test_empty_system(self):
        empty = IdentitySystem("empty", ())
        assert closure(W("x"), empty, Bounds(3, 5)) == {W("x"): 0}

    def test_padding_chain(self):
        system = IdentitySystem("pad", (ident("x y x = x y x^2"),))
        reached = closure(W("x y x"), system, Bounds(6, 5))
        assert set(reached) == {W("x y x"), W("x y x^2"), W("x y x^3")}
        assert reached[W("x y x^3")] == 2

    def test_trace_steps_replay(self):
        from varietal.rewrite import DerivationStep

        system = IdentitySystem("pad", (ident("x y x = x y x^2"),))
        trace = closure_trace(W("x y x"), system, Bounds(4, 6))
        assert any(entry.step is not None for entry in trace.values())
        for word, entry in trace.items():
            if entry.step is None:
                continue
            derivation = Derivation(entry.parent, (DerivationStep(word, entry.step),))
            assert replay(derivation, system) == word


class TestDerive:
    def test_trivial(self):
        result = derive(W("x y"), W("x y"), PHI, Bounds(2, 4))
        assert isinstance(result, Derivation) and len(result) == 0
        assert bool(result)

    def test_join_chain(self):
        system = basis(Variety.EvdE)
        result = derive(W("x z y t x y"), W("x z y t y x"), system, Bounds(6, 10))
        assert isinstance(result, Derivation)
        assert result.end == W("x z y t y x")
        assert replay(result, system) == W("x z y t y x")
        assert len(result) <= 6
        assert max(len(w) for w in result.words()) <= 10

    def test_not_found_not_a_disproof(self):
        result = derive(W("x y"), W("y x"), basis(Variety.E), Bounds(6, 8))
        assert isinstance(result, NotFound)
        assert not result
        assert result.bounds == Bounds(6, 8)

    def test_content_mismatch_short_circuits(self):
        result = derive(W("x"), W("y"), PHI, Bounds(2, 4))
        assert isinstance(result, NotFound)
        assert "content" in result.reason

    def test_unbalanced_system_rejected(self):
        with pytest.raises(ValueError):
            derive(W("x"), W("x x"), basis(Variety.T), Bounds(2, 4))

    def test_deterministic(self):
        system = basis(Variety.EvdE)
        a = derive(W("x z y t x y"), W("x z y t y x"), system, Bounds(6, 10))
        b = derive(W("x z y t x y"), W("x z y t y x"), system, Bounds(6, 10))
        assert a == b

    def test_oracle_consistency_on_random_chains(self):
        # a successful derivation from basis(V) must satisfy V's criterion
        rng = random.Random(11)
        for variety in (Variety.E, Variety.F, Variety.EvdE, Variety.FvdE):
            system = basis(variety)
            for _ in range(25):
                u = random_word(rng, ("x", "y", "z"), 3, 6)
                v = u
                for _ in range(rng.randint(1, 3)):
                    steps = one_step(v, system)
                    if not steps:
                        break
                    v, _ = steps[rng.randrange(len(steps))]
                assert check_variety(variety, Identity(u, v)).is_holds

    def test_json_schema(self):
        system = basis(Variety.EvdE)
        result = derive(W("x z y t x y"), W("x z y t y x"), system, Bounds(6, 10))
        jsonschema.validate(result.to_json(), DERIVATION_SCHEMA)


class TestAbsorbSquare:
    def test_family_instance(self):
        w = W("x z1 x t1 z1")
        result = absorb_square(w, (W(""), "x", W("z1"), W("t1 z1")))
        assert result == W("x^2 z1 t1 z1")

    def test_empty_gap(self):
        w = W("b a a c b")
        result = absorb_square(w, (W("b"), "a", W(""), W("c b")))
        assert result == w

    def test_simple_letter_in_gap_rejected(self):
        w = W("y x s x y^2 t z y")
        with pytest.raises(ValueError):
            absorb_square(w, (W("y"), "x", W("s"), W("y^2 t z y")))

    def test_bad_split_rejected(self):
        with pytest.raises(ValueError):
            absorb_square(W("x y x"), (W(""), "x", W(""), W("")))


class TestSwapAdjacent:
    def test_integrated_case(self):
        w = W("a b s a b")
        result = swap_adjacent(w, (W(""), "a", "b", W("s a b")), "integrated")
        assert result == W("b a s a b")

    def test_second_occurrence_case(self):
        w = W("b a a b")
        result = swap_adjacent(w, (W("b a"), "a", "b", W("")), "second-occurrence")
        assert result == W("b a b a")
        assert holds_in_F_join_dual_E(Identity(w, result))

    def test_neither_hypothesis(self):
        w = W("a b s a t b")
        with pytest.raises(ValueError):
            swap_adjacent(w, (W(""), "a", "b", W("s a t b")), "integrated")
        with pytest.raises(ValueError):
            swap_adjacent(w, (W(""), "a", "b", W("s a t b")), "second-occurrence")

    def test_simple_letters_rejected(self):
        w = W("b a b x")
        with pytest.raises(ValueError):
            swap_adjacent(w, (W("b"), "a", "b", W("x")), "second-occurrence")


class TestNormalizeCon3:
    def test_collapse_run(self):
        assert normalize_con3(W("x^5")) == W("x^3")

    def test_duplicate_pair(self):
        assert normalize_con3(W("x y x")) == W("x y x^2")

    def test_fixed_point(self):
        assert normalize_con3(W("x^3")) == W("x^3")

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.sampled_from("xyzs"), max_size=10).map(Word))
    def test_multiplicities(self, w):
        result = normalize_con3(w)
        for c in frozenset(w):
            before = tuple(w).count(c)
            after = tuple(result).count(c)
            assert after == (before if before == 1 else 3)
        assert necessary_filter(Identity(w, result))
