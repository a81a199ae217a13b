import itertools

import pytest
from hypothesis import given, strategies as st

from varietal.identities import (
    DECIDABLE,
    SEMIDECIDABLE,
    Identity,
    IdentitySystem,
    VARIETY_ORDER,
    Variety,
    all_permutations,
    basis,
    ident,
    lattice_leq,
    parse_identity,
    parse_system,
    phi_system,
    subvarieties,
    u_word,
    w_family,
)
from varietal.words import Word, WordSyntaxError, letter_classes, parse_word, reverse

W = parse_word


class TestIdentityBasics:
    def test_parse_synonym(self):
        a = parse_identity("x y x = x y x^2")
        b = parse_identity("x y x ≈ x y x^2")
        assert a.lhs == b.lhs and a.rhs == b.rhs

    def test_parse_errors(self):
        with pytest.raises(WordSyntaxError):
            parse_identity("x y")
        with pytest.raises(WordSyntaxError):
            parse_identity("x = y = z")

    def test_trivial(self):
        assert parse_identity("x y = x y").is_trivial
        assert not parse_identity("x y = y x").is_trivial

    def test_reversed(self):
        identity = parse_identity("x^2 y = x y x")
        rev = identity.reversed()
        assert rev.lhs == W("y x^2") and rev.rhs == W("x y x")

    def test_text_forms(self):
        identity = ident("x y x = x y x^2")
        assert identity.text == "x y x = x y x^2"
        assert identity.pretty == "x y x ≈ x y x^2"
        assert identity.label == identity.text


class TestSystems:
    def test_duplicate_rejected(self):
        with pytest.raises(ValueError):
            IdentitySystem("bad", (ident("x = y"), ident("x = y")))

    def test_parse_system_comments(self):
        system = parse_system("# header\nx y = y x\n\nx^2 = x^3\n", "demo")
        assert len(system) == 2
        assert ident("x y = y x") in system

    def test_parse_system_reports_line(self):
        with pytest.raises(WordSyntaxError) as err:
            parse_system("x = x\nxy = z\n", "demo")
        assert err.value.line == 2

    def test_get_by_label(self):
        system = phi_system()
        assert system.get("x y x = x y x^2").rhs == W("x y x^2")
        with pytest.raises(KeyError):
            system.get("nope")


class TestPhi:
    def test_contents(self):
        system = phi_system()
        assert len(system) == 3
        assert ident("x y x = x y x^2") in system
        assert ident("x^2 y^2 = y^2 x^2") in system
        assert ident("x y z x y = y x z x y") in system


class TestFamilies:
    def test_w1(self):
        identity = w_family(1)
        assert identity.lhs == W("x z1 x t1 z1")
        assert identity.rhs == W("x^2 z1 t1 z1")

    def test_w2_identity_perm(self):
        identity = w_family(2)
        assert identity.lhs == W("x z1 z2 x t1 z1 t2 z2")
        assert identity.rhs == W("x^2 z1 z2 t1 z1 t2 z2")

    def test_w2_transposition(self):
        identity = w_family(2, (2, 1))
        assert identity.lhs == W("x z2 z1 x t1 z1 t2 z2")
        assert identity.rhs == W("x^2 z2 z1 t1 z1 t2 z2")

    def test_w_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            w_family(2, (1, 1))
        with pytest.raises(ValueError):
            w_family(0)

    def test_u_examples(self):
        assert u_word(2, 1, (1, 1)) == w_family(2).lhs
        assert u_word(1, 2, (3,)) == W("x z1 x^2 t1 z1^3")
        assert u_word(1, 1, (1,)) == W("x z1 x t1 z1")

    def test_u_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            u_word(0, 1, ())
        with pytest.raises(ValueError):
            u_word(2, 0, (1, 1))
        with pytest.raises(ValueError):
            u_word(2, 1, (1, 0))
        with pytest.raises(ValueError):
            u_word(2, 1, (1,))

    @given(st.integers(1, 4), st.data())
    def test_family_statistics(self, n, data):
        perm = data.draw(st.permutations(range(1, n + 1)))
        identity = w_family(n, tuple(perm))
        for side in (identity.lhs, identity.rhs):
            classes = letter_classes(side)
            assert classes.simple == {f"t{i}" for i in range(1, n + 1)}
            assert classes.con2 == {"x", *(f"z{i}" for i in range(1, n + 1))}
        assert frozenset(identity.lhs) == frozenset(identity.rhs)


class TestBases:
    def test_f_basis(self):
        system = basis(Variety.F)
        assert len(system) == 4
        for member in phi_system():
            assert member in system
        assert ident("x y x z = x y x z x") in system

    def test_evde_basis(self):
        system = basis(Variety.EvdE)
        assert [i.text for i in system] == [
            "x y z x = x y x z x",
            "x^2 y^2 = y^2 x^2",
        ]

    def test_j_basis_trunc2(self):
        system = basis(Variety.J, 2)
        assert system.name == "J[trunc=2]"
        texts = {i.text for i in system}
        assert "x y x z t x = x y x z x t x" in texts
        assert w_family(1).text in texts
        assert w_family(2).text in texts
        assert w_family(2, (2, 1)).text in texts
        # Phi (3) + extension + w-pairs for n<=2 over all permutations (3)
        assert len(system) == 7

    def test_j_trunc_sizes(self):
        assert len(basis(Variety.J, 1)) == 5
        assert len(basis(Variety.J, 3)) == 13

    def test_dual_e_is_reversed_e(self):
        forward = basis(Variety.E)
        dual = basis(Variety.dE)
        assert [(i.lhs, i.rhs) for i in dual] == [
            (reverse(i.lhs), reverse(i.rhs)) for i in forward
        ]

    def test_d_basis(self):
        assert [i.text for i in basis(Variety.D)] == [
            "x^2 = x^3",
            "x^2 y = x y x",
            "x y x = y x^2",
        ]

    def test_h_and_i_bases(self):
        h = {i.text for i in basis(Variety.H)}
        assert {"x^2 y t y = x y x t y", "x y x t y = y x^2 t y"} <= h
        i = {i.text for i in basis(Variety.I)}
        assert "x z x y t y = x z y x t y" in i

    def test_fvde_basis(self):
        texts = [i.text for i in basis(Variety.FvdE)]
        assert texts == [
            "x^2 y^2 = y^2 x^2",
            "x y z x t y = y x z x t y",
            "x z x y t y = x z y x t y",
            "x y x = x y x^2",
            "x y x z t x = x y x z x t x",
        ]

    def test_all_bases_balanced_except_t(self):
        for variety in Variety:
            for identity in basis(variety, 2):
                balanced = frozenset(identity.lhs) == frozenset(identity.rhs)
                assert balanced == (variety is not Variety.T)


class TestLattice:
    def test_examples(self):
        assert lattice_leq(Variety.E, Variety.FvdE)
        assert not lattice_leq(Variety.dE, Variety.F)
        assert not lattice_leq(Variety.F, Variety.dE)
        for v in Variety:
            assert lattice_leq(v, v)

    def test_bottom_and_top(self):
        for v in Variety:
            assert lattice_leq(Variety.T, v)
            assert lattice_leq(v, Variety.J)

    def test_partial_order_exhaustive(self):
        for a, b in itertools.product(Variety, repeat=2):
            if lattice_leq(a, b) and lattice_leq(b, a):
                assert a is b
        for a, b, c in itertools.product(Variety, repeat=3):
            if lattice_leq(a, b) and lattice_leq(b, c):
                assert lattice_leq(a, c)

    def test_cover_structure(self):
        assert lattice_leq(Variety.FvdE, Variety.H)
        assert lattice_leq(Variety.H, Variety.I)
        assert lattice_leq(Variety.I, Variety.J)
        assert lattice_leq(Variety.F, Variety.FvdE)
        assert lattice_leq(Variety.EvdE, Variety.FvdE)
        assert not lattice_leq(Variety.EvdE, Variety.F)
        assert not lattice_leq(Variety.F, Variety.EvdE)

    def test_partition(self):
        assert DECIDABLE | SEMIDECIDABLE == frozenset(Variety)
        assert subvarieties(Variety.D) == {
            Variety.T, Variety.SL, Variety.C, Variety.D,
        }
        assert len(VARIETY_ORDER) == 12
