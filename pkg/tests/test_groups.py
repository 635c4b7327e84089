import itertools
import random
from fractions import Fraction

import pytest

from meandim.groups import (
    DirectProduct,
    FiniteWindow,
    FreeGroup,
    GroupError,
    Lattice,
    box_window,
    cyclic_group,
    folner_defect,
    group_from_config,
    product_window,
)


def brute_force_ball_free(rank: int, r: int) -> set:
    """Independent oracle: reduce every letter string of length <= r."""
    letters = [i for g in range(1, rank + 1) for i in (g, -g)]
    seen = set()
    for length in range(r + 1):
        for word in itertools.product(letters, repeat=length):
            reduced = []
            for l in word:
                if reduced and reduced[-1] == -l:
                    reduced.pop()
                else:
                    reduced.append(l)
            seen.add(tuple(reduced))
    return seen


def brute_force_ball_lattice(dim: int, r: int) -> set:
    pts = set()
    for v in itertools.product(range(-r, r + 1), repeat=dim):
        if sum(abs(x) for x in v) <= r:
            pts.add(v)
    return pts


def random_element(group, rng, max_len=6):
    word = [rng.choice([1, -1]) * rng.randint(1, group.num_generators)
            for _ in range(rng.randint(0, max_len))]
    return group.normal_form(word)


class TestNormalForm:
    def test_free_reduction(self):
        F2 = FreeGroup(2)
        g = F2.normal_form([1, -1, 2])
        assert g == F2.generator(2)

    def test_lattice_abelianization(self):
        Z2 = Lattice(2)
        g = Z2.normal_form([1, 2, -1])
        assert g.key == (0, 1)

    def test_cyclic_modular(self):
        Z5 = cyclic_group(5)
        g = Z5.normal_form([1] * 7)
        assert g == Z5.normal_form([1] * 2)

    def test_unknown_symbol_rejected(self):
        F2 = FreeGroup(2)
        with pytest.raises(GroupError):
            F2.normal_form([3])
        with pytest.raises(GroupError):
            F2.normal_form([0])

    def test_inverse_involution_and_identity_law(self):
        rng = random.Random(7)
        for group in (FreeGroup(2), Lattice(3), cyclic_group(6)):
            e = group.identity()
            for _ in range(50):
                g = random_element(group, rng)
                assert g.inverse().inverse() == g
                assert g * e == g
                assert g * g.inverse() == e


class TestBalls:
    def test_free_ball_sizes_match_oracle(self):
        F2 = FreeGroup(2)
        for r in range(5):
            oracle = brute_force_ball_free(2, r)
            ball = F2.ball(r)
            assert len(ball) == len(oracle)
            assert {g.key for g in ball} == oracle

    def test_free_ball_closed_form(self):
        # |B_r| = 1 + 2k((2k-1)^r - 1)/(2k-2) for the free group of rank k
        for k in (2, 3):
            Fk = FreeGroup(k)
            for r in range(7):
                expected = 1 + 2 * k * ((2 * k - 1) ** r - 1) // (2 * k - 2)
                assert len(Fk.ball(r)) == expected

    def test_ball_sizes_basics(self):
        F2 = FreeGroup(2)
        assert len(F2.ball(1)) == 5
        assert len(F2.ball(2)) == 17
        Z2 = Lattice(2)
        assert len(Z2.ball(2)) == 13
        assert {g.key for g in Z2.ball(2)} == brute_force_ball_lattice(2, 2)

    def test_finite_group_saturates(self):
        Z5 = cyclic_group(5)
        assert len(Z5.ball(10)) == 5


class TestEnumeration:
    def test_starts_at_identity(self):
        for group in (FreeGroup(2), Lattice(1), cyclic_group(4)):
            assert next(group.enumerate_elements()).is_identity()

    def test_free_first_five(self):
        F2 = FreeGroup(2)
        prefix = F2.enumeration_prefix(5)
        assert [g.key for g in prefix] == [(), (1,), (-1,), (2,), (-2,)]

    def test_integers_order(self):
        Z = Lattice(1)
        prefix = Z.enumeration_prefix(7)
        assert [g.key[0] for g in prefix] == [0, 1, -1, 2, -2, 3, -3]

    def test_injective_and_stable(self):
        F2 = FreeGroup(2)
        a = [g.key for g in F2.enumeration_prefix(200)]
        b = [g.key for g in F2.enumeration_prefix(200)]
        assert a == b
        assert len(set(a)) == len(a)

    def test_sorted_by_word_length(self):
        for group in (FreeGroup(2), Lattice(2)):
            lengths = [g.word_length() for g in group.enumeration_prefix(100)]
            assert lengths == sorted(lengths)


class TestWindows:
    def test_product_with_identity(self):
        Z2 = Lattice(2)
        F = box_window(Z2, 4)
        K = FiniteWindow(Z2, [Z2.identity()])
        assert product_window(K, F) == F

    def test_lattice_boundary_count(self):
        Z2 = Lattice(2)
        for n in (5, 10):
            F = box_window(Z2, n)
            K = Z2.ball(1)
            KF = product_window(K, F)
            outside = sum(1 for g in KF if g not in F)
            assert outside == 4 * n

    def test_free_ball_algebra(self):
        F2 = FreeGroup(2)
        assert product_window(F2.ball(1), F2.ball(2)).as_set() == F2.ball(3).as_set()

    def test_product_associative_as_sets(self):
        rng = random.Random(3)
        F2 = FreeGroup(2)
        for _ in range(10):
            wins = [
                FiniteWindow(F2, [random_element(F2, rng, 3) for _ in range(4)])
                for _ in range(3)
            ]
            K, F, G = wins
            left = product_window(product_window(K, F), G)
            right = product_window(K, product_window(F, G))
            assert left.as_set() == right.as_set()

    def test_mismatched_owner_rejected(self):
        with pytest.raises(GroupError):
            product_window(FreeGroup(2).ball(1), Lattice(1).ball(1))

    def test_empty_window_rejected(self):
        with pytest.raises(GroupError):
            FiniteWindow(FreeGroup(2), [])


class TestFolnerDefect:
    def test_identity_kernel(self):
        Z2 = Lattice(2)
        K = FiniteWindow(Z2, [Z2.identity()])
        assert folner_defect(K, box_window(Z2, 7)) == 0

    def test_lattice_value(self):
        Z2 = Lattice(2)
        assert folner_defect(Z2.ball(1), box_window(Z2, 10)) == Fraction(40, 100)

    def test_lattice_defect_shrinks(self):
        Z2 = Lattice(2)
        vals = [folner_defect(Z2.ball(1), box_window(Z2, n)) for n in (4, 8, 16, 32)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] == Fraction(4, 32)

    def test_free_group_defect_from_balls(self):
        F2 = FreeGroup(2)
        b3, b4 = len(F2.ball(3)), len(F2.ball(4))
        assert folner_defect(F2.ball(1), F2.ball(3)) == Fraction(b4 - b3, b3)

    def test_free_group_nonamenability_witness(self):
        F2 = FreeGroup(2)
        for r in range(9):
            assert folner_defect(F2.ball(1), F2.ball(r)) >= 1


class TestAssociativity:
    def test_random_triples(self):
        rng = random.Random(42)
        groups = [FreeGroup(2), Lattice(2), cyclic_group(7),
                  DirectProduct([FreeGroup(2), cyclic_group(3)])]
        for group in groups:
            for _ in range(250):
                g, h, k = (random_element(group, rng) for _ in range(3))
                assert (g * h) * k == g * (h * k)


class TestDirectProduct:
    def test_componentwise(self):
        G = DirectProduct([Lattice(1), cyclic_group(2)])
        a = G.letter(1)
        b = G.letter(2)
        assert (a * b) * (a * b) == G.pair(
            Lattice(1).normal_form([1, 1]), cyclic_group(2).identity())

    def test_ball_size(self):
        G = DirectProduct([Lattice(1), Lattice(1)])
        assert len(G.ball(2)) == len(Lattice(2).ball(2))

    def test_word_length_additive(self):
        G = DirectProduct([FreeGroup(1), cyclic_group(3)])
        g = G.normal_form([1, 1, 2])
        assert g.word_length() == 3


class TestLetters:
    def test_letters_recompose(self):
        rng = random.Random(11)
        for group in (FreeGroup(2), Lattice(2), cyclic_group(6),
                      DirectProduct([Lattice(1), cyclic_group(4)])):
            for _ in range(60):
                g = random_element(group, rng)
                assert group.normal_form(g.letters()) == g

    def test_letters_length_matches_word_length(self):
        rng = random.Random(12)
        for group in (FreeGroup(2), Lattice(2), cyclic_group(6)):
            for _ in range(40):
                g = random_element(group, rng)
                assert len(g.letters()) == g.word_length()


class TestConfig:
    def test_round_trip_kinds(self):
        for cfg in ({"kind": "free", "rank": 2},
                    {"kind": "lattice", "dim": 3},
                    {"kind": "cyclic", "order": 5}):
            g = group_from_config(cfg)
            assert g == group_from_config(cfg)

    def test_product_config(self):
        g = group_from_config({
            "kind": "product",
            "factors": [{"kind": "free", "rank": 1}, {"kind": "cyclic", "order": 2}],
        })
        assert g.num_generators == 2

    def test_unknown_kind(self):
        with pytest.raises(GroupError):
            group_from_config({"kind": "hyperbolic"})
