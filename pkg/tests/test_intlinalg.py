import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meandim.intlinalg import (
    bareiss_rank,
    determinant,
    fraction_gauss_rank,
    matrix_product,
    quotient_image_rank,
    smith_normal_form,
    snf_diagonal,
    sparse_rank,
)


def check_snf(M):
    rows, cols = len(M), len(M[0])
    U, D, V = smith_normal_form(M)
    assert matrix_product(matrix_product(U, M), V) == D
    assert abs(determinant(U)) == 1
    assert abs(determinant(V)) == 1
    diag = [D[i][i] for i in range(min(rows, cols))]
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert D[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    assert all(x >= 0 for x in diag)
    assert sum(1 for x in diag if x) == bareiss_rank(M)
    return diag


class TestSmithNormalForm:
    def test_identity(self):
        diag = check_snf([[1, 0], [0, 1]])
        assert diag == [1, 1]

    def test_hand_example(self):
        # det = -8, entry gcd = 2, so invariant factors are 2 and 4
        diag = check_snf([[2, 4], [6, 8]])
        assert diag == [2, 4]

    def test_zero_matrix(self):
        diag = check_snf([[0, 0, 0], [0, 0, 0]])
        assert diag == [0, 0]

    def test_rectangular(self):
        check_snf([[1, 2, 3], [4, 5, 6]])
        check_snf([[2], [4], [6]])

    def test_seeded_random_batch(self):
        rng = random.Random(123)
        for _ in range(200):
            rows = rng.randint(1, 6)
            cols = rng.randint(1, 6)
            M = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
            check_snf(M)

    @given(st.lists(st.lists(st.integers(-20, 20), min_size=1, max_size=4),
                    min_size=1, max_size=4).filter(
                        lambda m: len({len(r) for r in m}) == 1))
    @settings(max_examples=60, deadline=None)
    def test_property_random_shapes(self, M):
        check_snf(M)


class TestRanks:
    def test_three_routes_agree(self):
        rng = random.Random(7)
        for _ in range(150):
            rows = rng.randint(1, 6)
            cols = rng.randint(1, 6)
            M = [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]
            r1 = bareiss_rank(M)
            r2 = fraction_gauss_rank(M)
            sparse_rows = [{j: v for j, v in enumerate(row) if v} for row in M]
            r3 = sparse_rank(sparse_rows)
            assert r1 == r2 == r3

    def test_rank_deficient(self):
        M = [[1, 2], [2, 4], [3, 6]]
        assert bareiss_rank(M) == 1
        assert fraction_gauss_rank(M) == 1

    def test_quotient_image_rank(self):
        # quotient Z^3 by span{e1 - e2}; images of e1, e2, e3 span rank 2
        relations = [{0: Fraction(1), 1: Fraction(-1)}]
        generators = [{0: Fraction(1)}, {1: Fraction(1)}, {2: Fraction(1)}]
        assert quotient_image_rank(generators, relations) == 2

    def test_quotient_by_nothing(self):
        generators = [{0: Fraction(1)}, {0: Fraction(2)}]
        assert quotient_image_rank(generators, []) == 1


class TestDeterminant:
    def test_known_values(self):
        assert determinant([[2, 0], [0, 3]]) == 6
        assert determinant([[1, 2], [3, 4]]) == -2
        assert determinant([[0, 1], [1, 0]]) == -1

    def test_matches_cofactor_small(self):
        rng = random.Random(11)

        def cofactor_det(M):
            n = len(M)
            if n == 1:
                return M[0][0]
            total = 0
            for j in range(n):
                minor = [row[:j] + row[j + 1:] for row in M[1:]]
                total += (-1) ** j * M[0][j] * cofactor_det(minor)
            return total

        for _ in range(80):
            n = rng.randint(1, 4)
            M = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
            assert determinant(M) == cofactor_det(M)
