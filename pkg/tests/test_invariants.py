import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from persinv import (
    InvariantIndex,
    SignedCubeSet,
    direct_sum,
    f_cube,
    f_integral_oracle,
    f_interval_1d,
    f_module,
    f_signed,
    f_to_p_matrix,
    feature_vector,
    module_from_cubes,
    p_module,
    p_signed,
    rank_table,
    reconstruct,
)
from persinv.grid import CubeSpec
from persinv.invariants import (
    diagonal_coefficient,
    features_of_signed,
    indices_of_degree,
    indices_up_to,
    p_cube,
)
from persinv.sampling import random_degenerate_cube, random_general_module, random_signed_set


def idx(a, b):
    a = (a,) if isinstance(a, int) else a
    b = (b,) if isinstance(b, int) else b
    return InvariantIndex(a, b)


def C(x, y):
    return CubeSpec(tuple(x), tuple(y))


def triangle_integral(a, b, x, y):
    """Integral of (z'-z)^(a-2) (z+z')^b over x <= z <= z' <= y by expanding monomials."""
    total = Fraction(0)
    for i in range(a - 1):
        c1 = comb(a - 2, i) * (-1) ** (a - 2 - i)  # z'^i z^(a-2-i)
        for j in range(b + 1):
            c2 = comb(b, j)  # z^j z'^(b-j)
            p, q = a - 2 - i + j, i + b - j  # z^p z'^q
            # inner integral over z' in [z, y]: (y^(q+1) - z^(q+1)) / (q+1)
            # outer over z in [x, y]
            t1 = Fraction(y ** (q + 1)) * Fraction(y ** (p + 1) - x ** (p + 1), p + 1)
            t2 = Fraction(y ** (p + q + 2) - x ** (p + q + 2), p + q + 2)
            total += c1 * c2 * (t1 - t2) / (q + 1)
    return total


def line_integral(b, x, y):
    return Fraction(y ** (b + 1) - x ** (b + 1), b + 1)


class TestIndex:
    def test_rejects_zero_a(self):
        with pytest.raises(ValueError, match="N_\\+"):
            InvariantIndex((0,), (1,))

    def test_counts(self):
        # [DERIVED] C(d+n-1, 2n-1) indices per degree
        for n in (1, 2, 3):
            for d in range(n, n + 4):
                assert len(indices_of_degree(n, d)) == comb(d + n - 1, 2 * n - 1)

    def test_order_and_split(self):
        i = idx((1, 3), (2, 0))
        assert i.I == (0,) and i.J == (1,) and i.degree == 6
        assert idx((1, 1), (1, 0)).precedes(idx((1, 2), (0, 0)))
        assert not idx((1, 2), (0, 0)).precedes(idx((2, 1), (0, 0)))


class TestClosedForm:
    def test_spot_values(self):
        assert f_interval_1d(1, 1, 1, 3) == 4
        assert f_interval_1d(2, 0, 0, 2) == 2
        assert f_interval_1d(3, 0, 0, 1) == Fraction(1, 6)

    def test_exhaustive_small(self):
        for x in range(-3, 4):
            for y in range(x, 4):
                assert f_interval_1d(1, 0, x, y) == y - x
                assert f_interval_1d(2, 0, x, y) == Fraction((y - x) ** 2, 2)

    def test_against_direct_integration(self):
        for a in range(1, 6):
            for b in range(0, 5):
                for x, y in [(0, 1), (-2, 3), (1, 4), (2, 2), (-3, -1)]:
                    want = line_integral(b, x, y) if a == 1 else triangle_integral(a, b, x, y)
                    assert f_interval_1d(a, b, x, y) == want, (a, b, x, y)

    def test_cube_products(self):
        cube = C((0, 0), (2, 3))
        assert f_cube(idx((1, 1), (0, 0)), cube) == 6
        assert f_cube(idx((2, 1), (0, 0)), cube) == 6
        assert p_cube(idx((1, 1), (0, 0)), cube) == 6

    def test_signed(self):
        X = SignedCubeSet.from_terms(1, [(C((0,), (2,)), 1), (C((1,), (3,)), 1)])
        assert f_signed(idx(1, 0), X) == 4
        assert p_signed(idx(1, 1), X) == 12

    def test_module(self, two_bars, l_shape):
        assert f_module(idx(1, 0), two_bars) == 4
        assert f_module(idx((1, 1), (0, 0)), l_shape) == 0
        for i in indices_up_to(2, 6):
            assert p_module(i, l_shape) == 0


class TestOracle:
    def test_single_bar(self):
        rho = rank_table(module_from_cubes(1, [(C((0,), (2,)), 1)]))
        assert f_integral_oracle(idx(1, 0), rho) == 2
        assert f_integral_oracle(idx(2, 0), rho) == 2

    def test_matches_closed_form_1d(self):
        for x in range(0, 4):
            for y in range(x, 5):
                rho = rank_table(module_from_cubes(1, [(C((x,), (y,)), 1)]))
                for i in indices_up_to(1, 5):
                    assert f_integral_oracle(i, rho) == f_interval_1d(i.a[0], i.b[0], x, y)

    def test_general_modules(self, rng):
        for _ in range(8):
            m = random_general_module(rng, 2, 3)
            rho = rank_table(m)
            for i in indices_up_to(2, 4):
                assert f_integral_oracle(i, rho) == f_module(i, m)

    def test_signed_rank_invariants(self, rng):
        for _ in range(8):
            X = random_signed_set(rng, 2, 3)
            rho = reconstruct(X, X.bounding_box())
            for i in indices_up_to(2, 4):
                assert f_integral_oracle(i, rho) == f_signed(i, X)


class TestChangeOfBasis:
    def test_degree_2(self):
        cob = f_to_p_matrix(1, 2)
        assert cob.indices == [idx(1, 1), idx(2, 0)]
        assert cob.T == [[Fraction(1, 2), 0], [0, Fraction(1, 2)]]

    def test_degree_3(self):
        cob = f_to_p_matrix(1, 3)
        assert cob.indices == [idx(1, 2), idx(2, 1), idx(3, 0)]
        F = Fraction
        assert cob.T == [
            [F(1, 4), 0, F(1, 12)],
            [0, F(1, 2), 0],
            [0, 0, F(1, 6)],
        ]

    @pytest.mark.parametrize("n,d", [(1, 2), (1, 3), (1, 4), (1, 5), (2, 2), (2, 3), (2, 4), (3, 3)])
    def test_structure(self, n, d):
        cob = f_to_p_matrix(n, d)
        for r, ri in enumerate(cob.indices):
            assert cob.T[r][r] == diagonal_coefficient(ri)
            for c, ci in enumerate(cob.indices):
                if cob.T[r][c]:
                    assert ri.precedes(ci)
        m = len(cob.indices)
        ident = [[sum(cob.T[i][k] * cob.T_inv[k][j] for k in range(m)) for j in range(m)] for i in range(m)]
        assert ident == [[int(i == j) for j in range(m)] for i in range(m)]

    def test_maps_p_to_F(self, rng):
        for _ in range(10):
            n = rng.randint(1, 2)
            X = random_signed_set(rng, n, 5)
            for d in range(max(2, n), 5):
                cob = f_to_p_matrix(n, d)
                p = [p_signed(i, X) for i in cob.indices]
                F = [f_signed(i, X) for i in cob.indices]
                assert cob.apply(p) == F
                assert cob.apply_inverse(F) == p


class TestFeatures:
    def test_single_bar(self):
        m = module_from_cubes(1, [(C((0,), (2,)), 1)])
        fv = feature_vector(m, 2, "p")
        assert dict(fv.entries) == {idx(1, 0): 2, idx(1, 1): 4, idx(2, 0): 4}
        assert fv[(1, 0)] == 2

    def test_oracle_method(self, two_bars):
        a = feature_vector(two_bars, 4, "F")
        b = feature_vector(two_bars, 4, "F", method="oracle")
        assert a.entries == b.entries
        with pytest.raises(ValueError):
            feature_vector(two_bars, 4, "p", method="oracle")

    def test_summand_order(self):
        a = module_from_cubes(2, [(C((0, 0), (1, 2)), 1)])
        b = module_from_cubes(2, [(C((1, 0), (3, 1)), 1)])
        assert feature_vector(direct_sum(a, b), 4).entries == feature_vector(direct_sum(b, a), 4).entries

    def test_degenerate_invariance(self, rng):
        for _ in range(10):
            n = rng.randint(1, 3)
            X = random_signed_set(rng, n, 4)
            extra = [(random_degenerate_cube(rng, n, 4), rng.choice([-2, -1, 1, 2])) for _ in range(3)]
            Y = X + SignedCubeSet.from_terms(n, extra)
            for fam in ("F", "p"):
                assert features_of_signed(X, n + 3, fam).entries == features_of_signed(Y, n + 3, fam).entries


@settings(max_examples=40, deadline=None)
@given(st.integers(-4, 4), st.integers(0, 5), st.integers(1, 5), st.integers(0, 4))
def test_interval_matches_integration(x, length, a, b):
    y = x + length
    want = line_integral(b, x, y) if a == 1 else triangle_integral(a, b, x, y)
    assert f_interval_1d(a, b, x, y) == want
