from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fqlab import make_field
from fqlab.errors import BudgetExceeded
from fqlab.space import all_points, index_to_point, point_index
from fqlab.varieties import (
    ParamTuple,
    VarietyFamily,
    distinct_varieties_check,
    eval_f,
    flat_as_V,
    load_family,
    membership_V,
    membership_W,
    poly_table,
    random_polynomial,
    schwartz_zippel_count,
    schwartz_zippel_trials,
    sphere_as_W,
    sum_of_squares_table,
)

F3, F5, F7 = make_field(3), make_field(5), make_field(7)


def zero(ctx, d):
    return np.zeros(ctx.q**d, dtype=np.int64)


class TestEvalF:
    def test_line(self):
        fam = VarietyFamily(F5, 1, 1, (zero(F5, 1),), ((1,),))
        assert eval_f(fam, 1, (1,), (2, 3)) == 0

    def test_sphere_shift(self):
        fam = VarietyFamily.spheres(F5, 2)
        assert eval_f(fam, 1, (1, 2), (0, 0, 0)) == 0

    def test_cubed_exponent_without_coprimality(self):
        # 3 shares a factor with q-1 = 6, so the family needs the check turned off
        with pytest.raises(ValueError):
            VarietyFamily(F7, 2, 1, (zero(F7, 2),), ((3, 1),))
        fam = VarietyFamily(F7, 2, 1, (zero(F7, 2),), ((3, 1),), check_exponents=False)
        assert eval_f(fam, 1, (2, 1), (1, 1, 0)) == 2

    def test_errors(self):
        fam = VarietyFamily.flats(F5, 2, 1)
        with pytest.raises(ValueError):
            eval_f(fam, 1, (1,), (0, 0, 0))
        with pytest.raises(ValueError):
            eval_f(fam, 2, (1, 1), (0, 0, 0))
        with pytest.raises(ValueError):
            eval_f(fam, 1, (1, 1), (0, 0))

    def test_matches_direct_formula(self):
        # h_i(x) + sum a_ij x_j^{b_ij} + a_i(d+1), computed with Python integers mod 7
        rng = np.random.default_rng(3)
        h = rng.integers(0, 7, 49)
        fam = VarietyFamily(F7, 2, 1, (h,), ((5, 1),))
        for x in product(range(7), repeat=2):
            a = rng.integers(0, 7, 3).tolist()
            direct = (h[x[0] * 7 + x[1]] + a[0] * x[0] ** 5 + a[1] * x[1] + a[2]) % 7
            assert eval_f(fam, 1, x, a) == direct


class TestFamilyValidation:
    def test_table_shape(self):
        with pytest.raises(ValueError):
            VarietyFamily(F5, 2, 1, (np.zeros(5),), ((1, 1),))

    def test_table_entries(self):
        with pytest.raises(ValueError):
            VarietyFamily(F5, 1, 1, (np.full(5, 5),), ((1,),))

    def test_counts(self):
        with pytest.raises(ValueError):
            VarietyFamily(F5, 1, 2, (zero(F5, 1),), ((1,),))
        with pytest.raises(ValueError):
            VarietyFamily(F5, 0, 1, (), ())

    def test_exponent_coprime(self):
        with pytest.raises(ValueError):
            VarietyFamily(F5, 1, 1, (zero(F5, 1),), ((2,),))
        VarietyFamily(F5, 1, 1, (zero(F5, 1),), ((3,),))

    def test_load_family(self):
        fam = load_family(F5, {"d": 2, "k": 1, "h": ["sum_of_squares"], "b": [[1, 1]]})
        assert np.array_equal(fam.h[0], sum_of_squares_table(F5, 2))
        fam = load_family(F5, {"d": 1, "k": 2, "h": ["zero", [0, 1, 2, 3, 4]], "b": [[1], [3]]})
        assert fam.h[1].tolist() == [0, 1, 2, 3, 4] and fam.b == ((1,), (3,))
        with pytest.raises(ValueError):
            load_family(F5, {"d": 1, "k": 1, "h": ["cubes"], "b": [[1]]})


class TestMembership:
    def test_line_examples(self):
        fam = VarietyFamily.flats(F5, 1, 1)
        a = ParamTuple(((2, 3),))
        assert membership_V(fam, a, (1, 0))
        assert not membership_V(fam, a, (1, 1))

    def test_points_built_from_f_are_members(self):
        rng = np.random.default_rng(0)
        fam = VarietyFamily(F7, 2, 2, (rng.integers(0, 7, 49), zero(F7, 2)), ((1, 5), (1, 1)))
        for _ in range(50):
            a = ParamTuple(tuple(tuple(rng.integers(0, 7, 3).tolist()) for _ in range(2)))
            x = tuple(rng.integers(0, 7, 2).tolist())
            p = x + tuple(eval_f(fam, i + 1, x, a.a[i]) for i in range(2))
            assert membership_V(fam, a, p)

    def test_sphere_examples(self):
        fam, a = sphere_as_W(F5, (0, 0), 1)
        assert a.a == ((0, 0, 4),)
        assert membership_W(fam, a, (1, 0))
        assert not membership_W(fam, a, (2, 2))
        on = {x for x in product(range(5), repeat=2) if membership_W(fam, a, x)}
        assert on == {(1, 0), (4, 0), (0, 1), (0, 4)}

    def test_zero_radius_contains_center(self):
        fam, a = sphere_as_W(F3, (1, 1), 0)
        assert membership_W(fam, a, (1, 1))

    def test_sphere_parametrization_is_injective(self):
        seen = {}
        for c in product(range(3), repeat=2):
            for r in range(3):
                _, a = sphere_as_W(F3, c, r)
                assert a not in seen
                seen[a] = (c, r)

    @given(st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)),
           st.integers(0, 6), st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6)))
    def test_sphere_membership_is_the_distance_equation(self, center, r, x):
        fam, a = sphere_as_W(F7, center, r)
        direct = sum((xi - ci) ** 2 for xi, ci in zip(x, center)) % 7 == r
        assert membership_W(fam, a, x) == direct

    def test_param_errors(self):
        fam = VarietyFamily.flats(F5, 1, 1)
        with pytest.raises(ValueError):
            membership_V(fam, ParamTuple(((1, 2, 3),)), (0, 0))
        with pytest.raises(ValueError):
            membership_V(fam, ParamTuple(((1, 2),)), (0, 0, 0))

    def test_param_index_roundtrip(self):
        fam = VarietyFamily.flats(F3, 2, 2)
        for idx in (0, 1, 17, 728):
            assert ParamTuple.from_index(idx, fam).index(3) == idx


class TestFlats:
    def test_lines_are_all_nonvertical(self):
        fam = VarietyFamily.flats(F5, 1, 1)
        lines = {frozenset(row.tolist()) for row in fam.variety_point_indices()}
        pts = all_points(5, 2)
        expected = {frozenset(int(point_index(p, 5)) for p in pts if (a * p[0] + b) % 5 == p[1])
                    for a in range(5) for b in range(5)}
        assert lines == expected and len(lines) == 25

    def test_plane_has_nine_points(self):
        fam, a = flat_as_V(F3, 2, 1, [(1, 1, 0)])
        on = [p for p in product(range(3), repeat=3) if membership_V(fam, a, p)]
        assert len(on) == 9 and all(p[2] == (p[0] + p[1]) % 3 for p in on)

    def test_line_in_three_space(self):
        fam, a = flat_as_V(F3, 1, 2, [(1, 0), (2, 1)])
        assert sum(membership_V(fam, a, p) for p in product(range(3), repeat=3)) == 3

    @pytest.mark.parametrize("q,d,k", [(3, 1, 1), (3, 2, 1), (3, 1, 2), (5, 2, 1), (3, 2, 2)])
    def test_every_variety_has_q_to_d_points(self, q, d, k):
        fam = VarietyFamily.flats(make_field(q), d, k)
        pts = fam.variety_point_indices()
        assert pts.shape == (q ** ((d + 1) * k), q**d)
        assert all(len(set(row.tolist())) == q**d for row in pts)

    def test_variety_indices_match_membership(self):
        fam = VarietyFamily(F5, 2, 1, (sum_of_squares_table(F5, 2),), ((1, 3),))
        pts = fam.variety_point_indices()
        rng = np.random.default_rng(2)
        for t in rng.integers(0, fam.n_params, 20):
            a = ParamTuple.from_index(int(t), fam)
            members = {int(point_index(p, 5)) for p in all_points(5, 3) if membership_V(fam, a, p)}
            assert members == set(pts[t].tolist())


class TestSchwartzZippel:
    def test_xy(self):
        table = poly_table(F5, 2, {(1, 1): 1})
        assert schwartz_zippel_count(F5, 2, table, 2) == 9

    def test_single_variable_is_tight(self):
        assert schwartz_zippel_count(F7, 2, poly_table(F7, 2, {(1, 0): 1}), 1) == 7

    def test_no_zeros(self):
        assert schwartz_zippel_count(F7, 1, poly_table(F7, 1, {(2,): 1, (0,): 1}), 2) == 0

    def test_errors(self):
        with pytest.raises(ValueError):
            schwartz_zippel_count(F5, 2, np.zeros(25), 1)
        with pytest.raises(ValueError):
            schwartz_zippel_count(F5, 2, np.ones(25), 0)
        with pytest.raises(ValueError):
            schwartz_zippel_count(F5, 2, np.ones(5), 1)

    @given(st.sampled_from([3, 5, 7]), st.integers(1, 3), st.integers(1, 4), st.integers(0, 2**32))
    def test_random_polynomials_respect_the_bound(self, q, d, k, seed):
        ctx = make_field(q)
        k = min(k, d * (q - 1))
        terms = random_polynomial(ctx, d, k, np.random.default_rng(seed))
        assert max(sum(m) for m in terms) == k
        assert all(e < q for m in terms for e in m)
        table = poly_table(ctx, d, terms)
        assert schwartz_zippel_count(ctx, d, table, k) <= k * q ** (d - 1)

    def test_poly_table_matches_python(self):
        terms = {(2, 1): 3, (0, 0): 4, (1, 3): 1}
        table = poly_table(F7, 2, terms)
        for idx, (x, y) in enumerate(product(range(7), repeat=2)):
            assert table[idx] == (3 * x * x * y + 4 + x * y**3) % 7

    def test_trials(self):
        r = schwartz_zippel_trials(F5, 2, 30, seed=4)
        assert r.satisfied and r.seed == 4 and r.params["samples"] == 30
        assert r.to_json(False) == schwartz_zippel_trials(F5, 2, 30, seed=4).to_json(False)


class TestDistinctVarieties:
    def test_lines(self):
        assert distinct_varieties_check(VarietyFamily.flats(F3, 1, 1))

    def test_spheres(self):
        fam = VarietyFamily(F3, 2, 1, (sum_of_squares_table(F3, 2),), ((1, 1),))
        assert fam.n_params == 27 and distinct_varieties_check(fam)

    def test_q5_d1_k2(self):
        fam = VarietyFamily.flats(F5, 1, 2)
        assert fam.n_params == 625 and distinct_varieties_check(fam)

    def test_threshold(self):
        with pytest.raises(BudgetExceeded):
            distinct_varieties_check(VarietyFamily.flats(F7, 2, 2))

    def test_random_shifts_and_exponents(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            fam = VarietyFamily(F7, 2, 1, (rng.integers(0, 7, 49),), ((5, 1),))
            assert distinct_varieties_check(fam)


def test_space_roundtrip():
    idx = np.arange(125)
    assert np.array_equal(point_index(index_to_point(idx, 5, 3), 5), idx)
    assert all_points(3, 2).tolist() == [list(p) for p in product(range(3), repeat=2)]
