from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fqlab import make_field
from fqlab.beck import (
    CoplanarPoints,
    beck_reports,
    circle_through,
    count_objects_and_radii,
    determined_objects,
    distinct_circles,
    distinct_radii,
    distinct_spheres,
    sphere_solver_trials,
    sphere_through,
)
from fqlab.errors import DegenerateInput
from fqlab.space import all_points
from oracles import brute_circles

F3, F5, F7 = make_field(3), make_field(5), make_field(7)
QUAD = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]


class TestSolver:
    def test_sphere_example(self):
        s = sphere_through(F3, *QUAD)
        assert (s.center, s.r) == ((2, 2, 2), 0)
        assert str(s) == "center=(2,2,2) r=0"

    def test_sphere_permutation_invariant(self):
        for perm in permutations(QUAD):
            assert sphere_through(F3, *perm) == sphere_through(F3, *QUAD)

    def test_coplanar_rejected(self):
        with pytest.raises(CoplanarPoints):
            sphere_through(F3, (0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0))
        assert issubclass(CoplanarPoints, DegenerateInput)

    def test_circle_example(self):
        c = circle_through(F5, (1, 0), (4, 0), (0, 1))
        assert c.center == (0, 0) and c.r == 1 and c.contains(F5, (0, 4))

    def test_collinear_rejected(self):
        with pytest.raises(CoplanarPoints):
            circle_through(F5, (0, 0), (1, 1), (2, 2))

    def test_repeated_point_rejected(self):
        with pytest.raises(CoplanarPoints):
            circle_through(F7, (1, 2), (1, 2), (3, 3))

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            circle_through(F5, (0, 0, 0), (1, 0, 0), (0, 1, 0))

    @settings(max_examples=40)
    @given(st.sampled_from([5, 7]), st.lists(st.tuples(*[st.integers(0, 6)] * 3), min_size=4,
                                             max_size=4))
    def test_solution_contains_inputs(self, q, pts):
        ctx = make_field(q)
        pts = [tuple(x % q for x in p) for p in pts]
        try:
            s = sphere_through(ctx, *pts)
        except CoplanarPoints:
            return
        assert all(s.contains(ctx, p) for p in pts)

    def test_extension_field(self):
        F9 = make_field(3, 2)
        pts = [(0, 0, 0), (1, 0, 0), (0, 3, 0), (0, 0, 4)]
        s = sphere_through(F9, *pts)
        assert all(s.contains(F9, p) for p in pts)

    @pytest.mark.parametrize("q,n", [(3, 3), (5, 3), (5, 2)])
    def test_trials(self, q, n):
        r = sphere_solver_trials(make_field(q), n, 100, seed=1)
        assert r.satisfied and r.details["degenerate_not_rejected"] == 0


class TestCounts:
    def test_full_plane_against_brute_force(self):
        P = all_points(5, 2)
        found = {(s.center, s.r) for s in determined_objects(F5, P, 2)}
        assert found == set(brute_circles(5, P.tolist()))
        assert count_objects_and_radii(F5, P, 2) == (125, 5)

    @pytest.mark.parametrize("seed", range(6))
    def test_random_sets_against_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        q = (5, 7)[seed % 2]
        P = all_points(q, 2)[rng.choice(q * q, rng.integers(3, 2 * q), replace=False)]
        expected = brute_circles(q, P.tolist())
        ctx = make_field(q)
        assert distinct_circles(ctx, P) == len(expected)
        assert distinct_radii(ctx, P, 2) == len({r for _, r in expected})

    def test_spheres_against_brute_force(self):
        rng = np.random.default_rng(4)
        P = all_points(3, 3)[rng.choice(27, 9, replace=False)]
        assert distinct_spheres(F3, P) == len(brute_circles(3, P.tolist(), n=3))

    def test_collinear_set_has_no_circles(self):
        P = [(i, 2 * i % 7) for i in range(7)]
        assert distinct_circles(F7, P) == distinct_circles(F7, P, nondegenerate=False) == 0
        # y = 2x is isotropic in F_5, so every radius-zero circle centred on it holds the line
        P = [(i, 2 * i % 5) for i in range(5)]
        assert distinct_circles(F5, P) == 0
        assert distinct_circles(F5, P, nondegenerate=False) == 5

    def test_planar_set_has_no_spheres(self):
        P = [(x, y, 0) for x in range(5) for y in range(5)]
        assert distinct_spheres(F5, P) == 0

    def test_empty_and_duplicates(self):
        assert distinct_circles(F5, np.zeros((0, 2), dtype=np.int64)) == 0
        P = [(1, 0), (4, 0), (0, 1)]
        assert distinct_circles(F5, P + P) == distinct_circles(F5, P) == 1

    def test_monotone_and_bounded(self):
        rng = np.random.default_rng(2)
        order = rng.permutation(49)
        pts = all_points(7, 2)
        prev = 0
        for m in (5, 10, 20, 35, 49):
            n_obj, n_rad = count_objects_and_radii(F7, pts[order[:m]], 2)
            assert n_rad <= min(n_obj, 7) and n_obj <= 7**3 and n_obj >= prev
            prev = n_obj

    def test_min_points(self):
        P = all_points(5, 2)
        # circles of nonzero radius in F_5^2 have q - 1 = 4 points when -1 is a square
        assert distinct_circles(F5, P, min_points=5) == 25
        assert distinct_circles(F5, P, min_points=10) == 0

    def test_threads_do_not_change_result(self):
        P = all_points(7, 2)[::3]
        assert determined_objects(F7, P, 2, threads=4) == determined_objects(F7, P, 2)

    def test_radii_dimension(self):
        with pytest.raises(ValueError):
            distinct_radii(F5, [(0,)], 1)


class TestReports:
    def test_premise_flags(self):
        small = beck_reports(F5, all_points(5, 2)[:10], 2)
        assert [r.claim_name for r in small] == ["distinct_circles", "circle_radii"]
        assert all(r.premise_satisfied is False and r.satisfied for r in small)
        full = beck_reports(F5, all_points(5, 2), 2)
        assert all(r.premise_satisfied for r in full)
        assert full[0].lhs == "125" and float(full[0].rhs) == pytest.approx(500 / 9)
        assert full[1].lhs == "5" and all(r.satisfied for r in full)

    def test_f9_sphere_counts(self):
        F9 = make_field(3, 2)
        rng = np.random.default_rng(0)
        P = all_points(9, 3)[np.sort(rng.choice(729, 648, replace=False))]
        obj, rad = beck_reports(F9, P, 3)
        assert (obj.claim_name, obj.lhs, rad.lhs) == ("distinct_spheres", "6561", "9")
        assert obj.premise_satisfied and obj.satisfied and rad.satisfied

    def test_unknown_dimension(self):
        with pytest.raises(ValueError):
            beck_reports(F5, [(0, 0, 0, 0)], 4)
