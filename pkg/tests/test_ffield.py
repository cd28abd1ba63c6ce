import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fqlab import FieldElem, make_field, minus_one_is_square, nonzero_squares
from fqlab.ffield import FieldCtx, is_irreducible, is_prime, smallest_irreducible
from oracles import RefField

ORDERS = [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (5, 2), (7, 2), (3, 3), (11, 2),
          (5, 3), (7, 3)]
SMALL = [(p, e) for p, e in ORDERS if p**e <= 49]


@pytest.fixture(scope="module", params=ORDERS, ids=lambda pe: f"F{pe[0]**pe[1]}")
def ctx(request):
    return make_field(*request.param)


def field_and_elems(n):
    """Strategy: a small field context plus n canonical elements of it."""
    return st.sampled_from(SMALL).flatmap(
        lambda pe: st.tuples(st.just(make_field(*pe)),
                             *[st.integers(0, pe[0] ** pe[1] - 1) for _ in range(n)]))


class TestConstruction:
    def test_prime_field(self):
        F = make_field(5, 1)
        assert F.q == 5 and F.modulus == ()
        assert F.elements().tolist() == [0, 1, 2, 3, 4]

    def test_f9_modulus_is_t2_plus_1(self):
        assert make_field(3, 2).modulus == (1, 0, 1)

    @pytest.mark.parametrize("p,e", [(2, 3), (2, 1), (9, 1), (1, 1), (3, 0), (3, 11)])
    def test_rejects(self, p, e):
        with pytest.raises(ValueError):
            make_field(p, e)

    def test_max_order_is_configurable(self):
        with pytest.raises(ValueError):
            make_field(3, 3, max_order=26)
        assert make_field(3, 3, max_order=27).q == 27

    @pytest.mark.parametrize("p,e", [(3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (3, 4)])
    def test_modulus_smallest_irreducible(self, p, e):
        # no root for e <= 3; and every lexicographically smaller monic candidate is reducible
        mod = smallest_irreducible(p, e)
        assert len(mod) == e + 1 and mod[-1] == 1
        if e <= 3:
            assert all(sum(c * x**i for i, c in enumerate(mod)) % p for x in range(p))
        smaller = [tuple(c) + (1,) for c in product(range(p), repeat=e) if tuple(c) < mod[:-1]]
        assert not any(is_irreducible(c, p) for c in smaller)

    def test_is_prime(self):
        assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_table_threshold(self):
        assert make_field(3, 2).has_tables
        assert not make_field(7, 1).has_tables
        assert not make_field(3, 8).has_tables  # 6561 > 4096


class TestExamples:
    def test_f5_add(self):
        F = make_field(5)
        assert F.add(3, 4) == 2

    def test_f7_mul(self):
        assert make_field(7).mul(3, 5) == 1

    def test_f9_t_squared(self):
        F = make_field(3, 2)
        t = 3  # digits (0, 1)
        assert F.mul(t, t) == 2

    @pytest.mark.parametrize("q,expected", [(5, {1, 4}), (7, {1, 2, 4}), (3, {1})])
    def test_nonzero_squares(self, q, expected):
        assert nonzero_squares(make_field(q)) == expected

    @pytest.mark.parametrize("p,e,expected", [(5, 1, True), (7, 1, False), (3, 2, True),
                                              (3, 1, False), (13, 1, True), (7, 2, True)])
    def test_minus_one_square(self, p, e, expected):
        assert minus_one_is_square(make_field(p, e)) is expected


class TestAgainstReference:
    def test_tables_match_reference(self, ctx):
        if ctx.q > 125:
            pytest.skip("reference sweep limited to q <= 125")
        ref = RefField(ctx.p, ctx.e, ctx.modulus)
        a, b = np.meshgrid(ctx.elements(), ctx.elements(), indexing="ij")
        add = np.array([[ref.add(x, y) for y in range(ctx.q)] for x in range(ctx.q)])
        mul = np.array([[ref.mul(x, y) for y in range(ctx.q)] for x in range(ctx.q)])
        assert np.array_equal(ctx.add(a, b), add)
        assert np.array_equal(ctx.mul(a, b), mul)
        assert ctx.neg(ctx.elements()).tolist() == [ref.neg(x) for x in range(ctx.q)]

    def test_squares_match_reference(self, ctx):
        ref = RefField(ctx.p, ctx.e, ctx.modulus) if ctx.q <= 125 else None
        sq = nonzero_squares(ctx)
        assert len(sq) == (ctx.q - 1) // 2
        if ref is not None:
            assert sq == ref.squares()

    def test_large_field_without_tables_agrees_with_reference(self):
        F = make_field(3, 9)  # 19683, above the table threshold
        ref = RefField(3, 9, F.modulus)
        rng = np.random.default_rng(1)
        xs = rng.integers(0, F.q, 40)
        ys = rng.integers(0, F.q, 40)
        assert F.mul(xs, ys).tolist() == [ref.mul(int(x), int(y)) for x, y in zip(xs, ys)]


class TestInvariants:
    def test_fermat_exhaustive(self, ctx):
        x = ctx.elements()[1:]
        assert np.all(ctx.pow(x, ctx.q - 1) == 1)
        assert np.array_equal(ctx.pow(ctx.elements(), ctx.q), ctx.elements())

    def test_inverse_exhaustive(self, ctx):
        x = ctx.elements()[1:]
        assert np.all(ctx.mul(x, ctx.inv(x)) == 1)

    def test_power_bijection(self, ctx):
        for r in range(1, 2 * ctx.q):
            image = np.unique(ctx.pow(ctx.elements(), r))
            assert (len(image) == ctx.q) == (math.gcd(r, ctx.q - 1) == 1)

    def test_identity_encoding(self, ctx):
        x = ctx.elements()
        assert np.array_equal(ctx.add(x, 0), x) and np.array_equal(ctx.mul(x, 1), x)

    def test_inverse_of_zero(self, ctx):
        with pytest.raises(ZeroDivisionError):
            ctx.inv(0)

    def test_sum_matches_fold(self, ctx):
        rng = np.random.default_rng(ctx.q)
        A = rng.integers(0, ctx.q, (6, 5))
        folded = A[:, 0]
        for j in range(1, 5):
            folded = ctx.add(folded, A[:, j])
        assert np.array_equal(ctx.sum(A, axis=1), folded)

    @given(field_and_elems(3))
    def test_ring_axioms(self, args):
        F, a, b, c = args
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == 0
        assert F.sub(F.add(a, b), b) == a

    @given(field_and_elems(2), st.integers(0, 60), st.integers(0, 60))
    def test_pow_laws(self, args, m, n):
        F, a, b = args
        assert F.pow(a, m + n) == F.mul(F.pow(a, m), F.pow(a, n))
        assert F.pow(F.mul(a, b), n) == F.mul(F.pow(a, n), F.pow(b, n))

    @given(field_and_elems(2))
    def test_division(self, args):
        F, a, b = args
        if b:
            assert F.mul(F.div(a, b), b) == a

    @given(field_and_elems(1))
    def test_frobenius_is_additive(self, args):
        F, a = args
        for b in range(F.q):
            assert F.pow(F.add(a, b), F.p) == F.add(F.pow(a, F.p), F.pow(b, F.p))

    def test_scalar_in_scalar_out(self):
        F = make_field(3, 2)
        assert isinstance(F.mul(3, 4), int) and isinstance(F.add(1, 1), int)

    def test_pow_zero_zero(self):
        assert make_field(5).pow(0, 0) == 1


class TestFieldElem:
    def test_operators(self):
        F = make_field(7)
        a, b = F.elem(3), F.elem(5)
        assert int(a * b) == 1
        assert int(a + b) == 1 and int(a - b) == 5 and int(-a) == 4
        assert int(a / b) == 2 and int(a**6) == 1 and int(a.inv()) == 5
        assert int(2 * a) == 6 and int(10 - a) == 0

    def test_elem_range(self):
        with pytest.raises(ValueError):
            make_field(5).elem(5)

    def test_mixed_contexts_rejected(self):
        with pytest.raises(ValueError):
            make_field(5).elem(1) + make_field(7).elem(1)

    def test_from_int(self):
        F = make_field(5, 2)
        assert F.from_int(-1) == 4 and F.from_int(7) == 2

    def test_zero_inverse_raises(self):
        with pytest.raises(ZeroDivisionError):
            make_field(5).elem(0).inv()

    def test_elem_is_frozen(self):
        e = FieldElem(make_field(3), 1)
        with pytest.raises(Exception):
            e.value = 2


def test_repr():
    assert "F_9" in repr(make_field(3, 2)) and isinstance(make_field(3), FieldCtx)
