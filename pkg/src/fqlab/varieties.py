"""Structured variety families V_a (graphs over F_q^d in F_q^{d+k}) and W_a (zero sets in F_q^d).

For coefficient vectors a_i in F_q^{d+1} the defining functions are

    f_i(x, a_i) = h_i(x) + sum_j a_ij * x_j**b_ij + a_i(d+1)

with every h_i held as a full evaluation table over F_q^d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from fqlab.errors import BudgetExceeded
from fqlab.ffield import FieldCtx
from fqlab.report import ClaimReport, real_str, timed
from fqlab.space import all_points, index_to_point, point_index

DISTINCT_THRESHOLD = 10**4


@dataclass(frozen=True, eq=False)
class VarietyFamily:
    ctx: FieldCtx
    d: int
    k: int
    h: tuple[np.ndarray, ...]
    b: tuple[tuple[int, ...], ...]
    check_exponents: bool = True  # False admits exponents not coprime to q-1 (evaluation only)

    def __post_init__(self):
        q = self.ctx.q
        if self.d < 1 or self.k < 1:
            raise ValueError("d and k must be >= 1")
        if len(self.h) != self.k or len(self.b) != self.k:
            raise ValueError("need exactly k shift tables and k exponent vectors")
        tables = []
        for t in self.h:
            t = np.asarray(t, dtype=np.int64)
            if t.shape != (q**self.d,):
                raise ValueError(f"shift table must have q^d = {q**self.d} entries")
            if t.min(initial=0) < 0 or t.max(initial=0) >= q:
                raise ValueError("shift table entries must be canonical field elements")
            t = t.copy()
            t.setflags(write=False)
            tables.append(t)
        object.__setattr__(self, "h", tuple(tables))
        b = tuple(tuple(int(x) for x in row) for row in self.b)
        for row in b:
            if len(row) != self.d:
                raise ValueError("each exponent vector needs d entries")
            for bij in row:
                if bij < 1 or (self.check_exponents and math.gcd(bij, q - 1) != 1):
                    raise ValueError(f"exponent {bij} must be positive and coprime to q-1 = {q - 1}")
        object.__setattr__(self, "b", b)

    @classmethod
    def flats(cls, ctx: FieldCtx, d: int, k: int) -> VarietyFamily:
        zero = np.zeros(ctx.q**d, dtype=np.int64)
        return cls(ctx, d, k, (zero,) * k, ((1,) * d,) * k)

    @classmethod
    def spheres(cls, ctx: FieldCtx, d: int) -> VarietyFamily:
        """h = x_1^2 + ... + x_d^2, b = (1, ..., 1), k = 1."""
        return cls(ctx, d, 1, (sum_of_squares_table(ctx, d),), ((1,) * d,))

    @property
    def n_params(self) -> int:
        return self.ctx.q ** ((self.d + 1) * self.k)

    @property
    def n_points(self) -> int:
        return self.ctx.q ** (self.d + self.k)

    def f_table(self, i: int) -> np.ndarray:
        """Values f_i(x, a) for every base point x (rows) and every a in F_q^{d+1} (columns)."""
        ctx, d = self.ctx, self.d
        q = ctx.q
        X = all_points(q, d)
        A = all_points(q, d + 1)
        out = np.broadcast_to(A[None, :, d], (q**d, q ** (d + 1)))
        out = ctx.add(out, self.h[i][:, None])
        for j in range(d):
            xb = ctx.pow(X[:, j], self.b[i][j])
            out = ctx.add(out, ctx.mul(A[None, :, j], xb[:, None]))
        return np.asarray(out, dtype=np.int64)

    def variety_point_indices(self) -> np.ndarray:
        """Array (n_params, q^d): canonical indices of the q^d points of each V-variety.

        Row t lists the points (x, f_1(x, a_1), ..., f_k(x, a_k)) for x in
        canonical order, where a = ParamTuple.from_index(t).
        """
        q, d, k = self.ctx.q, self.d, self.k
        nd = q ** (d + 1)
        t = np.arange(self.n_params, dtype=np.int64)
        # digit i of t in base q^{d+1} is the index of a_i (a_1 most significant)
        a_idx = [(t // nd ** (k - 1 - i)) % nd for i in range(k)]
        base = np.arange(q**d, dtype=np.int64)
        out = np.broadcast_to(base[None, :] * q**k, (self.n_params, q**d)).copy()
        for i in range(k):
            f = self.f_table(i)
            out += f[:, a_idx[i]].T * q ** (k - 1 - i)
        return out


@dataclass(frozen=True)
class ParamTuple:
    a: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(tuple(int(x) for x in v) for v in self.a))

    def check(self, family: VarietyFamily) -> None:
        if len(self.a) != family.k or any(len(v) != family.d + 1 for v in self.a):
            raise ValueError(f"need {family.k} coefficient vectors of length {family.d + 1}")

    def flat(self) -> tuple[int, ...]:
        return tuple(x for v in self.a for x in v)

    def index(self, q: int) -> int:
        return int(point_index(self.flat(), q))

    @classmethod
    def from_index(cls, idx: int, family: VarietyFamily) -> ParamTuple:
        d, k = family.d, family.k
        flat = index_to_point(idx, family.ctx.q, (d + 1) * k).tolist()
        return cls(tuple(tuple(flat[i * (d + 1):(i + 1) * (d + 1)]) for i in range(k)))


def sum_of_squares_table(ctx: FieldCtx, d: int) -> np.ndarray:
    return np.asarray(ctx.sum(ctx.square(all_points(ctx.q, d)), axis=-1), dtype=np.int64)


def _check_point(x, n: int) -> tuple[int, ...]:
    x = tuple(int(v) for v in x)
    if len(x) != n:
        raise ValueError(f"point has dimension {len(x)}, expected {n}")
    return x


def eval_f(family: VarietyFamily, i: int, x: Sequence[int], a_i: Sequence[int]) -> int:
    """f_i(x, a_i) with i 1-based as in the family definition."""
    ctx, d = family.ctx, family.d
    if not 1 <= i <= family.k:
        raise ValueError(f"index i={i} out of range 1..{family.k}")
    x = _check_point(x, d)
    a_i = _check_point(a_i, d + 1)
    val = int(family.h[i - 1][point_index(x, ctx.q)])
    for j in range(d):
        val = ctx.add(val, ctx.mul(a_i[j], ctx.pow(x[j], family.b[i - 1][j])))
    return ctx.add(val, a_i[d])


def membership_V(family: VarietyFamily, params: ParamTuple, p: Sequence[int]) -> bool:
    params.check(family)
    d = family.d
    p = _check_point(p, d + family.k)
    return all(p[d + i] == eval_f(family, i + 1, p[:d], params.a[i]) for i in range(family.k))


def membership_W(family: VarietyFamily, params: ParamTuple, x: Sequence[int]) -> bool:
    params.check(family)
    x = _check_point(x, family.d)
    return all(eval_f(family, i + 1, x, params.a[i]) == 0 for i in range(family.k))


def sphere_as_W(ctx: FieldCtx, center: Sequence[int], r: int) -> tuple[VarietyFamily, ParamTuple]:
    """Sphere ||x - center|| = r as the W-variety with a = (-2c, sum c_i^2 - r)."""
    center = tuple(int(c) for c in center)
    d = len(center)
    lin = [ctx.mul(ctx.from_int(-2), c) for c in center]
    const = ctx.sub(ctx.sum(ctx.square(np.array(center)), axis=-1), r)
    return VarietyFamily.spheres(ctx, d), ParamTuple((tuple(lin) + (const,),))


def flat_as_V(ctx: FieldCtx, d: int, k: int,
              coeffs: Sequence[Sequence[int]]) -> tuple[VarietyFamily, ParamTuple]:
    """The k-flat x_{d+i} = a_i1 x_1 + ... + a_id x_d + a_i(d+1)."""
    family = VarietyFamily.flats(ctx, d, k)
    params = ParamTuple(tuple(tuple(v) for v in coeffs))
    params.check(family)
    return family, params


def poly_table(ctx: FieldCtx, d: int, terms: Mapping[tuple[int, ...], int]) -> np.ndarray:
    """Evaluation table over F_q^d of sum coef * x^exps."""
    X = all_points(ctx.q, d)
    out = np.zeros(len(X), dtype=np.int64)
    for exps, coef in terms.items():
        mono = np.ones(len(X), dtype=np.int64)
        for j, e in enumerate(exps):
            if e:
                mono = ctx.mul(mono, ctx.pow(X[:, j], e))
        out = ctx.add(out, ctx.mul(coef, mono))
    return np.asarray(out, dtype=np.int64)


def random_polynomial(ctx: FieldCtx, d: int, degree: int,
                      rng: np.random.Generator) -> dict[tuple[int, ...], int]:
    """Random reduced polynomial of total degree exactly ``degree``.

    Individual exponents stay below q, so a nonzero coefficient list is a
    nonzero function on F_q^d. Requires degree <= d*(q-1).
    """
    q = ctx.q
    monos = [m for m in product(range(min(q - 1, degree) + 1), repeat=d) if sum(m) <= degree]
    top = [m for m in monos if sum(m) == degree]
    if not top:
        raise ValueError(f"no reduced monomial of degree {degree} in {d} variables over F_{q}")
    terms = {m: int(c) for m, c in zip(monos, rng.integers(0, q, len(monos))) if c}
    lead = top[int(rng.integers(len(top)))]
    terms[lead] = int(rng.integers(1, q))
    return terms


def schwartz_zippel_count(ctx: FieldCtx, d: int, table, degree: int) -> int:
    """Exhaustive zero count of a nonzero polynomial given by its evaluation table."""
    table = np.asarray(table, dtype=np.int64)
    if table.shape != (ctx.q**d,):
        raise ValueError(f"table must have q^d = {ctx.q**d} entries")
    if degree < 1:
        raise ValueError("declared degree must be >= 1")
    if not table.any():
        raise ValueError("polynomial is identically zero")
    return int(np.count_nonzero(table == 0))


def distinct_varieties_check(family: VarietyFamily, threshold: int = DISTINCT_THRESHOLD) -> bool:
    """True iff all q^{(d+1)k} parameter tuples give pairwise distinct q^d-point sets."""
    if family.n_params > threshold:
        raise BudgetExceeded(f"{family.n_params} tuples exceed the exhaustive threshold {threshold}")
    pts = family.variety_point_indices()
    q_d = family.ctx.q ** family.d
    sets = set()
    for row in pts:
        s = frozenset(row.tolist())
        if len(s) != q_d:
            return False
        sets.add(s)
    return len(sets) == family.n_params


def load_family(ctx: FieldCtx, spec: Mapping) -> VarietyFamily:
    """Build a family from its JSON description {d, k, h: [table | name], b: [[...]]}.

    Named tables: "sum_of_squares", "zero".
    """
    d, k = int(spec["d"]), int(spec["k"])
    tables = []
    for h in spec["h"]:
        if h == "sum_of_squares":
            tables.append(sum_of_squares_table(ctx, d))
        elif h == "zero":
            tables.append(np.zeros(ctx.q**d, dtype=np.int64))
        elif isinstance(h, str):
            raise ValueError(f"unknown named table {h!r}")
        else:
            tables.append(np.asarray(h, dtype=np.int64))
    return VarietyFamily(ctx, d, k, tuple(tables), tuple(tuple(r) for r in spec["b"]))


def schwartz_zippel_trials(ctx: FieldCtx, d: int, samples: int, seed: int,
                           max_degree: int = 4) -> ClaimReport:
    """Seeded nonzero polynomials of degree k <= max_degree: zeros <= k q^{d-1}."""
    q = ctx.q
    top = min(max_degree, d * (q - 1))
    with timed() as ms:
        rng = np.random.default_rng(seed)
        violations = 0
        worst = 0.0
        for _ in range(samples):
            k = int(rng.integers(1, top + 1))
            table = poly_table(ctx, d, random_polynomial(ctx, d, k, rng))
            z = schwartz_zippel_count(ctx, d, table, k)
            bound = k * q ** (d - 1)
            violations += z > bound
            worst = max(worst, z / bound)
    return ClaimReport(
        claim_name="schwartz_zippel",
        params={"q": q, "d": d, "samples": samples, "max_degree": top},
        lhs=str(violations), rhs="0", satisfied=violations == 0, seed=seed,
        runtime_ms=ms[0], details={"worst_ratio": real_str(worst)},
    )
