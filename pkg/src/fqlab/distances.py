"""Distances, non-degenerate two-point forms and pinned-value experiments.

A non-degenerate form is F(x, y) = g1(x) + g2(y) + x^b M (y^c)^T with M
invertible and gcd(c_i, q-1) = 1; g1, g2 are evaluation tables over F_q^d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from fqlab import fflinalg
from fqlab.ffield import FieldCtx
from fqlab.report import ClaimReport, real_str, timed
from fqlab.space import all_points, as_point_array, point_index
from fqlab.varieties import sum_of_squares_table


def norm_distance(ctx: FieldCtx, x: Sequence[int], y: Sequence[int]) -> int:
    """||x - y|| = sum (x_i - y_i)^2; a field value, not a metric."""
    if len(x) != len(y):
        raise ValueError("points have different dimensions")
    diff = ctx.sub(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
    return int(ctx.sum(ctx.square(diff), axis=-1))


@dataclass(frozen=True, eq=False)
class NonDegenerateForm:
    ctx: FieldCtx
    d: int
    g1: np.ndarray
    g2: np.ndarray
    b: tuple[int, ...]
    c: tuple[int, ...]
    M: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        q, d = self.ctx.q, self.d
        for name in ("g1", "g2"):
            t = np.asarray(getattr(self, name), dtype=np.int64).copy()
            if t.shape != (q**d,):
                raise ValueError(f"{name} must be an evaluation table with q^d = {q**d} entries")
            t.setflags(write=False)
            object.__setattr__(self, name, t)
        b = tuple(int(x) for x in self.b)
        c = tuple(int(x) for x in self.c)
        M = tuple(tuple(int(x) for x in row) for row in self.M)
        if len(b) != d or len(c) != d or len(M) != d or any(len(r) != d for r in M):
            raise ValueError("b, c and M must match the dimension d")
        if any(x < 1 for x in b + c):
            raise ValueError("exponents must be positive")
        if any(math.gcd(ci, q - 1) != 1 for ci in c):
            raise ValueError("every c_i must be coprime to q-1")
        if not fflinalg.is_invertible(self.ctx, M):
            raise ValueError("M must be invertible over F_q")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "M", M)

    @classmethod
    def distance(cls, ctx: FieldCtx, d: int) -> NonDegenerateForm:
        """||x - y|| expanded as Q(x) + Q(y) - 2 x.y."""
        return QuadraticForm(ctx, d, signs=(1,) * d).as_form()

    def evaluate_many(self, X, Y) -> np.ndarray:
        """Table of F(x, y) with rows over X and columns over Y (coordinate arrays)."""
        ctx, d = self.ctx, self.d
        X = as_point_array(X, d)
        Y = as_point_array(Y, d)
        out = ctx.add(self.g1[point_index(X, ctx.q)][:, None], self.g2[point_index(Y, ctx.q)][None, :])
        out = np.asarray(out, dtype=np.int64)
        xb = np.stack([ctx.pow(X[:, i], self.b[i]) for i in range(d)], axis=1) if len(X) else X
        yc = np.stack([ctx.pow(Y[:, j], self.c[j]) for j in range(d)], axis=1) if len(Y) else Y
        for i in range(d):
            for j in range(d):
                if self.M[i][j]:
                    term = ctx.mul(ctx.mul(self.M[i][j], xb[:, i])[:, None], yc[None, :, j])
                    out = ctx.add(out, term)
        return np.asarray(out, dtype=np.int64)


def eval_form(F: NonDegenerateForm, x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != F.d or len(y) != F.d:
        raise ValueError(f"points must have dimension {F.d}")
    return int(F.evaluate_many([x], [y])[0, 0])


def load_form(ctx: FieldCtx, spec: Mapping) -> NonDegenerateForm:
    """Form from JSON {d, g1, g2, b, c, M}; g1/g2 may be "sum_of_squares" or "zero"."""
    d = int(spec["d"])

    def table(t):
        if t == "sum_of_squares":
            return sum_of_squares_table(ctx, d)
        if t == "zero":
            return np.zeros(ctx.q**d, dtype=np.int64)
        if isinstance(t, str):
            raise ValueError(f"unknown named table {t!r}")
        return np.asarray(t, dtype=np.int64)

    M = spec["M"]
    if M and not isinstance(M[0], (list, tuple)):
        M = [M[i * d:(i + 1) * d] for i in range(d)]
    return NonDegenerateForm(ctx, d, table(spec["g1"]), table(spec["g2"]),
                             tuple(spec["b"]), tuple(spec["c"]), tuple(map(tuple, M)))


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """Diagonal form sum s_i x_i^2 with s_i canonical field elements.

    ``standard(ctx, d, epsilon)`` gives the normal form x1^2 - x2^2 + x3^2 - ...
    closed by -eps x_d^2 (d even) or +eps x_d^2 (d odd).
    """

    ctx: FieldCtx
    d: int
    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(self.ctx.from_int(s)) if s < 0 else int(s) for s in self.signs)
        if len(signs) != self.d or any(s == 0 for s in signs):
            raise ValueError("need d nonzero diagonal coefficients")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def standard(cls, ctx: FieldCtx, d: int, epsilon: int = 1) -> QuadraticForm:
        if epsilon not in (1, ctx.smallest_nonsquare):
            raise ValueError("epsilon must be 1 or the canonical non-square")
        one, minus_one = 1, ctx.neg(1)
        signs = [one if i % 2 == 0 else minus_one for i in range(d)]
        signs[-1] = ctx.neg(epsilon) if d % 2 == 0 else epsilon
        return cls(ctx, d, tuple(signs))

    def evaluate(self, x) -> int:
        x = np.asarray(x, dtype=np.int64)
        return _out_int(self.ctx.sum(self.ctx.mul(np.array(self.signs), self.ctx.square(x)), axis=-1))

    def table(self) -> np.ndarray:
        return np.asarray(self.evaluate(all_points(self.ctx.q, self.d)), dtype=np.int64)

    def as_form(self) -> NonDegenerateForm:
        """Q(x - y) = Q(x) + Q(y) + x (-2 diag(s)) y^T."""
        ctx, d = self.ctx, self.d
        m2 = ctx.from_int(-2)
        M = tuple(tuple(ctx.mul(m2, self.signs[i]) if i == j else 0 for j in range(d))
                  for i in range(d))
        t = self.table()
        return NonDegenerateForm(ctx, d, t, t, (1,) * d, (1,) * d, M)


def _out_int(v):
    return int(v) if np.ndim(v) == 0 else v


def quadratic_form(ctx: FieldCtx, d: int, epsilon: int = 1) -> tuple[QuadraticForm, NonDegenerateForm]:
    Q = QuadraticForm.standard(ctx, d, epsilon)
    return Q, Q.as_form()


def pinned_set(P, y: Sequence[int], F: NonDegenerateForm) -> set[int]:
    P = as_point_array(P, F.d)
    if len(P) == 0:
        return set()
    return set(F.evaluate_many(P, [y])[:, 0].tolist())


def pin_sizes(P, pins, F: NonDegenerateForm) -> np.ndarray:
    """|Delta_F(P, y)| for every y in ``pins``."""
    P = as_point_array(P, F.d)
    pins = as_point_array(pins, F.d)
    if len(P) == 0:
        return np.zeros(len(pins), dtype=np.int64)
    T = F.evaluate_many(P, pins)  # rows: p, cols: y
    q = F.ctx.q
    seen = np.zeros((len(pins), q), dtype=bool)
    seen[np.arange(len(pins))[None, :].repeat(len(P), 0), T] = True
    return seen.sum(axis=1)


def pinned_premise_threshold(q: int, d: int, c: float) -> float:
    return math.sqrt(1 - c * c) / (c * c) * q ** ((d + 1) / 2)


def pinned_theorem_check(P, F: NonDegenerateForm, c: float) -> ClaimReport:
    """|P| >= (sqrt(1-c^2)/c^2) q^{(d+1)/2}  =>  |{y in P : |Delta_F(P,y)| > (1-c)q}| >= (1-c)|P|."""
    if not 0 < c < 1:
        raise ValueError("c must lie in (0, 1)")
    with timed() as ms:
        P = np.unique(as_point_array(P, F.d), axis=0)
        q, d = F.ctx.q, F.d
        threshold = pinned_premise_threshold(q, d, c)
        premise = len(P) >= threshold
        sizes = pin_sizes(P, P, F)
        strict = int(np.count_nonzero(sizes > (1 - c) * q))
        weak = int(np.count_nonzero(sizes >= (1 - c) * q))
        conclusion = strict >= (1 - c) * len(P)
    return ClaimReport(
        claim_name="pinned_values",
        params={"q": q, "d": d, "c": c, "P": int(len(P))},
        lhs=str(strict),
        rhs=real_str((1 - c) * len(P)),
        satisfied=(not premise) or conclusion,
        premise_satisfied=premise,
        runtime_ms=ms[0],
        details={"premise_threshold": real_str(threshold), "pins_strict": strict,
                 "pins_weak": weak, "conclusion": conclusion,
                 "min_pin_size": int(sizes.min()) if len(sizes) else 0},
    )


def two_set_pinned_check(P, Q, F: NonDegenerateForm) -> ClaimReport:
    """|P||Q| >= 2 sqrt(3) q^{d+1}  =>  |{y in P : |Delta_F(Q,y)| >= q/2}| >= |P|/2."""
    with timed() as ms:
        q, d = F.ctx.q, F.d
        P = np.unique(as_point_array(P, d), axis=0)
        Q = np.unique(as_point_array(Q, d), axis=0)
        threshold = 2 * math.sqrt(3) * q ** (d + 1)
        details: dict = {"premise_threshold": real_str(threshold)}
        if d < 2:
            premise = False
            good = 0
            details["excluded"] = "d<2"
        else:
            premise = len(P) * len(Q) >= threshold
            sizes = pin_sizes(Q, P, F)
            good = int(np.count_nonzero(sizes >= q / 2))
        conclusion = good >= len(P) / 2
        details["conclusion"] = conclusion
    return ClaimReport(
        claim_name="two_set_pinned_values",
        params={"q": q, "d": d, "P": int(len(P)), "Q": int(len(Q))},
        lhs=str(good),
        rhs=real_str(len(P) / 2),
        satisfied=(not premise) or conclusion,
        premise_satisfied=premise,
        runtime_ms=ms[0],
        details=details,
    )
