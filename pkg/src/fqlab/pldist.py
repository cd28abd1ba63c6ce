"""Point-line distances in F_q^2 and the point-line distance graph PL(F_q^2).

PL has part A = {(a, b, c, lam) : lam (a^2 + b^2) in SQ}, part B = F_q^2, and
an edge (a, b, c, lam) ~ (x, y) iff (ax + by + c)^2 = lam (a^2 + b^2). The
companion graph IN on the same parts joins (a, b, c, lam) to the points of
the line ax + by + c = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from fqlab.bigraph import (
    BipartiteGraph,
    WalkIdentitySpec,
    check_budget,
    common_neighbor_counts,
    third_eigenvalue_estimate,
    verify_walk_identity,
)
from fqlab.errors import DegenerateInput
from fqlab.ffield import FieldCtx, minus_one_is_square
from fqlab.report import ClaimReport, real_str, timed
from fqlab.space import all_points, as_point_array


@dataclass(frozen=True)
class HyperplaneRep:
    """a_1 x_1 + ... + a_d x_d + a_{d+1} = 0."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(x) for x in self.coeffs)
        if len(coeffs) < 2 or not any(coeffs[:-1]):
            raise ValueError("hyperplane needs a nonzero normal vector")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def d(self) -> int:
        return len(self.coeffs) - 1

    def normal_norm(self, ctx: FieldCtx) -> int:
        return int(ctx.sum(ctx.square(np.array(self.coeffs[:-1])), axis=-1))

    def is_degenerate(self, ctx: FieldCtx) -> bool:
        return self.normal_norm(ctx) == 0

    def normalized(self, ctx: FieldCtx) -> HyperplaneRep:
        lead = next(x for x in self.coeffs if x)
        inv = ctx.inv(lead)
        return type(self).from_coeffs(tuple(int(ctx.mul(inv, x)) for x in self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs):
        return cls(tuple(coeffs))


@dataclass(frozen=True)
class LineRep(HyperplaneRep):
    """ax + by + c = 0."""

    def __init__(self, a: int, b: int, c: int):
        object.__setattr__(self, "coeffs", (int(a), int(b), int(c)))
        self.__post_init__()

    @classmethod
    def from_coeffs(cls, coeffs):
        return cls(*coeffs)

    a = property(lambda self: self.coeffs[0])
    b = property(lambda self: self.coeffs[1])
    c = property(lambda self: self.coeffs[2])

    def __repr__(self) -> str:
        return f"LineRep({self.a}, {self.b}, {self.c})"


def point_hyperplane_distance(ctx: FieldCtx, p: Sequence[int], h: HyperplaneRep) -> int:
    """(a . p + a_{d+1})^2 / (a_1^2 + ... + a_d^2)."""
    if len(p) != h.d:
        raise ValueError("point and hyperplane dimensions differ")
    den = h.normal_norm(ctx)
    if den == 0:
        raise DegenerateInput(f"{h} is degenerate")
    num = ctx.add(int(ctx.sum(ctx.mul(np.array(h.coeffs[:-1]), np.asarray(p)), axis=-1)),
                  h.coeffs[-1])
    return int(ctx.div(ctx.square(num), den))


def point_line_distance(ctx: FieldCtx, p: Sequence[int], l: LineRep) -> int:
    if len(p) != 2:
        raise ValueError("point must lie in F_q^2")
    return point_hyperplane_distance(ctx, p, l)


def distance_table(ctx: FieldCtx, P, H: Sequence[HyperplaneRep]) -> np.ndarray:
    """d(p, h) for every hyperplane (rows) and point (columns)."""
    if not H:
        return np.zeros((0, len(P)), dtype=np.int64)
    d = H[0].d
    P = as_point_array(P, d)
    C = np.array([h.coeffs for h in H], dtype=np.int64)
    den = np.asarray(ctx.sum(ctx.square(C[:, :d]), axis=-1), dtype=np.int64)
    if np.any(den == 0):
        raise DegenerateInput("degenerate hyperplane in input")
    num = np.broadcast_to(C[:, d][:, None], (len(H), len(P)))
    for j in range(d):
        num = ctx.add(num, ctx.mul(C[:, j][:, None], P[:, j][None, :]))
    return np.asarray(ctx.mul(ctx.square(num), ctx.inv(den)[:, None]), dtype=np.int64)


def line_distance_set(ctx: FieldCtx, P, l: LineRep) -> set[int]:
    P = as_point_array(P, 2)
    if l.is_degenerate(ctx):
        raise DegenerateInput(f"{l} is degenerate")
    if len(P) == 0:
        return set()
    return set(distance_table(ctx, P, [l])[0].tolist())


def distance_set_sizes(ctx: FieldCtx, P, H: Sequence[HyperplaneRep]) -> np.ndarray:
    T = distance_table(ctx, P, H)
    seen = np.zeros((len(H), ctx.q), dtype=bool)
    rows = np.broadcast_to(np.arange(len(H))[:, None], T.shape)
    seen[rows, T] = True
    return seen.sum(axis=1)


def all_hyperplanes(ctx: FieldCtx, d: int, nondegenerate: bool = True) -> list[HyperplaneRep]:
    """Every hyperplane of F_q^d once, normalized (first nonzero coefficient 1), canonical order."""
    q = ctx.q
    out = []
    for lead in range(d):
        for rest in all_points(q, d - lead).tolist():
            coeffs = (0,) * lead + (1,) + tuple(rest)
            h = LineRep(*coeffs) if d == 2 else HyperplaneRep(coeffs)
            if nondegenerate and h.is_degenerate(ctx):
                continue
            out.append(h)
    return out


def all_lines(ctx: FieldCtx, nondegenerate: bool = True) -> list[LineRep]:
    return all_hyperplanes(ctx, 2, nondegenerate)


# -- the PL graph ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PLGraph:
    ctx: FieldCtx
    quads: np.ndarray  # (|A|, 4) rows (a, b, c, lam) in canonical order
    graph: BipartiteGraph

    @property
    def s_size(self) -> int:
        return len(self.quads) // self.ctx.q


def dist_quadruples(ctx: FieldCtx) -> np.ndarray:
    Q4 = all_points(ctx.q, 4)
    n = ctx.add(ctx.square(Q4[:, 0]), ctx.square(Q4[:, 1]))
    keep = ctx.is_square(ctx.mul(Q4[:, 3], n))
    return Q4[np.asarray(keep, dtype=bool)]


def _line_values(ctx: FieldCtx, quads: np.ndarray) -> np.ndarray:
    """ax + by + c for every quadruple (rows) and point (columns)."""
    pts = all_points(ctx.q, 2)
    v = ctx.mul(quads[:, 0][:, None], pts[:, 0][None, :])
    v = ctx.add(v, ctx.mul(quads[:, 1][:, None], pts[:, 1][None, :]))
    return np.asarray(ctx.add(v, quads[:, 2][:, None]), dtype=np.int64)


def build_pl_graph(ctx: FieldCtx, budget: int | None = None) -> PLGraph:
    quads = dist_quadruples(ctx)
    check_budget(len(quads), ctx.q**2, budget)
    L = _line_values(ctx, quads)
    rhs = ctx.mul(quads[:, 3], ctx.add(ctx.square(quads[:, 0]), ctx.square(quads[:, 1])))
    N = (np.asarray(ctx.square(L)) == np.asarray(rhs)[:, None]).astype(np.uint8)
    g = BipartiteGraph(N)
    pl = PLGraph(ctx, quads, g)
    g.audit(degA=2 * ctx.q, degB=2 * pl.s_size)
    return pl


def build_in_graph(ctx: FieldCtx, pl: PLGraph | None = None, budget: int | None = None) -> BipartiteGraph:
    quads = pl.quads if pl is not None else dist_quadruples(ctx)
    check_budget(len(quads), ctx.q**2, budget)
    N = (_line_values(ctx, quads) == 0).astype(np.uint8)
    g = BipartiteGraph(N)
    g.audit(degA=ctx.q, degB=len(quads) // ctx.q)
    return g


def s_set_size(ctx: FieldCtx) -> dict:
    """Exhaustive |S| for S = {(a, b, lam) : lam (a^2 + b^2) in SQ} with the closed-form cross-check."""
    q = ctx.q
    T = all_points(q, 3)
    n = ctx.add(ctx.square(T[:, 0]), ctx.square(T[:, 1]))
    count = int(np.count_nonzero(ctx.is_square(ctx.mul(T[:, 2], n))))
    if minus_one_is_square(ctx):
        formula = (q - 1) * (q * q - 2 * q + 1) // 2
    else:
        formula = (q - 1) ** 2 * (q + 1) // 2
    return {"count": count, "formula": formula, "minus_one_square": minus_one_is_square(ctx),
            "matches": count == formula and count <= q**3}


def _scale_factor(ctx: FieldCtx, u: Sequence[int], v: Sequence[int]) -> int | None:
    """k != 0 with v = k u, or None."""
    j = next(i for i, x in enumerate(u) if x)
    k = ctx.div(v[j], u[j])
    if k == 0:
        return None
    return k if all(ctx.mul(k, x) == y for x, y in zip(u, v)) else None


def common_neighbors_case(ctx: FieldCtx, v1: Sequence[int], v2: Sequence[int]) -> tuple[int, str]:
    """Common-neighbor count of two A-vertices as predicted by the four-case table.

    (d,e) = k(a,b), f != kc -> q; (d,e,f) = k(a,b,c), lam != beta -> 0;
    (d,e,f) = k(a,b,c), lam == beta -> 2q; otherwise 4.
    """
    v1, v2 = tuple(map(int, v1)), tuple(map(int, v2))
    if v1 == v2:
        raise ValueError("vertices must be distinct")
    a, b, c, lam = v1
    d, e, f, beta = v2
    k = _scale_factor(ctx, (a, b), (d, e))
    if k is None:
        return 4, "independent"
    if f != ctx.mul(k, c):
        return ctx.q, "parallel"
    return (2 * ctx.q, "same_line_same_lambda") if lam == beta else (0, "same_line_other_lambda")


def common_neighbors_refined(ctx: FieldCtx, v1: Sequence[int], v2: Sequence[int]) -> tuple[int, str]:
    """As common_neighbors_case, but intersecting the two parallel line pairs.

    For parallel vertices both neighborhoods are unions of two lines
    a x + b y = u with u in U1 = {u : (u + c)^2 = lam n} and
    U2 = {u : (k u + f)^2 = beta k^2 n}; the count is q |U1 n U2|.
    """
    pred, label = common_neighbors_case(ctx, v1, v2)
    if label not in ("parallel", "same_line_other_lambda"):
        return pred, label
    a, b, c, lam = map(int, v1)
    d, e, f, beta = map(int, v2)
    k = _scale_factor(ctx, (a, b), (d, e))
    n = ctx.add(ctx.square(a), ctx.square(b))
    u = ctx.elements()
    U1 = ctx.square(ctx.add(u, c)) == ctx.mul(lam, n)
    U2 = ctx.square(ctx.add(ctx.mul(k, u), f)) == ctx.mul(beta, ctx.mul(ctx.square(k), n))
    common = int(np.count_nonzero(U1 & U2))
    return ctx.q * common, label if common else label + "_disjoint"


def codegree_table_comparison(pl: PLGraph, pairs: str | int = "all", seed: int = 0,
                         refined: bool = False) -> ClaimReport:
    """Compare the case table against exhaustive codegrees on all or ``pairs`` seeded A-pairs."""
    with timed() as ms:
        ctx = pl.ctx
        C = common_neighbor_counts(pl.graph)
        nA = len(pl.quads)
        if pairs == "all":
            idx: Iterable[tuple[int, int]] = combinations(range(nA), 2)
            used_seed = None
        else:
            rng = np.random.default_rng(seed)
            ii = rng.integers(0, nA, size=int(pairs))
            jj = rng.integers(0, nA - 1, size=int(pairs))
            jj = jj + (jj >= ii)
            idx = zip(ii.tolist(), jj.tolist())
            used_seed = seed
        classify = common_neighbors_refined if refined else common_neighbors_case
        quads = pl.quads.tolist()
        checked = 0
        mismatches: dict[str, int] = {}
        for i, j in idx:
            pred, label = classify(ctx, quads[i], quads[j])
            checked += 1
            if pred != int(C[i, j]):
                key = f"{label}:observed={int(C[i, j])}"
                mismatches[key] = mismatches.get(key, 0) + 1
        n_bad = sum(mismatches.values())
    return ClaimReport(
        claim_name="pl_common_neighbors_refined" if refined else "pl_common_neighbors",
        params={"q": ctx.q, "pairs": pairs},
        lhs=str(n_bad),
        rhs="0",
        satisfied=n_bad == 0,
        seed=used_seed,
        runtime_ms=ms[0],
        details={"checked": checked, "mismatches": mismatches},
    )


def pl_identity_coefficients(q: int, s: int) -> dict:
    """Coefficients (K, M, A_IN) of the length-three-walk identity as stated for PL."""
    return {"beta": 4 * (2 * s - (q - 1) ** 2) + q * ((q - 1) ** 2 - (q - 1)),
            "alpha": 2 * q * (q - 1),
            "gamma": q * (q - 1)}


def pl_identity_coefficients_refined(q: int, s: int) -> dict:
    """Coefficients of the identity that follows from the refined codegree count.

    Walks through parallel neighbors v' of z contribute q(q-1) per element of
    U1 n {u_z, w}; summing over w gives q^2(q-1) if z ~ v and 2q(q-1) otherwise.
    """
    return {"beta": 4 * (2 * s - (q - 1) ** 2) + 2 * q * (q - 1),
            "alpha": q * (q - 1) * (q - 2),
            "gamma": 0}


def verify_pl_identity(ctx: FieldCtx, pl: PLGraph | None = None,
                       in_graph: BipartiteGraph | None = None, refined: bool = False) -> ClaimReport:
    pl = pl if pl is not None else build_pl_graph(ctx)
    q, s = ctx.q, pl.s_size
    coef = (pl_identity_coefficients_refined if refined else pl_identity_coefficients)(q, s)
    aux = None
    if coef["gamma"]:
        aux = in_graph if in_graph is not None else build_in_graph(ctx, pl)
    spec = WalkIdentitySpec(coef["alpha"], coef["beta"], coef["gamma"], aux)
    r = verify_walk_identity(pl.graph, spec, mode="full")
    r.claim_name = "pl_walk_identity_refined" if refined else "pl_walk_identity"
    r.params = {"q": q, "S": s, **r.params}
    return r


def pl_lambda3_check(ctx: FieldCtx, tol: float = 1e-6, pl: PLGraph | None = None) -> ClaimReport:
    with timed() as ms:
        pl = pl if pl is not None else build_pl_graph(ctx)
        est = third_eigenvalue_estimate(pl.graph, tol=tol)
        bound = 2 * ctx.q ** (4 / 3)
    return ClaimReport(
        claim_name="pl_lambda3",
        params={"q": ctx.q, "tol": tol},
        lhs=real_str(est),
        rhs=real_str(bound * (1 + tol)),
        satisfied=est <= bound * (1 + tol),
        runtime_ms=ms[0],
        details={"bound": real_str(bound)},
    )


# -- distance-set theorems --------------------------------------------------------

def distance_premise_constants(c: float) -> dict:
    t = 1 - c * c
    return {"statement": 4 * t / (0.5 - t) ** 2, "proof": 4 * t / (0.5 - 2 * t) ** 2}


def hyperplane_distance_theorem_check(ctx: FieldCtx, P, H: Sequence[HyperplaneRep],
                                      c: float) -> ClaimReport:
    """Premise |P||H| >= C q^{4d/3}  =>  |{h : |Delta(P,h)| > (1-c)q}| >= (1-c)|H|.

    Both the statement constant 4(1-c^2)/(1/2-(1-c^2))^2 and the larger
    proof constant 4(1-c^2)/(1/2-2(1-c^2))^2 are reported; the claim is gated
    on the proof constant.
    """
    if not 0 < c < 1 or not 1 - c * c < 0.25:
        raise ValueError("need 0 < c < 1 with 1 - c^2 < 1/4")
    H = list(dict.fromkeys(h.normalized(ctx) for h in H))
    if not H:
        raise ValueError("hyperplane set is empty")
    d = H[0].d
    if d < 2 or any(h.d != d for h in H):
        raise ValueError("hyperplanes must share a dimension d >= 2")
    if any(h.is_degenerate(ctx) for h in H):
        raise DegenerateInput("degenerate hyperplane in input")
    with timed() as ms:
        P = np.unique(as_point_array(P, d), axis=0)
        q = ctx.q
        consts = distance_premise_constants(c)
        scale = q ** (4 * d / 3)
        product = len(P) * len(H)
        premise_stmt = product >= consts["statement"] * scale
        premise_proof = product >= consts["proof"] * scale
        sizes = distance_set_sizes(ctx, P, H) if len(P) else np.zeros(len(H), dtype=np.int64)
        good = int(np.count_nonzero(sizes > (1 - c) * q))
        conclusion = good >= (1 - c) * len(H)
    return ClaimReport(
        claim_name="line_distances" if d == 2 else "hyperplane_distances",
        params={"q": q, "d": d, "c": c, "P": int(len(P)), "H": len(H)},
        lhs=str(good),
        rhs=real_str((1 - c) * len(H)),
        satisfied=(not premise_proof) or conclusion,
        premise_satisfied=premise_proof,
        runtime_ms=ms[0],
        details={"premise_statement": premise_stmt,
                 "threshold_statement": real_str(consts["statement"] * scale),
                 "threshold_proof": real_str(consts["proof"] * scale),
                 "conclusion": conclusion,
                 "min_distance_set": int(sizes.min()) if len(sizes) else 0},
    )


def pl_distance_theorem_check(ctx: FieldCtx, P, L: Sequence[LineRep], c: float) -> ClaimReport:
    if any(l.d != 2 for l in L):
        raise ValueError("expected lines in F_q^2")
    return hyperplane_distance_theorem_check(ctx, P, L, c)


def spanned_lines(ctx: FieldCtx, P) -> set[LineRep]:
    """Distinct lines through at least two points of P, normalized."""
    P = np.unique(as_point_array(P, 2), axis=0)
    if len(P) < 2:
        raise ValueError("need at least two distinct points")
    out = set()
    for (x1, y1), (x2, y2) in combinations(P.tolist(), 2):
        a = ctx.sub(y2, y1)
        b = ctx.sub(x1, x2)
        c = ctx.neg(ctx.add(ctx.mul(a, x1), ctx.mul(b, y1)))
        out.add(LineRep(a, b, c).normalized(ctx))
    return out


def spanned_lines_report(ctx: FieldCtx, P) -> ClaimReport:
    """|P| >= 3q  =>  at least q^2/3 spanned lines; and at most 2q spanned lines are degenerate."""
    with timed() as ms:
        P = np.unique(as_point_array(P, 2), axis=0)
        q = ctx.q
        lines = spanned_lines(ctx, P)
        n_deg = sum(l.is_degenerate(ctx) for l in lines)
        premise = len(P) >= 3 * q
        count_ok = len(lines) >= q * q / 3
        deg_ok = n_deg <= 2 * q
    return ClaimReport(
        claim_name="spanned_lines",
        params={"q": q, "P": int(len(P))},
        lhs=str(len(lines)),
        rhs=real_str(q * q / 3),
        satisfied=((not premise) or count_ok) and deg_ok,
        premise_satisfied=premise,
        runtime_ms=ms[0],
        details={"degenerate": int(n_deg), "degenerate_limit": 2 * q,
                 "nondegenerate": len(lines) - int(n_deg), "count_satisfied": count_ok,
                 "degenerate_satisfied": deg_ok},
    )

