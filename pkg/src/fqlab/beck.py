"""Circles and spheres through points, and Beck-type distinct-object counts.

A circle (n = 2) or sphere (n = 3) is a pair (center, r) with point set
{x : ||x - center|| = r}; r = 0 is allowed. An object is *determined* by P
when it contains at least ``min_points`` points of P (default n + 1) that
are, unless ``nondegenerate=False``, not all on one affine hyperplane.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fqlab import fflinalg
from fqlab.errors import BudgetExceeded, DegenerateInput
from fqlab.ffield import FieldCtx
from fqlab.report import ClaimReport, real_str, timed
from fqlab.space import all_points, as_point_array

CANDIDATE_BUDGET = 10**7


class CoplanarPoints(DegenerateInput):
    """The points lie on a common affine hyperplane (coplanar / collinear)."""


@dataclass(frozen=True)
class Sphere:
    center: tuple[int, ...]
    r: int

    def contains(self, ctx: FieldCtx, p: Sequence[int]) -> bool:
        diff = ctx.sub(np.asarray(p, dtype=np.int64), np.asarray(self.center, dtype=np.int64))
        return int(ctx.sum(ctx.square(diff), axis=-1)) == self.r

    def __str__(self) -> str:
        return f"center=({','.join(map(str, self.center))}) r={self.r}"


# a circle is the 2-dimensional sphere
Circle = Sphere
Sphere3 = Sphere


def _sphere_through(ctx: FieldCtx, pts: Sequence[Sequence[int]]) -> Sphere:
    pts = [tuple(int(x) for x in p) for p in pts]
    n = len(pts[0])
    if len(pts) != n + 1 or any(len(p) != n for p in pts):
        raise ValueError(f"need exactly {n + 1} points in F_q^{n}")
    # rows [p | 1] (e', r') = -|p|^2 with e = -e'/2, r = |e|^2 - r'
    A = [list(p) + [1] for p in pts]
    rhs = [ctx.neg(int(ctx.sum(ctx.square(np.array(p)), axis=-1))) for p in pts]
    if fflinalg.det(ctx, A) == 0:
        raise CoplanarPoints("points are coplanar" if n == 3 else "points are collinear")
    sol = fflinalg.solve(ctx, A, rhs)
    minus_half = ctx.neg(ctx.inv(2))
    center = tuple(int(ctx.mul(minus_half, s)) for s in sol[:n])
    r = ctx.sub(int(ctx.sum(ctx.square(np.array(center)), axis=-1)), sol[n])
    return Sphere(center, int(r))


def sphere_through(ctx: FieldCtx, p1, p2, p3, p4) -> Sphere:
    """The unique sphere in F_q^3 through four non-coplanar points."""
    return _sphere_through(ctx, [p1, p2, p3, p4])


def circle_through(ctx: FieldCtx, p1, p2, p3) -> Sphere:
    """The unique circle in F_q^2 through three non-collinear points."""
    return _sphere_through(ctx, [p1, p2, p3])


def _determined(ctx: FieldCtx, P: np.ndarray, n: int, min_points: int | None,
                nondegenerate: bool, threads: int = 1):
    """Yield (center index, r) for every determined candidate, in canonical order."""
    q = ctx.q
    n_cand = q ** (n + 1)
    if n_cand > CANDIDATE_BUDGET:
        raise BudgetExceeded(f"{n_cand} candidate objects exceed budget {CANDIDATE_BUDGET}")
    need = n + 1 if min_points is None else min_points
    centers = all_points(q, n)
    if len(P) == 0:
        return []

    def scan(chunk: np.ndarray):
        C = centers[chunk]
        diff = ctx.sub(P[None, :, :], C[:, None, :])
        D = np.asarray(ctx.sum(ctx.square(diff), axis=-1), dtype=np.int64)  # (centers, |P|)
        found = []
        for row, ci in zip(D, chunk):
            counts = np.bincount(row, minlength=q)
            for r in np.flatnonzero(counts >= need):
                if nondegenerate:
                    on = P[row == r]
                    if fflinalg.affine_rank(ctx, on, stop_at=n) < n:
                        continue
                found.append((int(ci), int(r)))
        return found

    chunks = np.array_split(np.arange(len(centers)), max(1, min(len(centers), 8 * threads)))
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(scan, chunks))
    else:
        parts = [scan(c) for c in chunks]
    return [x for part in parts for x in part]


def determined_objects(ctx: FieldCtx, P, n: int, min_points: int | None = None,
                       nondegenerate: bool = True, threads: int = 1) -> list[Sphere]:
    P = np.unique(as_point_array(P, n), axis=0)
    centers = all_points(ctx.q, n)
    return [Sphere(tuple(int(x) for x in centers[ci]), r)
            for ci, r in _determined(ctx, P, n, min_points, nondegenerate, threads)]


def distinct_circles(ctx: FieldCtx, P, min_points: int = 3, nondegenerate: bool = True,
                     threads: int = 1) -> int:
    P = np.unique(as_point_array(P, 2), axis=0)
    return len(_determined(ctx, P, 2, min_points, nondegenerate, threads))


def distinct_spheres(ctx: FieldCtx, P, min_points: int = 4, nondegenerate: bool = True,
                     threads: int = 1) -> int:
    P = np.unique(as_point_array(P, 3), axis=0)
    return len(_determined(ctx, P, 3, min_points, nondegenerate, threads))


def distinct_radii(ctx: FieldCtx, P, n: int, min_points: int | None = None,
                   nondegenerate: bool = True, threads: int = 1) -> int:
    if n not in (2, 3):
        raise ValueError("dimension must be 2 or 3")
    P = np.unique(as_point_array(P, n), axis=0)
    return len({r for _, r in _determined(ctx, P, n, min_points, nondegenerate, threads)})


def count_objects_and_radii(ctx: FieldCtx, P, n: int, min_points: int | None = None,
                            nondegenerate: bool = True, threads: int = 1) -> tuple[int, int]:
    """(distinct objects, distinct radii) from a single candidate scan."""
    P = np.unique(as_point_array(P, n), axis=0)
    found = _determined(ctx, P, n, min_points, nondegenerate, threads)
    return len(found), len({r for _, r in found})


_THEOREMS = {
    # n: (object name, premise |P| >= f(q), object threshold, radii threshold)
    2: ("circles", lambda q: 5 * q, lambda q: 4 * q**3 / 9, lambda q: 4 * q / 9),
    3: ("spheres", lambda q: 8 * q * q, lambda q: q**4 / 9, lambda q: q / 9),
}


def beck_reports(ctx: FieldCtx, P, n: int, min_points: int | None = None,
                 nondegenerate: bool = True, threads: int = 1,
                 seed: int | None = None) -> list[ClaimReport]:
    """Distinct-object and distinct-radii claims for circles (n = 2) or spheres (n = 3).

    Circles: |P| >= 5q gives >= 4q^3/9 circles and >= 4q/9 radii.
    Spheres: |P| >= 8q^2 gives >= q^4/9 spheres and >= q/9 radii.
    """
    if n not in _THEOREMS:
        raise ValueError("dimension must be 2 or 3")
    name, premise_f, obj_f, rad_f = _THEOREMS[n]
    q = ctx.q
    with timed() as ms:
        P = np.unique(as_point_array(P, n), axis=0)
        found = _determined(ctx, P, n, min_points, nondegenerate, threads)
        n_obj, n_rad = len(found), len({r for _, r in found})
    premise = len(P) >= premise_f(q)
    params = {"q": q, "n": n, "P": int(len(P)),
              "min_points": n + 1 if min_points is None else min_points,
              "nondegenerate": nondegenerate}
    out = []
    for claim, value, thr in ((f"distinct_{name}", n_obj, obj_f(q)),
                              (f"{name[:-1]}_radii", n_rad, rad_f(q))):
        out.append(ClaimReport(
            claim_name=claim, params=params, lhs=str(value), rhs=real_str(thr),
            satisfied=(not premise) or value >= thr, premise_satisfied=premise,
            seed=seed, runtime_ms=ms[0],
            details={"premise_threshold": premise_f(q)},
        ))
    return out


def sphere_solver_trials(ctx: FieldCtx, n: int, samples: int, seed: int) -> ClaimReport:
    """Seeded non-degenerate (n+1)-tuples: the solved object contains them and is the
    only one of the q^{n+1} candidates that does; degenerate tuples must raise."""
    q = ctx.q
    with timed() as ms:
        rng = np.random.default_rng(seed)
        centers = all_points(q, n)
        bad_contain = bad_unique = bad_degenerate = degenerate_seen = 0
        done = 0
        while done < samples:
            pts = rng.integers(0, q, size=(n + 1, n))
            if fflinalg.affine_rank(ctx, pts) < n:
                degenerate_seen += 1
                try:
                    _sphere_through(ctx, pts)
                    bad_degenerate += 1
                except CoplanarPoints:
                    pass
                continue
            s = _sphere_through(ctx, pts)
            bad_contain += not all(s.contains(ctx, p) for p in pts)
            diff = ctx.sub(pts[None, :, :], centers[:, None, :])
            D = np.asarray(ctx.sum(ctx.square(diff), axis=-1))
            bad_unique += int(np.count_nonzero((D == D[:, :1]).all(axis=1))) != 1
            done += 1
        # one deterministic degenerate input, so the error path is always exercised
        flat = np.zeros((n + 1, n), dtype=np.int64)
        flat[:, 0] = np.arange(n + 1) % q
        try:
            _sphere_through(ctx, flat)
            bad_degenerate += 1
        except CoplanarPoints:
            pass
        total = bad_contain + bad_unique + bad_degenerate
    return ClaimReport(
        claim_name="sphere_solver" if n == 3 else "circle_solver",
        params={"q": q, "n": n, "samples": samples},
        lhs=str(total), rhs="0", satisfied=total == 0, seed=seed, runtime_ms=ms[0],
        details={"containment_failures": bad_contain, "uniqueness_failures": bad_unique,
                 "degenerate_not_rejected": bad_degenerate,
                 "degenerate_tuples_drawn": degenerate_seen},
    )
