"""Desk-scale acceptance runs, one function per criterion.

Every function returns a list of ClaimReport in a fixed order; all random
choices are drawn from the seeds recorded here, so a re-run reproduces the
reports exactly apart from ``runtime_ms``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from fqlab.beck import beck_reports, sphere_solver_trials
from fqlab.bigraph import (
    BipartiteGraph,
    dense_third_eigenvalue,
    mixing_trials,
    third_eigenvalue_estimate,
)
from fqlab.distances import NonDegenerateForm, pinned_theorem_check, two_set_pinned_check
from fqlab.ffield import FieldCtx, make_field
from fqlab.incidence import build_point_variety_graph, incidence_trials, verify_cube_identity
from fqlab.pldist import (
    PLGraph,
    all_lines,
    build_in_graph,
    build_pl_graph,
    codegree_table_comparison,
    pl_distance_theorem_check,
    pl_lambda3_check,
    s_set_size,
    spanned_lines_report,
    verify_pl_identity,
)
from fqlab.report import ClaimReport, real_str, timed
from fqlab.space import all_points, index_to_point
from fqlab.varieties import VarietyFamily, distinct_varieties_check, schwartz_zippel_trials

CUBE_CONFIGS = ((3, 1, 1), (3, 2, 1), (3, 1, 2), (5, 1, 1), (5, 2, 1), (7, 1, 1), (7, 2, 1), (3, 2, 2))
SPHERE_CONFIGS = ((5, 2), (5, 3), (7, 2), (7, 3))
PL_ORDERS = (3, 5, 7, 11)
TOL = 1e-6
DENSE_CROSSCHECK_LIMIT = 400


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 20240611
    trials: int = 200
    polynomials: int = 100
    quadruples: int = 500
    circle_sets: int = 20
    sampled_pairs: int = 10_000


def _seed(cfg: AcceptanceConfig, *tags: int) -> int:
    """Stable per-experiment seed derived from the base seed and integer tags."""
    return int(np.random.SeedSequence([cfg.seed, *tags]).generate_state(1)[0])


@lru_cache(maxsize=None)
def _field(p: int, e: int = 1) -> FieldCtx:
    return make_field(p, e)


@lru_cache(maxsize=None)
def _flat_graph(q: int, d: int, k: int) -> tuple[VarietyFamily, BipartiteGraph]:
    fam = VarietyFamily.flats(_field(q), d, k)
    return fam, build_point_variety_graph(fam)


@lru_cache(maxsize=None)
def _pl(q: int) -> tuple[PLGraph, BipartiteGraph]:
    ctx = _field(q)
    pl = build_pl_graph(ctx)
    return pl, build_in_graph(ctx, pl)


def _check(name: str, params: dict, lhs, rhs, ok: bool, ms: int = 0, **details) -> ClaimReport:
    return ClaimReport(claim_name=name, params=params, lhs=str(lhs), rhs=str(rhs),
                       satisfied=bool(ok), runtime_ms=ms, details=details)


def cube_identity(cfg: AcceptanceConfig) -> list[ClaimReport]:
    out = []
    for q, d, k in CUBE_CONFIGS:
        fam, g = _flat_graph(q, d, k)
        out.append(verify_cube_identity(fam, g, mode="full"))
    return out


def biregularity(cfg: AcceptanceConfig) -> list[ClaimReport]:
    out = []
    for q, d, k in CUBE_CONFIGS:
        fam, g = _flat_graph(q, d, k)
        a, b = q ** (d * k), q**d
        dev = max(int(np.abs(g.row_degrees - a).max()), int(np.abs(g.col_degrees - b).max()))
        out.append(_check("biregularity", {"q": q, "d": d, "k": k, "degA": a, "degB": b},
                          dev, 0, dev == 0))
        with timed() as ms:
            distinct = distinct_varieties_check(fam)
        out.append(_check("distinct_varieties", {"q": q, "d": d, "k": k, "tuples": fam.n_params},
                          int(distinct), 1, distinct, ms[0]))
    return out


def incidence_bound(cfg: AcceptanceConfig) -> list[ClaimReport]:
    out = []
    for i, (q, d, k) in enumerate(CUBE_CONFIGS):
        fam, g = _flat_graph(q, d, k)
        out.append(incidence_trials(fam, cfg.trials, _seed(cfg, 3, i), mode="V", graph=g))
    for i, (q, d) in enumerate(SPHERE_CONFIGS):
        fam = VarietyFamily.spheres(_field(q), d)
        r = incidence_trials(fam, cfg.trials, _seed(cfg, 3, 100 + i), mode="W")
        r.params["family"] = "spheres"
        out.append(r)
    return out


def expander_mixing(cfg: AcceptanceConfig) -> list[ClaimReport]:
    out = []
    for i, (q, d, k) in enumerate(CUBE_CONFIGS):
        _, g = _flat_graph(q, d, k)
        r = mixing_trials(g, q ** (d * k / 2), cfg.trials, _seed(cfg, 4, i))
        r.params = {"q": q, "d": d, "k": k, **r.params}
        out.append(r)
    return out


def schwartz_zippel(cfg: AcceptanceConfig) -> list[ClaimReport]:
    return [schwartz_zippel_trials(_field(q), d, cfg.polynomials, _seed(cfg, 5, q, d))
            for q in (3, 5, 7) for d in (1, 2, 3)]


def third_eigenvalue(cfg: AcceptanceConfig) -> list[ClaimReport]:
    out = []
    for q, d, k in CUBE_CONFIGS:
        _, g = _flat_graph(q, d, k)
        with timed() as ms:
            est = third_eigenvalue_estimate(g, tol=TOL)
            bound = q ** (d * k / 2)
            ok = est <= bound * (1 + TOL)
            details = {"bound": real_str(bound)}
            if g.nA + g.nB <= DENSE_CROSSCHECK_LIMIT:
                dense = dense_third_eigenvalue(g)
                agree = abs(est - dense) <= TOL * max(1.0, dense)
                details.update(dense=real_str(dense), dense_agrees=agree)
                ok = ok and agree
        out.append(ClaimReport("lambda3", {"q": q, "d": d, "k": k, "tol": TOL}, real_str(est),
                               real_str(bound * (1 + TOL)), ok, runtime_ms=ms[0], details=details))
    for q in (3, 5, 7):
        pl, _ = _pl(q)
        out.append(pl_lambda3_check(_field(q), TOL, pl))
    return out


def pl_structure(cfg: AcceptanceConfig) -> list[ClaimReport]:
    """Degrees and |S| for every order; the codegree table on all pairs at q = 3, 5;
    the walk identity at q = 3, 5, 7. The refined codegree count and identity
    follow as extra claims, with the refined table also run on sampled pairs at 7, 11."""
    out = []
    for q in PL_ORDERS:
        pl, _ = _pl(q)
        g = pl.graph
        a, b = 2 * q, 2 * pl.s_size
        dev = max(int(np.abs(g.row_degrees - a).max()), int(np.abs(g.col_degrees - b).max()))
        out.append(_check("pl_biregularity", {"q": q, "degA": a, "degB": b}, dev, 0, dev == 0))
        s = s_set_size(_field(q))
        out.append(_check("pl_s_size", {"q": q, "minus_one_square": s["minus_one_square"]},
                          s["count"], s["formula"], s["matches"]))
    for q in (3, 5):
        out.append(codegree_table_comparison(_pl(q)[0], "all"))
    for q in (3, 5, 7):
        pl, ing = _pl(q)
        out.append(verify_pl_identity(_field(q), pl, ing))
    for q in (3, 5):
        out.append(codegree_table_comparison(_pl(q)[0], "all", refined=True))
    for q in (7, 11):
        out.append(codegree_table_comparison(_pl(q)[0], cfg.sampled_pairs, seed=_seed(cfg, 7, q),
                                        refined=True))
    for q in (3, 5, 7):
        pl, ing = _pl(q)
        out.append(verify_pl_identity(_field(q), pl, ing, refined=True))
    return out


def sphere_solver(cfg: AcceptanceConfig) -> list[ClaimReport]:
    return [sphere_solver_trials(_field(q), 3, cfg.quadruples, _seed(cfg, 8, q)) for q in (3, 5)]


def beck_counts(cfg: AcceptanceConfig) -> list[ClaimReport]:
    ctx = _field(3, 2)
    q = ctx.q
    seed = _seed(cfg, 9, 0)
    rng = np.random.default_rng(seed)
    P = index_to_point(np.sort(rng.choice(q**3, 8 * q * q, replace=False)), q, 3)
    out = beck_reports(ctx, P, 3, seed=seed)
    for q in (5, 7):
        for j in range(cfg.circle_sets):
            seed = _seed(cfg, 9, q, j)
            rng = np.random.default_rng(seed)
            P = index_to_point(np.sort(rng.choice(q * q, 5 * q, replace=False)), q, 2)
            out.extend(beck_reports(_field(q), P, 2, seed=seed))
    return out


def pinned_values(cfg: AcceptanceConfig) -> list[ClaimReport]:
    c13, c5 = _field(13), _field(5)
    return [
        pinned_theorem_check(all_points(13, 2), NonDegenerateForm.distance(c13, 2), 0.5),
        two_set_pinned_check(all_points(5, 2), all_points(5, 2), NonDegenerateForm.distance(c5, 2)),
    ]


def line_distances(cfg: AcceptanceConfig) -> list[ClaimReport]:
    ctx = _field(23)
    out = [pl_distance_theorem_check(ctx, all_points(23, 2), all_lines(ctx), 0.9)]
    seed = _seed(cfg, 11, 7)
    rng = np.random.default_rng(seed)
    P = index_to_point(np.sort(rng.choice(49, 21, replace=False)), 7, 2)
    r = spanned_lines_report(_field(7), P)
    r.seed = seed
    out.append(r)
    return out


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    run: Callable[[AcceptanceConfig], list[ClaimReport]]
    time_limit_s: float | None = None


CRITERIA = (
    Criterion(1, "cube identity", cube_identity),
    Criterion(2, "biregularity and distinct varieties", biregularity),
    Criterion(3, "incidence bound", incidence_bound),
    Criterion(4, "expander mixing", expander_mixing),
    Criterion(5, "Schwartz-Zippel", schwartz_zippel),
    Criterion(6, "third eigenvalue", third_eigenvalue),
    Criterion(7, "point-line graph structure", pl_structure, 300.0),
    Criterion(8, "sphere solver", sphere_solver),
    Criterion(9, "Beck-type counts", beck_counts, 600.0),
    Criterion(10, "pinned values", pinned_values),
    Criterion(11, "point-line distances and spanned lines", line_distances, 120.0),
)


@dataclass
class CriterionResult:
    criterion: Criterion
    reports: list[ClaimReport] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def failed(self) -> list[ClaimReport]:
        return [r for r in self.reports if r.failed]

    @property
    def passed(self) -> bool:
        return not self.failed

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        bad = ", ".join(sorted({r.claim_name for r in self.failed}))
        tail = f"  failing: {bad}" if bad else ""
        return (f"{status} criterion {self.criterion.number:>2} {self.criterion.title}: "
                f"{len(self.reports)} claims, {self.seconds:.1f}s{tail}")


def run_criterion(number: int, cfg: AcceptanceConfig | None = None) -> CriterionResult:
    cfg = cfg or AcceptanceConfig()
    crit = next(c for c in CRITERIA if c.number == number)
    with timed() as ms:
        reports = crit.run(cfg)
    return CriterionResult(crit, reports, ms[0] / 1000)


def run_all(cfg: AcceptanceConfig | None = None) -> list[CriterionResult]:
    return [run_criterion(c.number, cfg) for c in CRITERIA]


def clear_caches() -> None:
    """Drop cached fields and graphs so a re-run rebuilds everything."""
    for f in (_field, _flat_graph, _pl):
        f.cache_clear()
