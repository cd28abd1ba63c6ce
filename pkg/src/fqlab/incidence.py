"""Point-variety incidence graph and incidence-bound experiments."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from fqlab.bigraph import (
    BipartiteGraph,
    WalkIdentitySpec,
    check_budget,
    random_subset,
    verify_walk_identity,
)
from fqlab.report import ClaimReport, exact_str, le_with_slack, real_str, timed
from fqlab.varieties import VarietyFamily


def build_point_variety_graph(family: VarietyFamily, budget: int | None = None) -> BipartiteGraph:
    """A = F_q^{d+k}, B = all parameter tuples, both in canonical order; edge iff p in V_a."""
    check_budget(family.n_points, family.n_params, budget)
    pts = family.variety_point_indices()
    N = np.zeros((family.n_points, family.n_params), dtype=np.uint8)
    cols = np.broadcast_to(np.arange(family.n_params)[:, None], pts.shape)
    N[pts.ravel(), cols.ravel()] = 1
    g = BipartiteGraph(N)
    q, d, k = family.ctx.q, family.d, family.k
    g.audit(degA=q ** (d * k), degB=q**d)
    return g


def cube_identity_spec(q: int, d: int, k: int) -> WalkIdentitySpec:
    """M^3 = q^{dk} M + (q^d - 1) q^{k(d-1)} K."""
    return WalkIdentitySpec(alpha=q ** (d * k), beta=(q**d - 1) * q ** (k * (d - 1)))


def verify_cube_identity(family: VarietyFamily, graph: BipartiteGraph | None = None,
                         mode: str = "auto", seed: int = 0) -> ClaimReport:
    g = graph if graph is not None else build_point_variety_graph(family)
    q, d, k = family.ctx.q, family.d, family.k
    r = verify_walk_identity(g, cube_identity_spec(q, d, k), mode=mode, seed=seed)
    r.claim_name = "cube_identity"
    r.params = {"q": q, "d": d, "k": k, **r.params}
    return r


@dataclass
class IncidenceExperiment:
    """Point set and variety set for an incidence count.

    ``points`` are canonical indices into F_q^{d+k} (mode "V") or F_q^d
    (mode "W"); ``varieties`` are parameter-tuple indices.
    """

    family: VarietyFamily
    points: np.ndarray
    varieties: np.ndarray
    mode: str = "V"
    seed: int | None = None
    sample_count: int = 1
    graph: BipartiteGraph | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.mode not in ("V", "W"):
            raise ValueError(f"mode must be 'V' or 'W', got {self.mode!r}")
        self.points = np.unique(np.asarray(self.points, dtype=np.int64))
        self.varieties = np.unique(np.asarray(self.varieties, dtype=np.int64))
        n_pts = self.family.n_points if self.mode == "V" else self.family.ctx.q ** self.family.d
        if self.points.size and (self.points.min() < 0 or self.points.max() >= n_pts):
            raise IndexError("point index out of range")
        if self.varieties.size and (self.varieties.min() < 0
                                    or self.varieties.max() >= self.family.n_params):
            raise IndexError("parameter-tuple index out of range")


def lift_W_to_V(exp: IncidenceExperiment) -> IncidenceExperiment:
    """P' = {p x 0^k}: the W-incidences of P equal the V-incidences of P'."""
    if exp.mode == "V":
        return exp
    lifted = exp.points * exp.family.ctx.q**exp.family.k
    return replace(exp, points=lifted, mode="V")


def count_incidences(exp: IncidenceExperiment) -> int:
    exp = lift_W_to_V(exp)
    if exp.points.size == 0 or exp.varieties.size == 0:
        return 0
    if exp.graph is not None:
        sub = exp.graph.N[np.ix_(exp.points, exp.varieties)]
        return int(sub.sum(dtype=np.int64))
    # without a prebuilt graph: test each chosen variety's q^d points against P
    pts = exp.family.variety_point_indices()[exp.varieties]
    return int(np.isin(pts, exp.points).sum())


def verify_incidence_bound(exp: IncidenceExperiment) -> ClaimReport:
    """|I - |P||V|/q^k| <= q^{dk/2} sqrt(|P||V|), plus the I >= 1 existence corollary."""
    with timed() as ms:
        fam = exp.family
        q, d, k = fam.ctx.q, fam.d, fam.k
        n_p, n_v = len(exp.points), len(exp.varieties)
        inc = count_incidences(exp)
        dev = abs(inc - Fraction(n_p * n_v, q**k))
        rhs = q ** (d * k / 2) * np.sqrt(float(n_p * n_v))
        ok = le_with_slack(dev, rhs)
        existence_premise = n_p * n_v >= 2 * q ** (k * (d + 2))
        existence_ok = (not existence_premise) or inc >= 1
    return ClaimReport(
        claim_name="incidence_bound",
        params={"q": q, "d": d, "k": k, "mode": exp.mode, "P": n_p, "V": n_v},
        lhs=exact_str(dev),
        rhs=real_str(rhs),
        satisfied=ok and existence_ok,
        seed=exp.seed,
        runtime_ms=ms[0],
        details={"incidences": inc, "existence_premise": existence_premise,
                 "existence_satisfied": existence_ok},
    )


def random_experiment(family: VarietyFamily, rng: np.random.Generator, mode: str = "V",
                      graph: BipartiteGraph | None = None,
                      seed: int | None = None) -> IncidenceExperiment:
    n_pts = family.n_points if mode == "V" else family.ctx.q**family.d
    return IncidenceExperiment(
        family,
        random_subset(rng, n_pts),
        random_subset(rng, family.n_params),
        mode=mode,
        seed=seed,
        graph=graph,
    )


def incidence_trials(family: VarietyFamily, samples: int, seed: int, mode: str = "V",
                     graph: BipartiteGraph | None = None) -> ClaimReport:
    """Seeded batch of random (P, V) pairs; satisfied iff no pair violates either claim."""
    with timed() as ms:
        g = graph if graph is not None else build_point_variety_graph(family)
        rng = np.random.default_rng(seed)
        bound_violations = 0
        existence_checked = 0
        existence_violations = 0
        worst = 0.0
        for _ in range(samples):
            r = verify_incidence_bound(random_experiment(family, rng, mode, graph=g, seed=seed))
            bound_violations += not le_with_slack(Fraction(r.lhs), float(r.rhs))
            if r.details["existence_premise"]:
                existence_checked += 1
                existence_violations += not r.details["existence_satisfied"]
            if float(r.rhs) > 0:
                worst = max(worst, float(Fraction(r.lhs)) / float(r.rhs))
    q = family.ctx.q
    return ClaimReport(
        claim_name="incidence_bound_trials",
        params={"q": q, "d": family.d, "k": family.k, "mode": mode, "samples": samples},
        lhs=str(bound_violations + existence_violations),
        rhs="0",
        satisfied=bound_violations == 0 and existence_violations == 0,
        seed=seed,
        runtime_ms=ms[0],
        details={"bound_violations": bound_violations, "existence_pairs": existence_checked,
                 "existence_violations": existence_violations, "worst_ratio": real_str(worst)},
    )
