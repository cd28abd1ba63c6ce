"""Biregular bipartite graphs with exact walk algebra and spectral estimates.

The adjacency matrix is M = [[0, N], [N^T, 0]] with N the |A| x |B| 0/1
block. N is stored dense (uint8); rows are exposed as packed bitsets for
popcount-based edge counting and for the on-disk dump format.
"""

from __future__ import annotations

import base64
import json
import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from fqlab.errors import BudgetExceeded, ConvergenceError
from fqlab.report import ClaimReport, exact_str, le_with_slack, real_str, timed

DEFAULT_BUDGET_BYTES = 256 * 2**20
EXACT_ENTRY_LIMIT = 10**7
MIN_SAMPLED_COLUMNS = 64
MAX_ITER = 10**5
DEFAULT_TOL = 1e-6
_INT128_MAX = 2**127 - 1


def budget_bytes(budget: int | None = None) -> int:
    """Effective bitset budget: FQLAB_BUDGET_BYTES beats the argument, which beats the default."""
    env = os.environ.get("FQLAB_BUDGET_BYTES")
    if env:
        return int(env)
    return DEFAULT_BUDGET_BYTES if budget is None else int(budget)


def check_budget(n_a: int, n_b: int, budget: int | None = None) -> None:
    need = n_a * ((n_b + 7) // 8)
    limit = budget_bytes(budget)
    if need > limit:
        raise BudgetExceeded(f"{n_a}x{n_b} bitset needs {need} bytes, budget is {limit}")


class BipartiteGraph:
    """Immutable bipartite graph on parts A (rows) and B (columns)."""

    def __init__(self, N):
        N = np.ascontiguousarray(N, dtype=np.uint8)
        if N.ndim != 2:
            raise ValueError("adjacency block must be 2-D")
        if N.size and N.max() > 1:
            raise ValueError("adjacency block must be 0/1")
        N.setflags(write=False)
        self.N = N
        self.nA, self.nB = N.shape
        self.row_degrees = N.sum(axis=1, dtype=np.int64)
        self.col_degrees = N.sum(axis=0, dtype=np.int64)

    @property
    def n_edges(self) -> int:
        return int(self.row_degrees.sum())

    @property
    def is_biregular(self) -> bool:
        rows_ok = self.nA == 0 or bool((self.row_degrees == self.row_degrees[0]).all())
        cols_ok = self.nB == 0 or bool((self.col_degrees == self.col_degrees[0]).all())
        return rows_ok and cols_ok

    @property
    def degA(self) -> int:
        self.audit()
        return int(self.row_degrees[0]) if self.nA else 0

    @property
    def degB(self) -> int:
        self.audit()
        return int(self.col_degrees[0]) if self.nB else 0

    def audit(self, degA: int | None = None, degB: int | None = None) -> None:
        """Raise ValueError unless biregular (with the given degrees, if any)."""
        if not self.is_biregular:
            raise ValueError("graph is not biregular")
        if degA is not None and self.nA and int(self.row_degrees[0]) != degA:
            raise ValueError(f"A-degree is {int(self.row_degrees[0])}, expected {degA}")
        if degB is not None and self.nB and int(self.col_degrees[0]) != degB:
            raise ValueError(f"B-degree is {int(self.col_degrees[0])}, expected {degB}")

    @property
    def packed_rows(self) -> np.ndarray:
        """Row bitsets, bit j of row i at byte j // 8 (big-endian within the byte)."""
        return np.packbits(self.N, axis=1)

    def row_bitset(self, i: int) -> int:
        """Row i as a Python int whose bit j is N[i, j]."""
        return int.from_bytes(np.packbits(self.N[i], bitorder="little").tobytes(), "little")

    def to_json(self) -> str:
        rows = self.packed_rows
        return json.dumps({
            "nA": self.nA,
            "nB": self.nB,
            "degA": int(self.row_degrees[0]) if self.nA and self.is_biregular else None,
            "degB": int(self.col_degrees[0]) if self.nB and self.is_biregular else None,
            "rows": [base64.b64encode(r.tobytes()).decode("ascii") for r in rows],
        })

    @classmethod
    def from_json(cls, text: str) -> BipartiteGraph:
        d = json.loads(text)
        n_a, n_b = int(d["nA"]), int(d["nB"])
        nbytes = (n_b + 7) // 8
        buf = np.zeros((n_a, nbytes), dtype=np.uint8)
        for i, r in enumerate(d["rows"]):
            buf[i] = np.frombuffer(base64.b64decode(r), dtype=np.uint8)
        N = np.unpackbits(buf, axis=1, count=n_b) if n_a else np.zeros((0, n_b), np.uint8)
        g = cls(N)
        if d.get("degA") is not None:
            g.audit(d["degA"], d["degB"])
        return g


def _index_array(idx: Iterable[int], n: int, label: str) -> np.ndarray:
    arr = np.asarray(list(idx) if not isinstance(idx, np.ndarray) else idx, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise IndexError(f"{label} contains indices outside [0, {n})")
    return np.unique(arr)


def edges_between(g: BipartiteGraph, X: Iterable[int], Y: Iterable[int]) -> int:
    """e(X, Y) by AND-ing packed row bitsets of X with the indicator bitset of Y."""
    X = _index_array(X, g.nA, "X")
    Y = _index_array(Y, g.nB, "Y")
    ymask = np.zeros(g.nB, dtype=np.uint8)
    ymask[Y] = 1
    packed_y = np.packbits(ymask)
    rows = g.packed_rows[X]
    return int(np.bitwise_count(rows & packed_y).sum())


def mixing_bound_check(g: BipartiteGraph, X: Iterable[int], Y: Iterable[int],
                       lambda3: float) -> ClaimReport:
    """Expander mixing: |e(X,Y) - a|X||Y|/|B|| against lambda3*sqrt(|X||Y|) and the refined bound."""
    with timed() as ms:
        X = _index_array(X, g.nA, "X")
        Y = _index_array(Y, g.nB, "Y")
        a = g.degA
        nx, ny = len(X), len(Y)
        e = edges_between(g, X, Y)
        dev = abs(e - Fraction(a * nx * ny, g.nB)) if g.nB else Fraction(e)
        basic = lambda3 * math.sqrt(nx * ny)
        fx = 1 - nx / g.nA if g.nA else 0.0
        fy = 1 - ny / g.nB if g.nB else 0.0
        refined = lambda3 * math.sqrt(max(nx * ny * fx * fy, 0.0))
        basic_ok = le_with_slack(dev, basic)
        refined_ok = le_with_slack(dev, refined)
    return ClaimReport(
        claim_name="expander_mixing",
        params={"nA": g.nA, "nB": g.nB, "degA": a, "X": nx, "Y": ny, "lambda3": lambda3},
        lhs=exact_str(dev),
        rhs=real_str(refined),
        satisfied=basic_ok and refined_ok,
        runtime_ms=ms[0],
        details={"edges": e, "basic_rhs": real_str(basic), "basic_satisfied": basic_ok,
                 "refined_satisfied": refined_ok},
    )


@dataclass(frozen=True)
class WalkIdentitySpec:
    """Right-hand side alpha*N + beta*J + gamma*N_aux of the A->B block of M^3."""

    alpha: int
    beta: int
    gamma: int = 0
    aux: BipartiteGraph | None = None


def _matmul_exact(x: np.ndarray, y: np.ndarray, bound: int) -> np.ndarray:
    if bound < 2**62:
        return x.astype(np.int64) @ y.astype(np.int64)
    return x.astype(object) @ y.astype(object)


def verify_walk_identity(g: BipartiteGraph, spec: WalkIdentitySpec, mode: str = "auto",
                         columns: int = MIN_SAMPLED_COLUMNS, seed: int = 0) -> ClaimReport:
    """Check N N^T N == alpha*N + beta*J + gamma*N_aux entrywise over the integers.

    mode: "full", "sampled" (a seeded subset of >= 64 columns) or "auto"
    (full when nA*nB <= 10^7). The product is associated so that the
    intermediate Gram matrix is built on the smaller part.
    """
    if spec.gamma and spec.aux is None:
        raise ValueError("gamma != 0 requires an auxiliary graph")
    if spec.aux is not None and spec.aux.N.shape != g.N.shape:
        raise ValueError("auxiliary graph must have identical part sizes")
    if mode == "auto":
        mode = "full" if g.nA * g.nB <= EXACT_ENTRY_LIMIT else "sampled"
    if mode not in ("full", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    with timed() as ms:
        max_row = int(g.row_degrees.max(initial=0))
        max_col = int(g.col_degrees.max(initial=0))
        # (N N^T N)_{pv} <= max_row * max_col
        bound = max_row * max_col + abs(spec.alpha) + abs(spec.beta) + abs(spec.gamma)
        if 2 * bound > _INT128_MAX:
            raise OverflowError("walk counts would exceed 128-bit range")
        rng_seed = None
        if mode == "sampled":
            rng_seed = seed
            rng = np.random.default_rng(seed)
            cols = np.sort(rng.choice(g.nB, size=min(max(columns, MIN_SAMPLED_COLUMNS), g.nB),
                                      replace=False))
        else:
            cols = np.arange(g.nB)
        N = g.N
        Nc = N[:, cols]
        if g.nA <= g.nB or mode == "sampled":
            gram = _matmul_exact(N, N.T, bound)
            lhs = _matmul_exact(gram, Nc, bound)
        else:
            gram = _matmul_exact(N.T, Nc, bound)
            lhs = _matmul_exact(N, gram, bound)
        rhs = spec.alpha * Nc.astype(lhs.dtype) + spec.beta
        if spec.gamma:
            rhs = rhs + spec.gamma * spec.aux.N[:, cols].astype(lhs.dtype)
        diff = np.abs(lhs - rhs)
        max_dev = int(diff.max(initial=0))
        n_bad = int(np.count_nonzero(diff))
    return ClaimReport(
        claim_name="walk_identity",
        params={"nA": g.nA, "nB": g.nB, "alpha": spec.alpha, "beta": spec.beta,
                "gamma": spec.gamma, "mode": mode, "columns": int(len(cols))},
        lhs=str(max_dev),
        rhs="0",
        satisfied=max_dev == 0,
        seed=rng_seed,
        runtime_ms=ms[0],
        details={"mismatched_entries": n_bad},
    )


def third_eigenvalue_estimate(g: BipartiteGraph, tol: float = DEFAULT_TOL,
                              max_iter: int = MAX_ITER, seed: int = 0) -> float:
    """Largest |lambda| of M on the complement of span(sqrt(a) 1_A +- sqrt(b) 1_B).

    M^2 is block diagonal with blocks N N^T and N^T N; the two top
    eigenvectors of M span {1_A, 1_B}, so deflating them leaves the top
    eigenvalue of the smaller Gram block on the complement of the all-ones
    vector. Power iteration runs on that block with re-orthogonalization
    every step; the result is sqrt of the converged Rayleigh quotient.
    """
    if not g.is_biregular:
        raise ValueError("third_eigenvalue_estimate requires a biregular graph")
    if g.nA == 0 or g.nB == 0 or g.n_edges == 0:
        return 0.0
    N = g.N.astype(np.float64)
    G = N @ N.T if g.nA <= g.nB else N.T @ N
    n = G.shape[0]
    ones = np.full(n, 1 / math.sqrt(n))
    scale = float(g.degA * g.degB)

    def deflate(v):
        return v - (ones @ v) * ones

    rng = np.random.default_rng(seed)
    v = deflate(rng.standard_normal(n))
    nv = np.linalg.norm(v)
    if nv == 0:
        return 0.0
    v /= nv
    theta = 0.0
    for _ in range(max_iter):
        w = deflate(G @ v)
        theta = float(v @ w)
        resid = np.linalg.norm(w - theta * v)
        nw = np.linalg.norm(w)
        if nw <= 1e-12 * scale:
            return 0.0
        # |theta - mu| <= resid for some eigenvalue mu of G; sqrt halves the relative error
        if resid <= tol * max(theta, 1e-300):
            break
        v = w / nw
    else:
        raise ConvergenceError(f"power iteration did not reach tol={tol} in {max_iter} steps")
    est = math.sqrt(max(theta, 0.0))
    if est > math.sqrt(scale) * (1 - 1e-9):
        warnings.warn("third eigenvalue estimate reaches sqrt(ab); the graph may have "
                      "repeated top eigenvalues and the deflation is incomplete")
    return est


def dense_third_eigenvalue(g: BipartiteGraph) -> float:
    """Independent route: full symmetric eigensolve of M, third largest |lambda|."""
    n = g.nA + g.nB
    M = np.zeros((n, n))
    M[: g.nA, g.nA:] = g.N
    M[g.nA:, : g.nA] = g.N.T
    mags = np.sort(np.abs(np.linalg.eigvalsh(M)))[::-1]
    return float(mags[2]) if n >= 3 else 0.0


def random_subset(rng: np.random.Generator, n: int, allow_empty: bool = False) -> np.ndarray:
    """Uniform size in [1, n] (or [0, n]), then a uniform subset of that size, sorted."""
    lo = 0 if allow_empty else 1
    size = int(rng.integers(lo, n + 1))
    return np.sort(rng.choice(n, size=size, replace=False))


def mixing_trials(g: BipartiteGraph, lambda3: float, samples: int, seed: int) -> ClaimReport:
    """Run the refined mixing check on ``samples`` seeded (X, Y) pairs."""
    with timed() as ms:
        rng = np.random.default_rng(seed)
        violations = 0
        worst = 0.0
        for _ in range(samples):
            X = random_subset(rng, g.nA)
            Y = random_subset(rng, g.nB)
            r = mixing_bound_check(g, X, Y, lambda3)
            violations += not r.satisfied
            rhs = float(r.rhs)
            if rhs > 0:
                worst = max(worst, float(Fraction(r.lhs)) / rhs)
    return ClaimReport(
        claim_name="expander_mixing_trials",
        params={"nA": g.nA, "nB": g.nB, "lambda3": lambda3, "samples": samples},
        lhs=str(violations),
        rhs="0",
        satisfied=violations == 0,
        seed=seed,
        runtime_ms=ms[0],
        details={"worst_ratio": real_str(worst)},
    )


def common_neighbor_counts(g: BipartiteGraph) -> np.ndarray:
    """Exact A-side codegree matrix N N^T."""
    return g.N.astype(np.int64) @ g.N.T.astype(np.int64)

