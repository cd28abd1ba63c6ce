"""Gaussian elimination over F_q on small dense matrices of canonical elements."""

from __future__ import annotations

from typing import Sequence

from fqlab.ffield import FieldCtx


def _rows(A: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[int(x) for x in row] for row in A]


def row_reduce(ctx: FieldCtx, A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int], int]:
    """Reduced row echelon form. Returns (rref, pivot columns, determinant factor).

    The determinant factor is the product of pivots times the permutation
    sign; for a square matrix it equals det(A) when the rank is full.
    """
    R = _rows(A)
    n_rows = len(R)
    n_cols = len(R[0]) if R else 0
    pivots: list[int] = []
    det = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if R[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            R[r], R[piv] = R[piv], R[r]
            det = ctx.neg(det)
        det = ctx.mul(det, R[r][c])
        inv = ctx.inv(R[r][c])
        R[r] = [ctx.mul(inv, x) for x in R[r]]
        for i in range(n_rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots, det


def rank(ctx: FieldCtx, A: Sequence[Sequence[int]]) -> int:
    if not A:
        return 0
    return len(row_reduce(ctx, A)[1])


def det(ctx: FieldCtx, A: Sequence[Sequence[int]]) -> int:
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    _, pivots, d = row_reduce(ctx, A)
    return d if len(pivots) == n else 0


def is_invertible(ctx: FieldCtx, A: Sequence[Sequence[int]]) -> bool:
    return det(ctx, A) != 0


def solve(ctx: FieldCtx, A: Sequence[Sequence[int]], b: Sequence[int]) -> list[int]:
    """Unique solution of A x = b; raises ValueError when A is singular."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("solve needs a square system")
    aug = [list(row) + [int(bi)] for row, bi in zip(_rows(A), b)]
    R, pivots, _ = row_reduce(ctx, aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [R[i][n] for i in range(n)]


def affine_rank(ctx: FieldCtx, points: Sequence[Sequence[int]], stop_at: int | None = None) -> int:
    """Dimension of the affine hull of ``points``.

    Differences from the first point are added one at a time to an echelon
    basis; with ``stop_at`` the scan ends as soon as that rank is reached.
    """
    pts = [list(map(int, p)) for p in points]
    if not pts:
        return -1
    p0 = pts[0]
    basis: list[tuple[int, list[int]]] = []  # (pivot column, row normalised to 1 at pivot)
    for p in pts[1:]:
        v = [ctx.sub(x, y) for x, y in zip(p, p0)]
        for c, row in basis:
            if v[c]:
                f = v[c]
                v = [ctx.sub(x, ctx.mul(f, y)) for x, y in zip(v, row)]
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            continue
        inv = ctx.inv(v[c])
        basis.append((c, [ctx.mul(inv, x) for x in v]))
        if stop_at is not None and len(basis) >= stop_at:
            break
    return len(basis)
