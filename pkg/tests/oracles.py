"""Independent reference implementations used as test oracles.

Nothing here imports fqlab arithmetic: prime fields use Python's %,
extension fields go through sympy polynomial reduction, and graph or
geometry quantities are recomputed by naive loops.
"""

from __future__ import annotations

from itertools import combinations, product

from sympy import GF, Poly, symbols

T = symbols("t")


class RefField:
    """F_q with elements encoded as base-p digits (low degree first)."""

    def __init__(self, p: int, e: int = 1, modulus: tuple[int, ...] = ()):
        self.p, self.e, self.q = p, e, p**e
        self.mod = Poly(list(reversed(modulus)), T, domain=GF(p)) if e > 1 else None

    def _poly(self, a: int) -> Poly:
        digits = [(a // self.p**i) % self.p for i in range(self.e)]
        return Poly(list(reversed(digits)), T, domain=GF(self.p))

    def _enc(self, f: Poly) -> int:
        coeffs = [int(c) % self.p for c in reversed(f.all_coeffs())]
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        return self._enc(self._poly(a) + self._poly(b))

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        return self._enc(-self._poly(a))

    def mul(self, a, b):
        if self.e == 1:
            return a * b % self.p
        return self._enc((self._poly(a) * self._poly(b)).rem(self.mod))

    def pow(self, a, n):
        r = 1
        for _ in range(n):
            r = self.mul(r, a)
        return r

    def inv(self, a):
        return next(b for b in range(1, self.q) if self.mul(a, b) == 1)

    def squares(self):
        return {self.mul(x, x) for x in range(1, self.q)}


def brute_codegree(N, i, j):
    return sum(1 for x, y in zip(N[i], N[j]) if x and y)


def brute_cube_block(N):
    """(N N^T N) by triple loops over Python lists."""
    nA, nB = len(N), len(N[0])
    G = [[sum(N[i][b] * N[j][b] for b in range(nB)) for j in range(nA)] for i in range(nA)]
    return [[sum(G[i][j] * N[j][b] for j in range(nA)) for b in range(nB)] for i in range(nA)]


def brute_lines(q):
    """Lines of F_q^2 as frozensets of points, by brute force over (a, b, c)."""
    pts = list(product(range(q), repeat=2))
    out = set()
    for a, b, c in product(range(q), repeat=3):
        if a == b == 0:
            continue
        out.add(frozenset(p for p in pts if (a * p[0] + b * p[1] + c) % q == 0))
    return out


def brute_circles(q, P, n=2):
    """Objects {center, r} containing >= n+1 points of P that are not all on one hyperplane,
    found by enumerating center/radius pairs and testing affine spans with determinants."""
    P = [tuple(p) for p in P]
    found = []
    for center in product(range(q), repeat=n):
        for r in range(q):
            on = [p for p in P if sum((x - c) ** 2 for x, c in zip(p, center)) % q == r]
            if len(on) < n + 1:
                continue
            if any(_affinely_independent(q, sub) for sub in combinations(on, n + 1)):
                found.append((center, r))
    return found


def _affinely_independent(q, pts):
    base = pts[0]
    rows = [[(x - y) % q for x, y in zip(p, base)] for p in pts[1:]]
    return _det_mod(rows, q) != 0


def _det_mod(M, p):
    M = [row[:] for row in M]
    n = len(M)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c] % p
        inv = pow(M[c][c], p - 2, p)
        for r in range(c + 1, n):
            f = M[r][c] * inv % p
            M[r] = [(x - f * y) % p for x, y in zip(M[r], M[c])]
    return det % p
