"""Arithmetic in F_q for odd prime powers q = p^e.

Elements are canonical integers in ``[0, q)``. For ``e > 1`` an element is the
base-p digit expansion of its polynomial coefficients (digit i is the
coefficient of t^i), so 0 and 1 encode the additive and multiplicative
identities and the prime subfield sits at ``0..p-1``.

Every ``FieldCtx`` operation accepts Python ints or integer numpy arrays and
broadcasts; scalar in, scalar out.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

MAX_ORDER = 2**16
TABLE_THRESHOLD = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of num / den over F_p; den monic, both low-to-high."""
    r = list(num)
    dd = len(den) - 1
    for k in range(len(r) - 1, dd - 1, -1):
        c = r[k] % p
        if c:
            for j in range(dd + 1):
                r[k - dd + j] = (r[k - dd + j] - c * den[j]) % p
    return [x % p for x in r[:dd]]


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    n = len(poly) - 1
    if n < 1 or poly[-1] % p != 1:
        return False
    if n == 1:
        return True
    for deg in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not any(_poly_mod(list(poly), list(low) + [1], p)):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree e, coefficients low-to-high."""
    for low in itertools.product(range(p), repeat=e):
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError(f"no irreducible of degree {e} over F_{p}")  # unreachable


class FieldCtx:
    """The field F_q. Immutable after construction."""

    def __init__(self, p: int, e: int, modulus: tuple[int, ...] = ()):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self._mod_low = np.array(modulus[:-1], dtype=np.int64) if e > 1 else None
        self._pows = p ** np.arange(e, dtype=np.int64)
        self.has_tables = e > 1 and self.q <= TABLE_THRESHOLD

    def __repr__(self) -> str:
        if self.e == 1:
            return f"FieldCtx(F_{self.q})"
        return f"FieldCtx(F_{self.q} = F_{self.p}[t]/{self.modulus})"

    # -- element encoding -------------------------------------------------
    def elem(self, value: int) -> FieldElem:
        v = int(value)
        if not 0 <= v < self.q:
            raise ValueError(f"{v} is not a canonical element of F_{self.q}")
        return FieldElem(self, v)

    def from_int(self, n):
        """Image of an integer under Z -> F_p -> F_q."""
        return _out(np.mod(np.asarray(n, dtype=np.int64), self.p))

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def to_digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._pows) % self.p

    def from_digits(self, digits) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) * self._pows).sum(axis=-1)

    # -- polynomial-basis arithmetic (no tables) ---------------------------
    def _poly_add(self, a, b):
        return self.from_digits((self.to_digits(a) + self.to_digits(b)) % self.p)

    def _poly_neg(self, a):
        return self.from_digits((-self.to_digits(a)) % self.p)

    def _poly_mul(self, a, b):
        p, e = self.p, self.e
        da, db = np.broadcast_arrays(self.to_digits(a), self.to_digits(b))
        prod = np.zeros(da.shape[:-1] + (2 * e - 1,), dtype=np.int64)
        for i in range(e):
            for j in range(e):
                prod[..., i + j] += da[..., i] * db[..., j]
        prod %= p
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[..., k]
            prod[..., k - e : k] = (prod[..., k - e : k] - c[..., None] * self._mod_low) % p
        return self.from_digits(prod[..., :e])

    @cached_property
    def _add_table(self) -> np.ndarray:
        x = self.elements()
        return self._poly_add(x[:, None], x[None, :]).astype(np.int32)

    @cached_property
    def _mul_table(self) -> np.ndarray:
        x = self.elements()
        return self._poly_mul(x[:, None], x[None, :]).astype(np.int32)

    @cached_property
    def _neg_table(self) -> np.ndarray:
        return self._poly_neg(self.elements())

    @cached_property
    def _inv_table(self) -> np.ndarray:
        x = self.elements()
        t = self._raw_pow(x, self.q - 2)
        t[0] = -1
        return t

    # -- public arithmetic ---------------------------------------------------
    def add(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return _out((a + b) % self.p)
        if self.has_tables:
            return _out(self._add_table[a, b].astype(np.int64))
        return _out(self._poly_add(a, b))

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            return _out((-a) % self.p)
        if self.has_tables:
            return _out(self._neg_table[a])
        return _out(self._poly_neg(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return _out((a * b) % self.p)
        if self.has_tables:
            return _out(self._mul_table[a, b].astype(np.int64))
        return _out(self._poly_mul(a, b))

    def square(self, a):
        return self.mul(a, a)

    def _raw_pow(self, a, n: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        result = np.ones_like(a)
        base = a
        while n:
            if n & 1:
                result = np.asarray(self.mul(result, base), dtype=np.int64)
            n >>= 1
            if n:
                base = np.asarray(self.mul(base, base), dtype=np.int64)
        return result

    def pow(self, a, n: int):
        """a**n by square-and-multiply; a**0 = 1 including 0**0."""
        if n < 0:
            return self.pow(self.inv(a), -n)
        return _out(self._raw_pow(a, int(n)))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.e == 1:
            return _out(self._raw_pow(a, self.p - 2))
        if self.has_tables:
            return _out(self._inv_table[a])
        return _out(self._raw_pow(a, self.q - 2))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def sum(self, a, axis=-1):
        """Field sum along an axis."""
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            return _out(a.sum(axis=axis) % self.p)
        a = np.moveaxis(a, axis, -1)
        return _out(self.from_digits(self.to_digits(a).sum(axis=-2) % self.p))

    # -- quadratic character -------------------------------------------------
    @cached_property
    def square_mask(self) -> np.ndarray:
        """Boolean mask over elements: True exactly on SQ (nonzero squares)."""
        mask = np.zeros(self.q, dtype=bool)
        mask[np.asarray(self.square(self.elements()[1:]))] = True
        mask.setflags(write=False)
        return mask

    @cached_property
    def smallest_nonsquare(self) -> int:
        return int(np.flatnonzero(~self.square_mask[1:])[0]) + 1

    def is_square(self, a):
        """True on SQ; False on 0 and on non-squares."""
        return _out(self.square_mask[np.asarray(a, dtype=np.int64)])


def _out(x):
    x = np.asarray(x)
    return x.item() if x.ndim == 0 else x


@dataclass(frozen=True)
class FieldElem:
    """Operator-friendly wrapper around a canonical element index."""

    ctx: FieldCtx
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise ValueError("mixed field contexts")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.ctx.from_int(int(other))
        return NotImplemented

    def _wrap(self, v) -> FieldElem:
        return FieldElem(self.ctx, int(v))

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.ctx.div(self.value, o))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.value))

    def __pow__(self, n: int):
        return self._wrap(self.ctx.pow(self.value, n))

    def inv(self) -> FieldElem:
        return self._wrap(self.ctx.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value}@F{self.ctx.q}"


def make_field(p: int, e: int = 1, max_order: int = MAX_ORDER) -> FieldCtx:
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if p == 2:
        raise ValueError("characteristic 2 is not supported; q must be odd")
    if e < 1:
        raise ValueError(f"extension degree must be >= 1, got {e}")
    if p**e > max_order:
        raise ValueError(f"q={p}^{e} exceeds the maximum order {max_order}")
    if e == 1:
        return FieldCtx(p, 1)
    modulus = smallest_irreducible(p, e)
    assert is_irreducible(modulus, p)
    return FieldCtx(p, e, modulus)


def nonzero_squares(ctx: FieldCtx) -> frozenset[int]:
    return frozenset(int(x) for x in np.flatnonzero(ctx.square_mask))


def minus_one_is_square(ctx: FieldCtx) -> bool:
    return bool(ctx.square_mask[ctx.neg(1)])
