"""
Finite-field arithmetic over GF(q), q = p^k <= 256, backed by full lookup tables.

Element codes are the integers 0..q-1. For q = p^k an element is the polynomial
sum(c_i x^i) over GF(p) with code sum(c_i p^i), reduced modulo a fixed monic
irreducible polynomial of degree k: the one whose non-leading coefficients give
the smallest code (x^2+x+1 for GF(4), x^3+x+1 for GF(8), x^4+x+1 for GF(16), ...).
Code 0 is the additive identity and code 1 the multiplicative identity.

Vectors are plain tuples of element codes; the lexicographic position of a
vector in F_q^n (first coordinate most significant) is its *index*.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .config import enum_limit
from .errors import LimitExceeded, NotPrimePower, TooLarge

MAX_Q = 256

SymbolVector = tuple[int, ...]


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


def _digits(a: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(a % p)
        a //= p
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    return sum(d * p**i for i, d in enumerate(ds))


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # mod is monic
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for j in range(k + 1):
                prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
    return (prod + [0] * k)[:k]


def _is_irreducible(poly: list[int], p: int) -> bool:
    k = len(poly) - 1
    for deg in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            div = list(low) + [1]
            rem = list(poly)
            for d in range(k, deg - 1, -1):
                c = rem[d]
                if c:
                    for j in range(deg + 1):
                        rem[d - deg + j] = (rem[d - deg + j] - c * div[j]) % p
            if not any(rem[:deg]):
                return False
    return True


def irreducible_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Coefficients (c_0, ..., c_{k-1}, 1) of the fixed modulus for GF(p^k)."""
    for code in range(p**k):
        poly = _digits(code, p, k) + [1]
        if k == 1 or (poly[0] != 0 and _is_irreducible(poly, p)):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True, eq=False)
class FieldSpec:
    q: int
    characteristic: int
    degree: int
    modulus: tuple[int, ...]
    add_table: tuple[tuple[int, ...], ...]
    mul_table: tuple[tuple[int, ...], ...]
    neg_table: tuple[int, ...]
    inv_table: tuple[int, ...]  # inv_table[0] is 0 by convention

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.q == other.q and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.q, self.modulus))

    def __repr__(self):
        return f"GF({self.q})"

    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    # vector helpers -------------------------------------------------------

    def vadd(self, u: Sequence[int], v: Sequence[int]) -> SymbolVector:
        t = self.add_table
        return tuple(t[a][b] for a, b in zip(u, v))

    def vsub(self, u: Sequence[int], v: Sequence[int]) -> SymbolVector:
        t, n = self.add_table, self.neg_table
        return tuple(t[a][n[b]] for a, b in zip(u, v))

    def vscale(self, c: int, v: Sequence[int]) -> SymbolVector:
        row = self.mul_table[c]
        return tuple(row[a] for a in v)

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        acc = 0
        add, mul = self.add_table, self.mul_table
        for a, b in zip(u, v):
            if a and b:
                acc = add[acc][mul[a][b]]
        return acc

    def check_vector(self, v: Sequence[int]) -> SymbolVector:
        v = tuple(v)
        for x in v:
            if not (isinstance(x, int) and 0 <= x < self.q):
                raise ValueError(f"{x!r} is not an element code of GF({self.q})")
        return v


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    """Build GF(q) with complete operation tables."""
    if not isinstance(q, int) or q < 2:
        raise NotPrimePower(f"{q!r} is not a prime power")
    if q > MAX_Q:
        raise TooLarge(f"q = {q} exceeds the supported maximum {MAX_Q}")
    pk = _prime_power(q)
    if pk is None:
        raise NotPrimePower(f"{q} is not a prime power")
    p, k = pk
    mod = irreducible_polynomial(p, k)
    digits = [_digits(a, p, k) for a in range(q)]
    add = tuple(
        tuple(_undigits([(x + y) % p for x, y in zip(digits[a], digits[b])], p) for b in range(q))
        for a in range(q)
    )
    if k == 1:
        mul = tuple(tuple((a * b) % p for b in range(q)) for a in range(q))
    else:
        mul = tuple(
            tuple(_undigits(_poly_mulmod(digits[a], digits[b], list(mod), p), p) for b in range(q))
            for a in range(q)
        )
    neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
    inv = tuple([0] + [next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q)])
    return FieldSpec(q, p, k, mod, add, mul, neg, inv)


def hamming_weight(v: Sequence[int]) -> int:
    return sum(1 for x in v if x)


def vector_index(v: Sequence[int], q: int) -> int:
    idx = 0
    for x in v:
        idx = idx * q + x
    return idx


def index_vector(idx: int, q: int, n: int) -> SymbolVector:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        idx, out[i] = divmod(idx, q)
    return tuple(out)


def _check_cost(what: str, cost: int, limit: int | None) -> None:
    lim = enum_limit(limit)
    if cost > lim:
        raise LimitExceeded(what, cost, lim)


def enumerate_vectors(field: FieldSpec, n: int, limit: int | None = None) -> Iterator[SymbolVector]:
    """All q^n vectors in lexicographic order. The limit is checked eagerly."""
    _check_cost(f"enumerate F_{field.q}^{n}", field.q**n, limit)
    return itertools.product(range(field.q), repeat=n)


def count_error_patterns(q: int, n: int, delta: int) -> int:
    return sum(comb(n, w) * (q - 1) ** w for w in range(min(delta, n) + 1))


def enumerate_error_patterns(
    field: FieldSpec, n: int, delta: int, limit: int | None = None
) -> Iterator[SymbolVector]:
    """All vectors of weight <= delta, ordered by weight, then support, then values."""
    _check_cost(
        f"error patterns (q={field.q}, n={n}, delta={delta})",
        count_error_patterns(field.q, n, delta),
        limit,
    )
    return _patterns(field.q, n, delta)


def _patterns(q: int, n: int, delta: int) -> Iterator[SymbolVector]:
    nonzero = range(1, q)
    for w in range(min(delta, n) + 1):
        for support in itertools.combinations(range(n), w):
            for vals in itertools.product(nonzero, repeat=w):
                v = [0] * n
                for pos, x in zip(support, vals):
                    v[pos] = x
                yield tuple(v)


@lru_cache(maxsize=4096)
def error_patterns(q: int, n: int, delta: int) -> tuple[SymbolVector, ...]:
    """Cached tuple form of the weight-<=delta patterns, for hot loops at tiny scale."""
    return tuple(_patterns(q, n, delta))
