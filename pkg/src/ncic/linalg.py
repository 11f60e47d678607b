"""Dense linear algebra over GF(q) on tuple-of-tuples matrices (rows are tuples)."""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .field import FieldSpec, SymbolVector

Matrix = tuple[tuple[int, ...], ...]


def rref(F: FieldSpec, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(F: FieldSpec, rows: Sequence[Sequence[int]]) -> int:
    return len(rref(F, rows)[1])


def nullspace(F: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> list[SymbolVector]:
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    red, pivots = rref(F, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [0] * ncols
        x[fc] = 1
        for row, pc in zip(red, pivots):
            x[pc] = F.neg(row[fc])
        basis.append(tuple(x))
    return basis


def transpose(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not rows:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*rows))


def vec_mat(F: FieldSpec, z: Sequence[int], G: Sequence[Sequence[int]], ncols: int) -> SymbolVector:
    """Row vector times matrix: z G."""
    acc = [0] * ncols
    add, mul = F.add_table, F.mul_table
    for zi, row in zip(z, G):
        if zi:
            mz = mul[zi]
            for j, g in enumerate(row):
                if g:
                    acc[j] = add[acc[j]][mz[g]]
    return tuple(acc)


def left_kernel(F: FieldSpec, G: Sequence[Sequence[int]], n: int, ncols: int) -> list[SymbolVector]:
    """Basis of {z : z G = 0} for an n x ncols matrix G."""
    return nullspace(F, transpose(G, ncols) if G else (), n)


def solve_left(
    F: FieldSpec, G: Sequence[Sequence[int]], n: int, ncols: int, sigma: Sequence[int]
) -> SymbolVector | None:
    """One solution z of z G = sigma, or None."""
    # augmented system G^T z = sigma
    aug = [list(col) + [s] for col, s in zip(transpose(G, ncols), sigma)] if n else []
    if not aug:
        return tuple([0] * n) if not any(sigma) else None
    red, pivots = rref(F, aug)
    if n in pivots:
        return None
    z = [0] * n
    for row, pc in zip(red, pivots):
        z[pc] = row[n]
    return tuple(z)


def span(F: FieldSpec, basis: Sequence[Sequence[int]], n: int) -> Iterator[SymbolVector]:
    """All q^len(basis) combinations of the basis vectors."""
    for coeffs in itertools.product(range(F.q), repeat=len(basis)):
        v = (0,) * n
        for c, b in zip(coeffs, basis):
            if c:
                v = F.vadd(v, F.vscale(c, b))
        yield v
