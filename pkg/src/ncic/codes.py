"""
Local functions, network codes, index codes, and canonical decoder derivation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from . import linalg
from .config import TABLE_LIMIT, enum_limit
from .errors import Ambiguous, ArityMismatch, DimensionMismatch, LimitExceeded
from .field import (
    FieldSpec,
    SymbolVector,
    error_patterns,
    count_error_patterns,
    index_vector,
    vector_index,
)
from .model import IndexInstance, NetworkInstance, Receiver

LINEAR = "linear"
TABLE = "table"
PROCEDURAL = "procedural"


# --------------------------------------------------------------------------
# procedural decoders


def _two_source_majority(F: FieldSpec, x: Sequence[int]) -> SymbolVector:
    # inputs: (s1, s1, s2, s1+s2, s1+s2), at most one of them corrupted
    a1, a2, b, c1, c2 = x
    if c1 != c2:
        return (a1, b)
    if a1 == a2:
        return (a1, F.sub(c1, a1))
    return (F.sub(c1, b), b)


def _majority(F: FieldSpec, x: Sequence[int]) -> SymbolVector:
    counts: dict[int, int] = {}
    for v in x:
        counts[v] = counts.get(v, 0) + 1
    best = max(counts.values())
    return (min(v for v, c in counts.items() if c == best),)


PROCEDURES: dict[str, tuple[Callable[[FieldSpec, Sequence[int]], SymbolVector], int | None, int]] = {
    # name -> (function, arity or None for any, outputs)
    "algorithm1-majority": (_two_source_majority, 5, 2),
    "majority": (_majority, None, 1),
}


# --------------------------------------------------------------------------
# local functions


@dataclass(frozen=True)
class LocalFunction:
    """
    A map F_q^arity -> F_q^outputs given as a coefficient matrix (``coeffs``,
    one row per output), an explicit table (``table``, one row of outputs per
    input index in lexicographic order), or a registered procedure name.
    """

    field: FieldSpec
    arity: int
    kind: str
    outputs: int = 1
    coeffs: tuple[tuple[int, ...], ...] = ()
    table: tuple[tuple[int, ...], ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.kind == LINEAR:
            if len(self.coeffs) != self.outputs or any(len(r) != self.arity for r in self.coeffs):
                raise ArityMismatch("linear coefficient rows must match outputs x arity")
        elif self.kind == TABLE:
            if len(self.table) != self.field.q**self.arity:
                raise ArityMismatch(
                    f"table has {len(self.table)} rows, expected {self.field.q}^{self.arity}"
                )
            if any(len(r) != self.outputs for r in self.table):
                raise ArityMismatch("table rows must have one entry per output")
        elif self.kind == PROCEDURAL:
            if self.name not in PROCEDURES:
                raise ValueError(f"unknown procedure {self.name!r}")
            _, ar, outs = PROCEDURES[self.name]
            if (ar is not None and ar != self.arity) or outs != self.outputs:
                raise ArityMismatch(f"procedure {self.name} has fixed shape")
        else:
            raise ValueError(f"unknown representation {self.kind!r}")

    def __call__(self, inputs: Sequence[int]) -> SymbolVector:
        if len(inputs) != self.arity:
            raise ArityMismatch(f"expected {self.arity} inputs, got {len(inputs)}")
        if self.kind == LINEAR:
            return tuple(self.field.dot(row, inputs) for row in self.coeffs)
        if self.kind == TABLE:
            return self.table[vector_index(inputs, self.field.q)]
        return PROCEDURES[self.name][0](self.field, inputs)

    def to_table(self) -> "LocalFunction":
        if self.kind == TABLE:
            return self
        q = self.field.q
        if q**self.arity > TABLE_LIMIT:
            raise LimitExceeded("table materialization", q**self.arity, TABLE_LIMIT)
        rows = tuple(self(index_vector(i, q, self.arity)) for i in range(q**self.arity))
        return LocalFunction(self.field, self.arity, TABLE, self.outputs, table=rows)

    def as_linear(self) -> "LocalFunction | None":
        """Equivalent LINEAR form if this function is linear, else None."""
        if self.kind == LINEAR:
            return self
        F, k = self.field, self.arity
        if any(self((0,) * k)):
            return None
        unit = [tuple(1 if j == i else 0 for j in range(k)) for i in range(k)]
        cols = [self(u) for u in unit]
        coeffs = tuple(tuple(cols[i][o] for i in range(k)) for o in range(self.outputs))
        cand = LocalFunction(F, k, LINEAR, self.outputs, coeffs=coeffs)
        if F.q**k > TABLE_LIMIT:
            return None
        for i in range(F.q**k):
            x = index_vector(i, F.q, k)
            if cand(x) != self(x):
                return None
        return cand


def linear(F: FieldSpec, coeffs: Sequence[int] | Sequence[Sequence[int]]) -> LocalFunction:
    """LINEAR function; a flat coefficient list gives a single-output function."""
    if coeffs and isinstance(coeffs[0], int):
        rows = (tuple(coeffs),)
    else:
        rows = tuple(tuple(r) for r in coeffs)
    arity = len(rows[0]) if rows else 0
    return LocalFunction(F, arity, LINEAR, len(rows), coeffs=rows)


def from_table(F: FieldSpec, arity: int, table: Sequence, outputs: int | None = None) -> LocalFunction:
    rows = tuple((r,) if isinstance(r, int) else tuple(r) for r in table)
    outs = outputs if outputs is not None else (len(rows[0]) if rows else 1)
    return LocalFunction(F, arity, TABLE, outs, table=rows)


def procedural(F: FieldSpec, name: str, arity: int | None = None) -> LocalFunction:
    if name not in PROCEDURES:
        raise ValueError(f"unknown procedure {name!r}; known: {', '.join(PROCEDURES)}")
    _, ar, outs = PROCEDURES[name]
    return LocalFunction(F, ar if ar is not None else arity, PROCEDURAL, outs, name=name)


def eval_local(f: LocalFunction, inputs: Sequence[int]):
    """Evaluate; single-output functions return a bare symbol."""
    out = f(tuple(inputs))
    return out[0] if f.outputs == 1 else out


# --------------------------------------------------------------------------
# network codes


@dataclass(frozen=True)
class NetworkCode:
    encoders: Mapping[str, LocalFunction]
    decoders: Mapping[str, LocalFunction]


def check_network_code_shape(inst: NetworkInstance, code: NetworkCode) -> None:
    for e in inst.edge_ids:
        f = code.encoders.get(e)
        if f is None:
            raise ArityMismatch(f"no encoder for edge {e}")
        if f.arity != len(inst.inputs(e)) or f.outputs != 1:
            raise ArityMismatch(f"encoder of {e} has shape {f.arity}->{f.outputs}")
    for t, dem in inst.terminals.items():
        f = code.decoders.get(t)
        if f is None:
            raise ArityMismatch(f"no decoder for terminal {t}")
        if f.arity != len(inst.terminal_inputs(t)) or f.outputs != len(dem):
            raise ArityMismatch(f"decoder of {t} has shape {f.arity}->{f.outputs}")


def eval_global(inst: NetworkInstance, code: NetworkCode, x_s: Sequence[int]) -> dict[str, int]:
    """Error-free symbol on every edge for source messages ``x_s`` (in ``inst.messages`` order)."""
    if len(x_s) != len(inst.messages):
        raise ArityMismatch(f"expected {len(inst.messages)} source symbols, got {len(x_s)}")
    vals: dict[str, int] = dict(zip(inst.messages, x_s))
    for e in inst.topological_edges():
        ins = tuple(vals[i] for i in inst.inputs(e))
        vals[e] = code.encoders[e](ins)[0]
    return {e: vals[e] for e in inst.edge_ids}


def terminal_outputs(inst: NetworkInstance, code: NetworkCode, x_s: Sequence[int]) -> dict[str, SymbolVector]:
    vals = eval_global(inst, code, x_s)
    return {t: code.decoders[t](tuple(vals[e] for e in inst.terminal_inputs(t))) for t in inst.terminals}


# --------------------------------------------------------------------------
# index codes


@dataclass(frozen=True)
class IndexCode:
    """
    An encoder F_q^n -> F_q^N. LINEAR codes store the n x N generator
    (codeword = x G); TABLE codes store one codeword per message index.
    """

    field: FieldSpec
    n: int
    length: int
    kind: str
    generator: tuple[tuple[int, ...], ...] = ()
    table: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.kind == LINEAR:
            if len(self.generator) != self.n or any(len(r) != self.length for r in self.generator):
                raise DimensionMismatch(f"generator must be {self.n} x {self.length}")
        elif self.kind == TABLE:
            if len(self.table) != self.field.q**self.n or any(len(r) != self.length for r in self.table):
                raise DimensionMismatch(f"table must have {self.field.q}^{self.n} rows of length {self.length}")
        else:
            raise ValueError(f"unknown representation {self.kind!r}")

    @classmethod
    def linear(cls, F: FieldSpec, generator: Sequence[Sequence[int]], length: int | None = None):
        G = tuple(tuple(r) for r in generator)
        N = length if length is not None else (len(G[0]) if G else 0)
        return cls(F, len(G), N, LINEAR, generator=G)

    @classmethod
    def from_components(cls, F: FieldSpec, n: int, components: Sequence[Sequence[int]]):
        """LINEAR code from one coefficient vector (over the n messages) per codeword symbol."""
        comps = [tuple(c) for c in components]
        G = tuple(tuple(c[i] for c in comps) for i in range(n))
        return cls(F, n, len(comps), LINEAR, generator=G)

    @classmethod
    def from_table(cls, F: FieldSpec, n: int, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(r) for r in rows)
        return cls(F, n, len(rows[0]) if rows else 0, TABLE, table=rows)

    def components(self) -> list[SymbolVector]:
        """Coefficient vector of each codeword symbol (LINEAR only)."""
        if self.kind != LINEAR:
            raise ValueError("components are defined for linear codes")
        return [tuple(self.generator[i][j] for i in range(self.n)) for j in range(self.length)]

    def encode(self, x: Sequence[int]) -> SymbolVector:
        if len(x) != self.n:
            raise DimensionMismatch(f"message has {len(x)} symbols, code expects {self.n}")
        if self.kind == TABLE:
            return self.table[vector_index(x, self.field.q)]
        return linalg.vec_mat(self.field, x, self.generator, self.length)

    def to_table(self, limit: int | None = None) -> "IndexCode":
        if self.kind == TABLE:
            return self
        q = self.field.q
        cost = q**self.n
        if cost > enum_limit(limit):
            raise LimitExceeded("index code table", cost, enum_limit(limit))
        rows = tuple(self.encode(index_vector(i, q, self.n)) for i in range(cost))
        return IndexCode.from_table(self.field, self.n, rows)

    def as_linear(self) -> "IndexCode | None":
        if self.kind == LINEAR:
            return self
        F, n = self.field, self.n
        if any(self.table[0]):
            return None
        G = tuple(self.encode(tuple(1 if j == i else 0 for j in range(n))) for i in range(n))
        cand = IndexCode(F, n, self.length, LINEAR, generator=G)
        for i, row in enumerate(self.table):
            if cand.encode(index_vector(i, F.q, n)) != row:
                return None
        return cand

    def preimages(self, sigma: Sequence[int], limit: int | None = None) -> list[SymbolVector]:
        """All messages encoded to ``sigma``."""
        F, n = self.field, self.n
        sigma = tuple(sigma)
        if self.kind == LINEAR:
            z0 = linalg.solve_left(F, self.generator, n, self.length, sigma)
            if z0 is None:
                return []
            ker = linalg.left_kernel(F, self.generator, n, self.length)
            if F.q ** len(ker) > enum_limit(limit):
                raise LimitExceeded("preimage enumeration", F.q ** len(ker), enum_limit(limit))
            return sorted(F.vadd(z0, k) for k in linalg.span(F, ker, n))
        return [index_vector(i, F.q, n) for i, row in enumerate(self.table) if row == sigma]


def _receiver(inst: IndexInstance, receiver: Receiver | str) -> Receiver:
    return inst.receiver_map[receiver] if isinstance(receiver, str) else receiver


def derive_canonical_decoder(
    inst: IndexInstance,
    code: IndexCode,
    receiver: Receiver | str,
    sigma: Sequence[int] | None = None,
    limit: int | None = None,
) -> LocalFunction:
    """
    Decoder of ``receiver`` as an explicit table, built from the consistency sets.

    Without ``sigma`` the table input is (codeword, side info); with ``sigma``
    the codeword is fixed and the input is the side info alone. Inputs that no
    (message, corruption) pair can produce decode to zeros.
    """
    r = _receiver(inst, receiver)
    F, q = inst.field, inst.field.q
    if code.n != inst.n:
        raise DimensionMismatch(f"code has n={code.n}, instance has n={inst.n}")
    pos = inst.position
    w_idx = [pos[x] for x in r.wants]
    s_idx = [pos[x] for x in r.side_info]
    k = len(s_idx)
    arity = k if sigma is not None else code.length + k
    if q**arity > TABLE_LIMIT:
        raise LimitExceeded("decoder table", q**arity, TABLE_LIMIT)
    pats = error_patterns(q, k, r.delta)
    if sigma is not None:
        sigma = tuple(sigma)
        msgs = code.preimages(sigma, limit)
        cost = len(msgs) * len(pats)
    else:
        cost = q**inst.n * count_error_patterns(q, k, r.delta)
        msgs = None
    lim = enum_limit(limit)
    if cost > lim:
        raise LimitExceeded("decoder derivation", cost, lim)
    if msgs is None:
        msgs = (index_vector(i, q, inst.n) for i in range(q**inst.n))

    seen: dict[int, SymbolVector] = {}
    for x in msgs:
        want = tuple(x[i] for i in w_idx)
        side = tuple(x[i] for i in s_idx)
        prefix = () if sigma is not None else code.encode(x)
        for p in pats:
            y = F.vadd(side, p)
            key = vector_index(prefix + y, q)
            prev = seen.get(key)
            if prev is None:
                seen[key] = want
            elif prev != want:
                cw = sigma if sigma is not None else prefix
                raise Ambiguous(cw, y, (prev, want))
    zero = (0,) * len(w_idx)
    rows = tuple(seen.get(i, zero) for i in range(q**arity))
    return LocalFunction(F, arity, TABLE, len(w_idx), table=rows)
