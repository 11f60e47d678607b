"""
Index codes with side-information errors: confusion sets, validity, cycles,
optimal codelength, side-information edge deletion, and independent components.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Iterator, Mapping, Sequence

from . import linalg
from .codes import LINEAR, IndexCode
from .coloring import greedy_clique, k_coloring
from .config import enum_limit
from .errors import DimensionMismatch, LimitExceeded, PreconditionError, TooManyDeletions
from .field import FieldSpec, SymbolVector, index_vector, vector_index
from .model import IndexInstance, Partition


def _require(what: str, cost: int, limit: int | None) -> None:
    lim = enum_limit(limit)
    if cost > lim:
        raise LimitExceeded(what, cost, lim)


def receiver_confuses(z: Sequence[int], wanted: Sequence[int], side: Sequence[int], delta: int) -> bool:
    """z lies in I_i: some wanted coordinate is nonzero and at most 2*delta side coordinates are."""
    if not any(z[j] for j in wanted):
        return False
    bound = 2 * delta
    w = 0
    for j in side:
        if z[j]:
            w += 1
            if w > bound:
                return False
    return True


def in_confusion_set(inst: IndexInstance, z: Sequence[int]) -> bool:
    return any(receiver_confuses(z, w, s, d) for w, s, d in inst.index_sets)


@dataclass(frozen=True)
class ConfusionSet:
    field: FieldSpec
    n: int
    vectors: frozenset[SymbolVector]
    tags: Mapping[SymbolVector, tuple[str, ...]]  # vector -> receivers whose I_i contains it

    def __contains__(self, z) -> bool:
        return tuple(z) in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def for_receiver(self, rid: str) -> frozenset[SymbolVector]:
        return frozenset(z for z, t in self.tags.items() if rid in t)


def confusion_set(inst: IndexInstance, limit: int | None = None) -> ConfusionSet:
    q, n = inst.field.q, inst.n
    _require("confusion set", q**n, limit)
    sets = inst.index_sets
    ids = [r.id for r in inst.receivers]
    tags: dict[SymbolVector, tuple[str, ...]] = {}
    for z in itertools.product(range(q), repeat=n):
        hit = tuple(rid for rid, (w, s, d) in zip(ids, sets) if receiver_confuses(z, w, s, d))
        if hit:
            tags[z] = hit
    return ConfusionSet(inst.field, n, frozenset(tags), tags)


# --------------------------------------------------------------------------
# validity


@dataclass(frozen=True)
class ICSIEVerdict:
    valid: bool
    witness_z: SymbolVector | None = None
    witness_x: SymbolVector | None = None

    def __bool__(self):
        return self.valid


def validate_icsie(inst: IndexInstance, code: IndexCode, limit: int | None = None) -> ICSIEVerdict:
    """
    Pairwise separation of confusable messages. Linear codes: z G != 0 for
    every z in I. Table codes: no two messages with the same codeword differ
    by an element of I.
    """
    if code.n != inst.n:
        raise DimensionMismatch(f"code has n={code.n}, instance has n={inst.n}")
    F, q, n = inst.field, inst.field.q, inst.n
    _require("icsie validation", q**n, limit)
    if code.kind == LINEAR:
        G, N = code.generator, code.length
        for z in itertools.product(range(q), repeat=n):
            if in_confusion_set(inst, z) and not any(linalg.vec_mat(F, z, G, N)):
                return ICSIEVerdict(False, z)
        return ICSIEVerdict(True)

    conf = confusion_set(inst, limit)
    classes: dict[SymbolVector, list[SymbolVector]] = {}
    for i, row in enumerate(code.table):
        classes.setdefault(row, []).append(index_vector(i, q, n))
    zs = sorted(conf.vectors)
    for members in classes.values():
        if len(members) < 2:
            continue
        if len(members) <= len(zs):
            for a, b in itertools.combinations(members, 2):
                z = F.vsub(b, a)
                if z in conf.vectors:
                    return ICSIEVerdict(False, z, a)
        else:
            mset = set(members)
            for x in members:
                for z in zs:
                    if F.vadd(x, z) in mset:
                        return ICSIEVerdict(False, z, x)
    return ICSIEVerdict(True)


def identity_code(inst: IndexInstance) -> IndexCode:
    n = inst.n
    return IndexCode.linear(inst.field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)


# --------------------------------------------------------------------------
# delta_s-cycles


@dataclass(frozen=True)
class CycleWitness:
    messages: tuple[str, ...]
    receivers: tuple[str, ...]
    counts: Mapping[str, int]  # receiver -> |X_i & B|


def in_phi(inst: IndexInstance, subset: set[int]) -> bool:
    for w, s, d in inst.index_sets:
        if any(j in subset for j in w):
            if sum(1 for j in s if j in subset) < 2 * d + 1:
                return False
    return True


MAX_CYCLE_N = 20


def find_delta_s_cycle(inst: IndexInstance) -> CycleWitness | None:
    """Smallest (then lexicographically first) nonempty B in Phi, or None if acyclic."""
    n = inst.n
    if n > MAX_CYCLE_N:
        raise LimitExceeded("delta_s-cycle subset search", 2**n, 2**MAX_CYCLE_N)
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            b = set(combo)
            if in_phi(inst, b):
                recs, counts = [], {}
                for r, (w, s, d) in zip(inst.receivers, inst.index_sets):
                    if any(j in b for j in w):
                        recs.append(r.id)
                        counts[r.id] = sum(1 for j in s if j in b)
                return CycleWitness(tuple(inst.messages[j] for j in combo), tuple(recs), counts)
    return None


# --------------------------------------------------------------------------
# optimal codelength


@dataclass(frozen=True)
class OptimalCode:
    length: int
    code: IndexCode
    mode: str
    kernel_dim: int | None = None  # linear mode: d*
    colors: int | None = None  # nonlinear mode: number of colors used by the code


LINEAR_SEARCH_LIMIT = 2**12
NONLINEAR_SEARCH_LIMIT = 512


def _annihilator_code(F: FieldSpec, n: int, basis: list[SymbolVector]) -> IndexCode:
    cols = linalg.nullspace(F, basis, n) if basis else [
        tuple(1 if j == i else 0 for j in range(n)) for i in range(n)
    ]
    N = len(cols)
    G = tuple(tuple(cols[c][i] for c in range(N)) for i in range(n))
    return IndexCode(F, n, N, LINEAR, generator=G)


def max_free_subspace(inst: IndexInstance, conf: ConfusionSet | None = None) -> list[SymbolVector]:
    """Basis of a maximum-dimension subspace W with W & I empty."""
    F, q, n = inst.field, inst.field.q, inst.n
    conf = conf or confusion_set(inst)
    bad = conf.vectors
    cand = [z for z in itertools.product(range(q), repeat=n) if any(z) and z not in bad]
    # scalar multiples span the same line; keep one normalized representative
    lines = [z for z in cand if z[next(i for i, x in enumerate(z) if x)] == 1]
    best: list[SymbolVector] = []
    seen: set[frozenset] = set()
    upper = int(math.floor(math.log(len(cand) + 1, q) + 1e-9)) if cand else 0

    def grow(basis: list[SymbolVector], span: set[SymbolVector]):
        nonlocal best
        if len(basis) > len(best):
            best = list(basis)
        if len(best) >= upper:
            return
        for v in lines:
            if v in span:
                continue
            new = set(span)
            ok = True
            for w in span:
                for c in range(1, q):
                    u = F.vadd(w, F.vscale(c, v))
                    if u in bad:
                        ok = False
                        break
                    new.add(u)
                if not ok:
                    break
            if not ok:
                continue
            key = frozenset(new)
            if key in seen:
                continue
            seen.add(key)
            grow(basis + [v], new)
            if len(best) >= upper:
                return

    grow([], {(0,) * n})
    return best


def confusion_graph(inst: IndexInstance, conf: ConfusionSet | None = None) -> list[set[int]]:
    """Vertices are message indices; x ~ x' iff x - x' lies in I."""
    F, q, n = inst.field, inst.field.q, inst.n
    conf = conf or confusion_set(inst)
    zs = list(conf.vectors)
    adj: list[set[int]] = []
    for i in range(q**n):
        x = index_vector(i, q, n)
        adj.append({vector_index(F.vadd(x, z), q) for z in zs})
    return adj


def optimal_codelength(inst: IndexInstance, mode: str = "linear") -> OptimalCode:
    """
    Minimum codelength and a code achieving it.

    linear: n - d*, d* the largest dimension of a subspace avoiding I.
    nonlinear: smallest N with a proper q^N-coloring of the confusion graph.
    """
    F, q, n = inst.field, inst.field.q, inst.n
    if mode == "linear":
        _require("linear codelength search", q**n, LINEAR_SEARCH_LIMIT)
        basis = max_free_subspace(inst)
        code = _annihilator_code(F, n, basis)
        return OptimalCode(code.length, code, mode, kernel_dim=len(basis))
    if mode == "nonlinear":
        _require("nonlinear codelength search", q**n, NONLINEAR_SEARCH_LIMIT)
        if n == 0:
            return OptimalCode(0, IndexCode.from_table(F, 0, [()]), mode, colors=1)
        adj = confusion_graph(inst)
        clique = greedy_clique(adj)
        N = _ceil_log(len(clique), q)
        while True:
            col = k_coloring(adj, q**N, clique[: q**N])
            if col is not None:
                rows = [index_vector(c, q, N) for c in col]
                return OptimalCode(N, IndexCode.from_table(F, n, rows), mode, colors=len(set(col)))
            N += 1
    raise ValueError(f"unknown mode {mode!r}")


def _ceil_log(x: int, q: int) -> int:
    N = 0
    while q**N < x:
        N += 1
    return N


def has_code_of_length(inst: IndexInstance, length: int, mode: str = "nonlinear") -> bool:
    """Whether some valid code of the given length exists."""
    if length < 0:
        return False
    if mode == "linear":
        return optimal_codelength(inst, "linear").length <= length
    q = inst.field.q
    _require("nonlinear codelength search", q**inst.n, NONLINEAR_SEARCH_LIMIT)
    if inst.n == 0:
        return True
    adj = confusion_graph(inst)
    clique = greedy_clique(adj)
    if len(clique) > q**length:
        return False
    return k_coloring(adj, q**length, clique) is not None


# --------------------------------------------------------------------------
# side-information edge deletion


def delete_side_info_edges(inst: IndexInstance, deletions: Mapping[str, Sequence[str]]) -> IndexInstance:
    """Conventional instance with the given side-information edges removed and every delta 0."""
    recs = []
    rmap = inst.receiver_map
    for rid in deletions:
        if rid not in rmap:
            raise PreconditionError(f"unknown receiver {rid}")
    for r in inst.receivers:
        dels = set(deletions.get(r.id, ()))
        allowed = min(2 * r.delta, len(r.side_info))
        if len(dels) > allowed:
            raise TooManyDeletions(r.id, len(dels), allowed)
        missing = dels - set(r.side_info)
        if missing:
            raise PreconditionError(f"receiver {r.id} does not hold {sorted(missing)}")
        recs.append(replace(r, side_info=tuple(x for x in r.side_info if x not in dels), delta=0))
    return replace(inst, receivers=tuple(recs))


def admissible_deletions(inst: IndexInstance) -> Iterator[dict[str, tuple[str, ...]]]:
    """Every per-receiver deletion choice allowed by the min(2 delta, |X_i|) bound."""
    per = []
    for r in inst.receivers:
        k = min(2 * r.delta, len(r.side_info))
        opts = [c for size in range(k + 1) for c in itertools.combinations(r.side_info, size)]
        per.append(opts)
    for choice in itertools.product(*per):
        yield {r.id: c for r, c in zip(inst.receivers, choice) if c}


# --------------------------------------------------------------------------
# independent components


def remove_component(inst: IndexInstance, e: str, receiver_id: str) -> IndexInstance:
    """Drop message e and receiver R_e; e leaves every side-information set."""
    recs = tuple(
        replace(r, side_info=tuple(x for x in r.side_info if x != e))
        for r in inst.receivers
        if r.id != receiver_id
    )
    return IndexInstance(inst.field, tuple(x for x in inst.messages if x != e), recs)


def is_independent_component(
    inst: IndexInstance,
    e: str,
    partition: Partition,
    target: int | None = None,
    mode: str = "nonlinear",
) -> bool:
    """
    True iff removing R_e and the message e leaves an instance with a valid
    code of length target - 1 (target defaults to |E|).
    """
    if e not in partition.e_receivers:
        raise PreconditionError(f"{e} is not in the E-part of the partition")
    target = len(partition.e_messages) if target is None else target
    reduced = remove_component(inst, e, partition.e_receivers[e])
    return has_code_of_length(reduced, target - 1, mode)
