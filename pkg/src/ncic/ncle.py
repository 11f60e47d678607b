"""
Network codes with link errors: validity, a direct exhaustive code search,
redundant links, and conventional-instance derivation.

Robustness is checked per function: F_e must return the same symbol for a
base input and every corruption of it of weight <= delta_e. In REACHABLE mode
the base inputs are those produced by some source message vector under the
code itself; ALL mode quantifies over every input vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Iterable, Iterator, Sequence

from .codes import TABLE, LocalFunction, NetworkCode, check_network_code_shape, eval_global
from .config import enum_limit
from .errors import InvalidInstance, LimitExceeded, PreconditionError
from .field import SymbolVector, error_patterns, index_vector
from .model import NetworkInstance, validate_network_instance

REACHABLE = "reachable"
ALL = "all"


@dataclass(frozen=True)
class FunctionCheck:
    ok: bool
    base: SymbolVector | None = None
    corrupted: SymbolVector | None = None
    out_base: SymbolVector | None = None
    out_corrupted: SymbolVector | None = None


@dataclass
class RobustnessReport:
    functions: dict[str, FunctionCheck] = dc_field(default_factory=dict)
    delivery_failures: list[tuple[str, SymbolVector, SymbolVector, SymbolVector]] = dc_field(
        default_factory=list
    )  # (terminal, x_s, decoded, wanted)

    @property
    def ok(self) -> bool:
        return not self.delivery_failures and all(c.ok for c in self.functions.values())


@dataclass(frozen=True)
class NCLEVerdict:
    valid: bool
    report: RobustnessReport

    def __bool__(self):
        return self.valid


def check_error_resistance(
    f: LocalFunction, delta: int, base_inputs: Iterable[Sequence[int]], limit: int | None = None
) -> FunctionCheck:
    """f(x) == f(x~) for every base x and every x~ within Hamming distance delta."""
    F = f.field
    bases = [tuple(b) for b in base_inputs]
    pats = error_patterns(F.q, f.arity, delta)
    cost = len(bases) * len(pats)
    lim = enum_limit(limit)
    if cost > lim:
        raise LimitExceeded("error-resistance check", cost, lim)
    for x in bases:
        y0 = f(x)
        for p in pats:
            if any(p):
                xt = F.vadd(x, p)
                yt = f(xt)
                if yt != y0:
                    return FunctionCheck(False, x, xt, y0, yt)
    return FunctionCheck(True)


def reachable_inputs(inst: NetworkInstance, code: NetworkCode, limit: int | None = None) -> dict[str, set]:
    """Error-free input vector of every edge and terminal function, over all source messages."""
    q, k = inst.field.q, len(inst.messages)
    lim = enum_limit(limit)
    if q**k > lim:
        raise LimitExceeded("source message enumeration", q**k, lim)
    out: dict[str, set] = {f: set() for f in inst.function_ids()}
    for x in itertools.product(range(q), repeat=k):
        vals = dict(zip(inst.messages, x))
        vals.update(eval_global(inst, code, x))
        for e in inst.edge_ids:
            out[e].add(tuple(vals[i] for i in inst.inputs(e)))
        for t in inst.terminals:
            out[t].add(tuple(vals[i] for i in inst.terminal_inputs(t)))
    return out


def validate_ncle(
    inst: NetworkInstance,
    code: NetworkCode,
    quantification: str = REACHABLE,
    limit: int | None = None,
) -> NCLEVerdict:
    """Delivery of every demand plus per-function error resistance."""
    check_network_code_shape(inst, code)
    q, k = inst.field.q, len(inst.messages)
    report = RobustnessReport()
    pos = {s: i for i, s in enumerate(inst.messages)}
    for x in itertools.product(range(q), repeat=k):
        vals = eval_global(inst, code, x)
        for t, dem in inst.terminals.items():
            got = code.decoders[t](tuple(vals[e] for e in inst.terminal_inputs(t)))
            want = tuple(x[pos[s]] for s in dem)
            if got != want:
                report.delivery_failures.append((t, x, got, want))
    if quantification == REACHABLE:
        bases = reachable_inputs(inst, code, limit)
    elif quantification == ALL:
        bases = {}
        for fid in inst.function_ids():
            ar = len(inst.inputs(fid)) if fid in inst.edge_map else len(inst.terminal_inputs(fid))
            lim = enum_limit(limit)
            if q**ar > lim:
                raise LimitExceeded(f"input enumeration for {fid}", q**ar, lim)
            bases[fid] = [index_vector(i, q, ar) for i in range(q**ar)]
    else:
        raise ValueError(f"unknown quantification {quantification!r}")
    for e in inst.edge_ids:
        report.functions[e] = check_error_resistance(code.encoders[e], inst.delta[e], bases[e], limit)
    for t in inst.terminals:
        report.functions[t] = check_error_resistance(code.decoders[t], inst.delta[t], bases[t], limit)
    return NCLEVerdict(report.ok, report)


# --------------------------------------------------------------------------
# direct code search


def _distance(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


def _components(points: Sequence[tuple], radius: int) -> list[int]:
    """Component label per point under 'Hamming distance <= radius' adjacency."""
    n = len(points)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if _distance(points[i], points[j]) <= radius:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    roots: dict[int, int] = {}
    return [roots.setdefault(find(i), len(roots)) for i in range(n)]


def _coarsenings(r: int, q: int) -> Iterator[tuple[int, ...]]:
    """Restricted-growth labelings of r items with at most q labels (set partitions)."""
    if r == 0:
        yield ()
        return

    def rec(prefix, used):
        if len(prefix) == r:
            yield tuple(prefix)
            return
        for c in range(min(used + 1, q)):
            prefix.append(c)
            yield from rec(prefix, max(used, c + 1))
            prefix.pop()

    yield from rec([0], 1)


def _reaches_terminal(inst: NetworkInstance) -> set[str]:
    useful: set[str] = set()
    changed = True
    heads_useful = set(inst.terminals)
    while changed:
        changed = False
        for e in inst.edges:
            if e.id not in useful and e.head in heads_useful:
                useful.add(e.id)
                heads_useful.add(e.tail)
                changed = True
    return useful


SEARCH_LIMIT = 2**22


def find_network_code(inst: NetworkInstance, limit: int | None = None) -> NetworkCode | None:
    """
    Exhaustive search for a valid NCLE (REACHABLE semantics), or None.

    Works on global maps x_S -> symbol. An edge can realize exactly the maps
    that are constant on the components of 'input vectors within distance
    2 delta_e'; only the partition a map induces matters downstream, so the
    search enumerates set partitions of those components into <= q blocks.
    """
    q = inst.field.q
    k = len(inst.messages)
    X = list(itertools.product(range(q), repeat=k))
    lim = enum_limit(limit)
    if len(X) > lim:
        raise LimitExceeded("source message enumeration", len(X), lim)
    nx = len(X)
    gmap: dict[str, tuple[int, ...]] = {
        s: tuple(x[i] for x in X) for i, s in enumerate(inst.messages)
    }
    order = list(inst.topological_edges())
    useful = _reaches_terminal(inst)
    pos = {s: i for i, s in enumerate(inst.messages)}

    # terminal checks fire once their last input edge is assigned
    last_needed: dict[int, list[str]] = {}
    for t in inst.terminals:
        ins = inst.terminal_inputs(t)
        step = max((order.index(e) for e in ins), default=-1)
        last_needed.setdefault(step, []).append(t)

    def terminal_ok(t) -> bool:
        ins = inst.terminal_inputs(t)
        ys = [tuple(gmap[e][i] for e in ins) for i in range(nx)]
        dem = [tuple(X[i][pos[s]] for s in inst.terminals[t]) for i in range(nx)]
        bound = 2 * inst.delta[t]
        for i in range(nx):
            for j in range(i + 1, nx):
                if dem[i] != dem[j] and _distance(ys[i], ys[j]) <= bound:
                    return False
        return True

    for t in last_needed.get(-1, []):
        if not terminal_ok(t):
            return None

    work = [0]

    def rec(step: int) -> bool:
        if step == len(order):
            return True
        e = order[step]
        ins = inst.inputs(e)
        ys = [tuple(gmap[i][x] for i in ins) for x in range(nx)]
        comp = _components(ys, 2 * inst.delta[e])
        r = max(comp) + 1
        options = _coarsenings(r, q) if e in useful else iter([(0,) * r])
        for lab in options:
            work[0] += 1
            if work[0] > SEARCH_LIMIT:
                raise LimitExceeded("network code search", work[0], SEARCH_LIMIT)
            gmap[e] = tuple(lab[c] for c in comp)
            if all(terminal_ok(t) for t in last_needed.get(step, [])) and rec(step + 1):
                return True
        del gmap[e]
        return False

    if not rec(0):
        return None
    return _code_from_global_maps(inst, X, gmap)


def _code_from_global_maps(inst: NetworkInstance, X, gmap) -> NetworkCode:
    F, q = inst.field, inst.field.q
    nx = len(X)
    pos = {s: i for i, s in enumerate(inst.messages)}

    def table_for(ins, delta, outs_of):
        ar = len(ins)
        ys = [tuple(gmap[i][x] for i in ins) for x in range(nx)]
        rows = []
        for idx in range(q**ar):
            y = index_vector(idx, q, ar)
            hit = next((x for x in range(nx) if _distance(ys[x], y) <= delta), None)
            rows.append(outs_of(hit) if hit is not None else None)
        return ar, rows

    enc = {}
    for e in inst.edge_ids:
        ar, rows = table_for(inst.inputs(e), inst.delta[e], lambda x, e=e: (gmap[e][x],))
        enc[e] = LocalFunction(F, ar, TABLE, 1, table=tuple(r or (0,) for r in rows))
    dec = {}
    for t, dem in inst.terminals.items():
        ar, rows = table_for(
            inst.terminal_inputs(t), inst.delta[t], lambda x, dem=dem: tuple(X[x][pos[s]] for s in dem)
        )
        zero = (0,) * len(dem)
        dec[t] = LocalFunction(F, ar, TABLE, len(dem), table=tuple(r or zero for r in rows))
    return NetworkCode(enc, dec)


def network_code_exists(inst: NetworkInstance, limit: int | None = None) -> bool:
    return find_network_code(inst, limit) is not None


# --------------------------------------------------------------------------
# redundant links and conventional instances


def remove_edge(inst: NetworkInstance, e: str) -> NetworkInstance:
    if e not in inst.edge_map:
        raise PreconditionError(f"unknown edge {e}")
    return remove_edges(inst, [e])


def remove_edges(inst: NetworkInstance, edges: Iterable[str], zero_delta: bool = False) -> NetworkInstance:
    gone = set(edges)
    delta = {k: (0 if zero_delta else v) for k, v in inst.delta.items() if k not in gone}
    return NetworkInstance(
        inst.field,
        inst.nodes,
        tuple(x for x in inst.edges if x.id not in gone),
        dict(inst.sources),
        dict(inst.terminals),
        delta,
    )


def is_redundant_link(
    inst: NetworkInstance, e: str, method: str = "icsie", mode: str = "nonlinear"
) -> bool:
    """
    Whether removing e keeps the instance feasible. ``method="icsie"`` decides
    feasibility through the equivalent index coding instance; ``method="direct"``
    searches network codes on the reduced network.
    """
    reduced = remove_edge(inst, e)
    if method == "direct":
        return network_code_exists(reduced)
    if method == "icsie":
        from .equiv import nc_to_ic_instance
        from .icsie import has_code_of_length

        ic, _ = nc_to_ic_instance(reduced, allow_empty_inputs=True)
        return has_code_of_length(ic, len(reduced.edges), mode)
    raise ValueError(f"unknown method {method!r}")


def derive_conventional_instances(
    inst: NetworkInstance, limit: int | None = None
) -> Iterator[NetworkInstance]:
    """
    Every instance obtained by deleting min(2 delta_v, |In(v)|) incoming links
    at each non-source node v, with all deltas reset to 0. Nodes left without
    inputs carry constants.
    """
    v_check = validate_network_instance(inst, allow_empty_inputs=True)
    if not v_check:
        raise InvalidInstance(v_check.violations)
    choices = []
    cost = 1
    for v in inst.nodes:
        if v in inst.sources:
            continue
        dv = inst.node_delta(v)
        incoming = inst.incoming(v)
        if dv is None or not incoming:
            continue
        kdel = min(2 * dv, len(incoming))
        if kdel == 0:
            continue
        choices.append(list(itertools.combinations(incoming, kdel)))
        cost *= comb(len(incoming), kdel)
    lim = enum_limit(limit)
    if cost > lim:
        raise LimitExceeded("conventional instance enumeration", cost, lim)
    return (
        remove_edges(inst, itertools.chain.from_iterable(pick), zero_delta=True)
        for pick in itertools.product(*choices)
    )
