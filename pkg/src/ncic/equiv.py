"""
Conversions between network coding instances with link errors and index
coding instances with side-information errors, in both directions, for
instances and for codes.

Network -> index: every source message and every edge becomes a message;
edge e becomes a receiver ``R_<e>`` that holds In(e) and wants e; terminal t
becomes a receiver ``t`` that holds In(t) and wants its demands.

Index -> network: split multi-demand receivers, choose a maximum acyclic set
of unicast messages as the edge part, rewrite the problematic side-information
patterns until the graph is network-shaped, then read the network off it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .codes import (
    IndexCode,
    NetworkCode,
    check_network_code_shape,
    derive_canonical_decoder,
    eval_global,
)
from .config import enum_limit
from .errors import (
    DependenceViolated,
    InvalidIndexCode,
    InvalidInstance,
    IterationCapExceeded,
    LimitExceeded,
    NonUniqueExtension,
    PreconditionError,
    WrongLength,
)
from .field import SymbolVector, error_patterns, index_vector
from .icsie import in_confusion_set, validate_icsie
from .model import (
    Edge,
    IndexInstance,
    NetworkInstance,
    Partition,
    Receiver,
    Validation,
    _has_cycle,
    find_unicast_acyclic_partition,
    make_partition,
    split_multi_demand_receivers,
    validate_index_instance,
    validate_network_instance,
)

NC2IC = "nc2ic"
IC2NC = "ic2nc"
PRIME = "'"


def link_receiver_id(e: str) -> str:
    return f"R_{e}"


@dataclass(frozen=True)
class CaseApplication:
    """One rewrite: which case fired, on what, and what it added."""

    case: int
    subject: str  # message id (cases 1-6, 11) or representative receiver id (7-10)
    participants: tuple[str, ...]
    added_message: str
    added_receiver: str
    original: str  # message the added one stands in for
    repointed: tuple[str, ...]  # receivers whose side info now holds added_message


@dataclass
class ConversionReport:
    direction: str
    instance: object = None
    partition: Partition | None = None
    target_length: int | None = None
    message_layout: tuple[str, ...] = ()
    receiver_layout: dict[str, str] = dc_field(default_factory=dict)  # function id -> receiver id
    # index -> network only
    source_instance: IndexInstance | None = None  # split input, before rewriting
    modified: IndexInstance | None = None
    modified_partition: Partition | None = None
    dup_map: dict[str, str] = dc_field(default_factory=dict)  # duplicated link -> original link
    fresh_map: dict[str, str] = dc_field(default_factory=dict)  # added link -> source message
    added_messages: tuple[str, ...] = ()
    added_receivers: tuple[str, ...] = ()
    deleted_side_edges: tuple[tuple[str, str], ...] = ()  # (receiver, message)
    added_side_edges: tuple[tuple[str, str], ...] = ()
    log: tuple[CaseApplication, ...] = ()
    warnings: tuple[str, ...] = ()


# --------------------------------------------------------------------------
# network -> index


def nc_to_ic_instance(
    inst: NetworkInstance, allow_empty_inputs: bool = False
) -> tuple[IndexInstance, ConversionReport]:
    v = validate_network_instance(inst, allow_empty_inputs=allow_empty_inputs)
    if not v:
        raise InvalidInstance(v.violations)
    messages = tuple(inst.messages) + tuple(inst.edge_ids)
    recs = [
        Receiver(link_receiver_id(e), (e,), tuple(inst.inputs(e)), inst.delta[e])
        for e in inst.edge_ids
    ]
    recs += [
        Receiver(t, tuple(dem), tuple(inst.terminal_inputs(t)), inst.delta[t])
        for t, dem in inst.terminals.items()
    ]
    ids = [r.id for r in recs]
    if len(set(ids)) != len(ids):
        raise InvalidInstance((f"receiver id clash among {ids}",))
    ic = IndexInstance(inst.field, messages, tuple(recs))
    layout = {e: link_receiver_id(e) for e in inst.edge_ids}
    layout.update({t: t for t in inst.terminals})
    split = split_multi_demand_receivers(ic)
    report = ConversionReport(
        NC2IC,
        instance=ic,
        partition=make_partition(split, inst.edge_ids),
        target_length=len(inst.edges),
        message_layout=messages,
        receiver_layout=layout,
    )
    return ic, report


def check_proposition1(inst: IndexInstance, partition: Partition) -> Validation:
    """
    (1) the e-part subgraph is acyclic, (2) every e-message is wanted by
    exactly one receiver, (3) no link receiver mixes source and edge side
    information. Condition 3 on terminal receivers is only a warning.
    """
    bad: list[str] = []
    warn: list[str] = []
    e_set = set(partition.e_messages)
    s_set = set(partition.s_messages)
    for x in partition.e_messages:
        w = inst.wanted_by(x)
        if len(w) != 1:
            bad.append(f"condition 2: {x} is wanted by {len(w)} receivers")
    succ: dict[str, list[str]] = {x: [] for x in e_set}
    for r in inst.receivers:
        for x in r.wants:
            if x in e_set:
                for y in r.side_info:
                    if y in e_set:
                        succ[y].append(x)
    if _has_cycle(sorted(e_set), succ):
        bad.append("condition 1: directed cycle among edge messages")
    link = partition.link_receivers()
    for r in inst.receivers:
        side = set(r.side_info)
        if side & s_set and side & e_set:
            msg = f"condition 3: {r.id} holds both source and edge messages"
            (bad if r.id in link else warn).append(msg)
    return Validation(not bad, tuple(bad), tuple(warn))


@dataclass(frozen=True)
class TAllVerdict:
    redundant: bool
    witness: SymbolVector | None = None

    def __bool__(self):
        return self.redundant


def check_t_all_redundant(
    inst: IndexInstance, partition: Partition, limit: int | None = None
) -> TAllVerdict:
    """
    Whether the all-edges receiver (holds the S-part, wants the E-part, delta 0)
    adds nothing to the confusion set: every z with z_S = 0 and z_E != 0 is
    already confusable for some existing receiver. Streams over q^|E| vectors.
    """
    q = inst.field.q
    pos = inst.position
    e_idx = [pos[x] for x in partition.e_messages]
    lim = enum_limit(limit)
    if q ** len(e_idx) > lim:
        raise LimitExceeded("t_all inclusion check", q ** len(e_idx), lim)
    z = [0] * inst.n
    for vals in itertools.product(range(q), repeat=len(e_idx)):
        if not any(vals):
            continue
        for i, v in zip(e_idx, vals):
            z[i] = v
        if not in_confusion_set(inst, z):
            return TAllVerdict(False, tuple(z))
    return TAllVerdict(True)


# --------------------------------------------------------------------------
# code conversion


def global_maps(inst: NetworkInstance, code: NetworkCode, limit: int | None = None) -> dict[str, tuple[int, ...]]:
    """F-bar for every edge as a tuple over source vectors in lexicographic order."""
    q, k = inst.field.q, len(inst.messages)
    lim = enum_limit(limit)
    if q**k > lim:
        raise LimitExceeded("source message enumeration", q**k, lim)
    cols: dict[str, list[int]] = {e: [] for e in inst.edge_ids}
    for x in itertools.product(range(q), repeat=k):
        for e, v in eval_global(inst, code, x).items():
            cols[e].append(v)
    return {e: tuple(v) for e, v in cols.items()}


def _linear_global(inst: NetworkInstance, code: NetworkCode) -> dict[str, tuple[int, ...]] | None:
    """Global coefficient vector over the source messages, if every encoder is linear."""
    F = inst.field
    k = len(inst.messages)
    vec: dict[str, tuple[int, ...]] = {
        s: tuple(1 if j == i else 0 for j in range(k)) for i, s in enumerate(inst.messages)
    }
    for e in inst.topological_edges():
        lin = code.encoders[e].as_linear()
        if lin is None:
            return None
        acc = (0,) * k
        for c, i in zip(lin.coeffs[0], inst.inputs(e)):
            acc = F.vadd(acc, F.vscale(c, vec[i]))
        vec[e] = acc
    return {e: vec[e] for e in inst.edge_ids}


def nc_code_to_ic_code(
    inst: NetworkInstance,
    code: NetworkCode,
    edges: Sequence[str] | None = None,
    messages: Sequence[str] | None = None,
    limit: int | None = None,
) -> IndexCode:
    """
    Component for edge e: X^_e + F-bar_e(X^_S). Linear encoders give a LINEAR
    code. ``edges`` selects and orders components (default: all edges);
    ``messages`` is the message order of the target instance (default: the
    converted layout, sources then edges).
    """
    check_network_code_shape(inst, code)
    F, q = inst.field, inst.field.q
    edges = tuple(inst.edge_ids if edges is None else edges)
    messages = tuple(tuple(inst.messages) + tuple(inst.edge_ids) if messages is None else messages)
    pos = {x: i for i, x in enumerate(messages)}
    n = len(messages)
    s_pos = [pos[s] for s in inst.messages]
    lin = _linear_global(inst, code)
    if lin is not None:
        comps = []
        for e in edges:
            c = [0] * n
            c[pos[e]] = 1
            for j, a in zip(s_pos, lin[e]):
                c[j] = F.add(c[j], a)
            comps.append(c)
        return IndexCode.from_components(F, n, comps)
    gm = global_maps(inst, code, limit)
    lim = enum_limit(limit)
    if q**n > lim:
        raise LimitExceeded("index code table", q**n, lim)
    rows = []
    for i in range(q**n):
        x = index_vector(i, q, n)
        xs = 0
        for j in s_pos:
            xs = xs * q + x[j]
        rows.append(tuple(F.add(x[pos[e]], gm[e][xs]) for e in edges))
    return IndexCode.from_table(F, n, rows)


def permute_code(code: IndexCode, src_order: Sequence[str], dst_order: Sequence[str]) -> IndexCode:
    """The same encoder with its message coordinates reordered from src_order to dst_order."""
    if sorted(src_order) != sorted(dst_order):
        raise PreconditionError("message orders differ as sets")
    if tuple(src_order) == tuple(dst_order):
        return code
    F, q, n = code.field, code.field.q, code.n
    src_pos = {x: i for i, x in enumerate(src_order)}
    perm = [src_pos[x] for x in dst_order]
    if code.kind == "linear":
        return IndexCode(F, n, code.length, code.kind, generator=tuple(code.generator[p] for p in perm))
    rows = []
    for i in range(q**n):
        y = index_vector(i, q, n)
        x = [0] * n
        for j, p in enumerate(perm):
            x[p] = y[j]
        rows.append(code.encode(x))
    return IndexCode.from_table(F, n, rows)


def ic_code_to_nc_code(
    inst: NetworkInstance,
    code: IndexCode,
    sigma: Sequence[int] | None = None,
    messages: Sequence[str] | None = None,
    limit: int | None = None,
) -> NetworkCode:
    """
    Network code from a valid index code of length |E| on the converted
    instance: F_e and D_t are the canonical decoders of R_e and R_t with the
    codeword fixed at sigma (default: the codeword of the all-zero message).
    ``messages`` names the code's coordinate order when it differs from the
    converted layout.
    """
    ic, report = nc_to_ic_instance(inst, allow_empty_inputs=True)
    if messages is not None:
        code = permute_code(code, messages, ic.messages)
    if code.n != ic.n:
        raise WrongLength(f"code has n={code.n}, converted instance has n={ic.n}")
    if code.length != len(inst.edges):
        raise WrongLength(f"code length {code.length} != |E| = {len(inst.edges)}")
    verdict = validate_icsie(ic, code, limit)
    if not verdict:
        raise InvalidIndexCode(f"not a valid index code; witness z = {verdict.witness_z}")
    sigma = code.encode((0,) * ic.n) if sigma is None else tuple(sigma)
    k = len(inst.messages)
    seen: dict[SymbolVector, int] = {}
    for x in code.preimages(sigma, limit):
        seen[x[:k]] = seen.get(x[:k], 0) + 1
    q = inst.field.q
    if len(seen) != q**k or any(c != 1 for c in seen.values()):
        raise NonUniqueExtension(
            f"codeword {sigma} does not pin down a unique edge part for every source vector"
        )
    enc = {}
    for e in inst.edge_ids:
        f = derive_canonical_decoder(ic, code, report.receiver_layout[e], sigma, limit)
        enc[e] = f.as_linear() or f
    dec = {}
    for t in inst.terminals:
        f = derive_canonical_decoder(ic, code, report.receiver_layout[t], sigma, limit)
        dec[t] = f.as_linear() or f
    return NetworkCode(enc, dec)


def check_functional_dependence(f_dup: Sequence[int], f_orig: Sequence[int]) -> bool:
    """Whether f_dup factors through f_orig (both global maps over the same source vectors)."""
    if len(f_dup) != len(f_orig):
        raise PreconditionError("global maps have different domains")
    image: dict[int, int] = {}
    for a, b in zip(f_orig, f_dup):
        if image.setdefault(a, b) != b:
            return False
    return True


@dataclass(frozen=True)
class CodeComparison:
    same: bool
    where: str | None = None
    detail: tuple = ()


def compare_network_codes(
    inst: NetworkInstance, a: NetworkCode, b: NetworkCode, limit: int | None = None
) -> CodeComparison:
    """
    Equal global maps, equal terminal outputs for every source vector, and equal
    outputs of every local function on every reachable input corrupted within
    that function's delta.
    """
    ga, gb = global_maps(inst, a, limit), global_maps(inst, b, limit)
    for e in inst.edge_ids:
        if ga[e] != gb[e]:
            return CodeComparison(False, e, (ga[e], gb[e]))
    q, k = inst.field.q, len(inst.messages)
    F = inst.field
    for xi, x in enumerate(itertools.product(range(q), repeat=k)):
        vals = dict(zip(inst.messages, x))
        vals.update({e: ga[e][xi] for e in inst.edge_ids})
        fns = [(e, inst.inputs(e), a.encoders[e], b.encoders[e]) for e in inst.edge_ids]
        fns += [(t, inst.terminal_inputs(t), a.decoders[t], b.decoders[t]) for t in inst.terminals]
        for fid, ins, fa, fb in fns:
            base = tuple(vals[i] for i in ins)
            for p in error_patterns(q, len(base), inst.delta[fid]):
                y = F.vadd(base, p)
                if fa(y) != fb(y):
                    return CodeComparison(False, fid, (x, y, fa(y), fb(y)))
    return CodeComparison(True)


# --------------------------------------------------------------------------
# rewriting the side-information graph


class _State:
    """Mutable side-information graph with an E/S split, used by the rewrite engine."""

    def __init__(self, inst: IndexInstance, partition: Partition):
        self.field = inst.field
        self.messages = list(inst.messages)
        self.order = [r.id for r in inst.receivers]
        self.recs = {r.id: r for r in inst.receivers}
        self.side = {r.id: list(r.side_info) for r in inst.receivers}
        self.e_set = set(partition.e_messages)
        self.link = {rid: x for x, rid in partition.e_receivers.items()}  # receiver -> e-message
        self.taken = set(self.messages) | set(self.order)

    def instance(self) -> IndexInstance:
        recs = tuple(
            Receiver(rid, self.recs[rid].wants, tuple(self.side[rid]), self.recs[rid].delta, self.recs[rid].origin)
            for rid in self.order
        )
        return IndexInstance(self.field, tuple(self.messages), recs)

    def partition(self) -> Partition:
        inst = self.instance()
        return make_partition(inst, [x for x in self.messages if x in self.e_set])

    def groups(self) -> tuple[list[tuple[str, ...]], list[tuple[str, ...]]]:
        """Link receivers grouped by side-info set; terminal receivers by (side-info set, delta)."""
        lg: dict[frozenset, list[str]] = {}
        tg: dict[tuple, list[str]] = {}
        for rid in self.order:
            key = frozenset(self.side[rid])
            if rid in self.link:
                lg.setdefault(key, []).append(rid)
            else:
                tg.setdefault((key, self.recs[rid].delta), []).append(rid)
        return [tuple(g) for g in lg.values()], [tuple(g) for g in tg.values()]

    def rank(self) -> dict[str, int]:
        """Depth of each e-message in the e-part DAG (e held by R_x puts e before x)."""
        memo: dict[str, int] = {}
        want = {x: rid for rid, x in self.link.items()}

        def depth(x: str) -> int:
            if x not in memo:
                memo[x] = -1
                held = [y for y in self.side[want[x]] if y in self.e_set]
                memo[x] = 1 + max((depth(y) for y in held), default=-1)
            return memo[x]

        return {x: depth(x) for x in self.e_set}

    def fresh(self, base: str) -> str:
        name = base + PRIME
        while name in self.taken or link_receiver_id(name) in self.taken:
            name += PRIME
        self.taken.update((name, link_receiver_id(name)))
        return name

    def add_link(self, base: str, side: Sequence[str], delta: int) -> tuple[str, str]:
        x = self.fresh(base)
        rid = link_receiver_id(x)
        self.messages.append(x)
        self.order.append(rid)
        self.recs[rid] = Receiver(rid, (x,), tuple(side), delta)
        self.side[rid] = list(side)
        self.e_set.add(x)
        self.link[rid] = x
        return x, rid

    def repoint(self, group: Sequence[str], old: str, new: str) -> None:
        for rid in group:
            self.side[rid] = [new if y == old else y for y in self.side[rid]]


@dataclass(frozen=True)
class ProblemCase:
    case: int
    subject: str
    participants: tuple[str, ...]
    key: tuple = dc_field(default=(), compare=False, repr=False)


def _classify(st: _State) -> list[ProblemCase]:
    lgroups, tgroups = st.groups()
    rank = st.rank()
    out: list[ProblemCase] = []
    s_msgs = [x for x in st.messages if x not in st.e_set]
    e_msgs = [x for x in st.messages if x in st.e_set]

    def holders(groups, x):
        return [g for g in groups if x in st.side[g[0]]]

    def flat(gs):
        return tuple(r for g in gs for r in g)

    def add(case, subject, parts, r=0):
        out.append(ProblemCase(case, subject, parts, (case, r, subject, parts)))

    for s in s_msgs:
        lh, th = holders(lgroups, s), holders(tgroups, s)
        if len(th) == 1 and not lh:
            add(1, s, flat(th), -1)
        elif len(th) > 1:
            add(2, s, flat(th), -1)
        elif len(th) == 1 and lh:
            add(3, s, flat(lh + th), -1)
        pure = [g for g in lh if set(st.side[g[0]]) <= set(s_msgs)]
        if len(pure) > 1 and any(set(st.side[g[0]]) != {s} for g in pure):
            add(11, s, flat(pure), -1)
    for e in e_msgs:
        lh, th = holders(lgroups, e), holders(tgroups, e)
        if lh and th:
            add(4, e, flat(lh + th), rank[e])
        if len(lh) > 1:
            add(5, e, flat(lh), rank[e])
        if len(th) > 1:
            add(6, e, flat(th), rank[e])
    for g in lgroups:
        side = st.side[g[0]]
        if any(y not in st.e_set for y in side) and any(y in st.e_set for y in side):
            add(7, g[0], g)
    for g in tgroups:
        side = st.side[g[0]]
        ns = sum(1 for y in side if y not in st.e_set)
        ne = len(side) - ns
        if ns == 1 and ne == 0:
            add(8, g[0], g)
        elif ns > 1:
            add(9, g[0], g)
        elif ns == 1 and ne > 0:
            add(10, g[0], g)
    out.sort(key=lambda c: c.key)
    return out


def classify_problematic_cases(inst: IndexInstance, partition: Partition) -> list[ProblemCase]:
    """
    The problematic side-information patterns of the current graph. Cases 1-10
    follow the enumerated list; case 11 flags a source message held by several
    pure-source link groups with differing side information (overlapping
    ownership), which the list does not cover.
    """
    if not inst.is_single_demand():
        raise PreconditionError("instance must be single-demand; split it first")
    return _classify(_State(inst, partition))


def _apply(st: _State, pc: ProblemCase) -> CaseApplication:
    lgroups, tgroups = st.groups()
    group_of = {r: g for g in lgroups + tgroups for r in g}
    s_set = set(st.messages) - st.e_set

    def first_group(rids, pred=lambda g: True):
        seen = []
        for r in rids:
            g = group_of[r]
            if g not in seen and pred(g):
                seen.append(g)
        return seen

    if pc.case in (1, 2, 3):
        s = pc.subject
        g = first_group(pc.participants, lambda g: g in tgroups)[0]
        return _fresh_source_link(st, pc, g, s)
    if pc.case in (7, 8, 9, 10):
        g = group_of[pc.subject]
        s = next(y for y in st.side[g[0]] if y in s_set)
        return _fresh_source_link(st, pc, g, s)
    if pc.case == 11:
        s = pc.subject
        g = first_group(pc.participants, lambda g: set(st.side[g[0]]) != {s})[0]
        return _fresh_source_link(st, pc, g, s)
    e = pc.subject
    if pc.case == 4:
        g = first_group(pc.participants, lambda g: g in lgroups)[0]
    else:  # 5 and 6: the first holder keeps e, the second moves to a duplicate
        g = first_group(pc.participants)[1]
    (orig_rid,) = [r for r, x in st.link.items() if x == e]
    r_e = st.recs[orig_rid]
    d, rid = st.add_link(e, st.side[orig_rid], r_e.delta)
    st.repoint(g, e, d)
    return CaseApplication(pc.case, pc.subject, pc.participants, d, rid, e, tuple(g))


def _fresh_source_link(st: _State, pc: ProblemCase, group, s: str) -> CaseApplication:
    f, rid = st.add_link(s, [s], 0)
    st.repoint(group, s, f)
    return CaseApplication(pc.case, pc.subject, pc.participants, f, rid, s, tuple(group))


def modify_side_info_graph(
    inst: IndexInstance, partition: Partition
) -> tuple[IndexInstance, ConversionReport]:
    """
    Apply rewrites until no problematic case remains. Cases are taken in
    order of case id, then depth of the subject message, then ids; every
    rewrite adds one link message and receiver and re-points one holder group.
    """
    if not inst.is_single_demand():
        raise PreconditionError("instance must be single-demand; split it first")
    st = _State(inst, partition)
    cap = 10 * (inst.n + inst.m)
    log: list[CaseApplication] = []
    while True:
        cases = _classify(st)
        if not cases:
            break
        if len(log) >= cap:
            raise IterationCapExceeded(f"rewrite engine exceeded {cap} iterations")
        log.append(_apply(st, cases[0]))
    out = st.instance()
    before = {(r.id, y) for r in inst.receivers for y in r.side_info}
    after = {(r.id, y) for r in out.receivers for y in r.side_info}
    report = ConversionReport(
        IC2NC,
        instance=out,
        partition=partition,
        source_instance=inst,
        modified=out,
        modified_partition=st.partition(),
        dup_map={a.added_message: a.original for a in log if a.case in (4, 5, 6)},
        fresh_map={a.added_message: a.original for a in log if a.case not in (4, 5, 6)},
        added_messages=tuple(a.added_message for a in log),
        added_receivers=tuple(a.added_receiver for a in log),
        deleted_side_edges=tuple(sorted(before - after)),
        added_side_edges=tuple(sorted(after - before)),
        log=tuple(log),
    )
    return out, report


def _unique(base: str, taken: set) -> str:
    name, i = base, 1
    while name in taken:
        i += 1
        name = f"{base}_{i}"
    taken.add(name)
    return name


def network_from_modified(modified: IndexInstance, partition: Partition) -> NetworkInstance:
    """Read the network off a network-shaped side-information graph."""
    st = _State(modified, partition)
    lgroups, tgroups = st.groups()
    e_msgs = [x for x in modified.messages if x in st.e_set]
    s_msgs = [x for x in modified.messages if x not in st.e_set]
    want = {x: rid for rid, x in st.link.items()}
    taken: set = set()
    tnames: dict[tuple, str] = {}
    for g in tgroups:
        origins = {st.recs[r].origin or r for r in g}
        name = st.recs[g[0]].origin or g[0]
        if len(origins) > 1:
            name = g[0]
        tnames[g] = _unique(name, taken)
    sources: dict[str, tuple[str, ...]] = {}
    node_of_group: dict[tuple, str] = {}
    owned = set()
    for g in lgroups:
        side = st.side[g[0]]
        if side and all(y not in st.e_set for y in side):
            held = tuple(y for y in s_msgs if y in side)
            node = _unique(f"src_{held[0]}", taken)
            sources[node] = held
            owned.update(held)
            node_of_group[g] = node
    for s in s_msgs:
        if s not in owned:
            sources[_unique(f"src_{s}", taken)] = (s,)
    for g in lgroups:
        if g not in node_of_group:
            node_of_group[g] = _unique(f"v_{st.link[g[0]]}", taken)
    group_of = {r: g for g in lgroups + tgroups for r in g}
    head_of: dict[str, str] = {}
    sinks = []
    for e in e_msgs:
        hs = {group_of[r] for r in modified.held_by(e)}
        if len(hs) > 1:
            raise PreconditionError(f"message {e} still has several holder nodes")
        if hs:
            (g,) = hs
            head_of[e] = tnames[g] if g in tnames else node_of_group[g]
        else:
            z = _unique(f"z_{e}", taken)
            sinks.append(z)
            head_of[e] = z
    edges = tuple(Edge(e, node_of_group[group_of[want[e]]], head_of[e]) for e in e_msgs)
    terminals = {}
    delta = {e: st.recs[want[e]].delta for e in e_msgs}
    for g in tgroups:
        dem = []
        for r in g:
            dem += [x for x in st.recs[r].wants if x not in dem]
        terminals[tnames[g]] = tuple(dem)
        delta[tnames[g]] = st.recs[g[0]].delta
    nodes = tuple(sources) + tuple(dict.fromkeys(node_of_group[g] for g in lgroups if node_of_group[g] not in sources))
    nodes += tuple(sinks) + tuple(terminals)
    return NetworkInstance(modified.field, nodes, edges, sources, terminals, delta)


def ic_to_nc_instance(
    inst: IndexInstance, partition: Partition | None = None
) -> tuple[NetworkInstance, ConversionReport]:
    """
    Split, partition, rewrite, and read off the network. ``partition`` fixes the
    edge part (only its e-messages are used); by default the maximum acyclic
    unicast set is chosen.
    """
    v = validate_index_instance(inst)
    if not v:
        raise InvalidInstance(v.violations)
    split = split_multi_demand_receivers(inst)
    part = find_unicast_acyclic_partition(split) if partition is None else make_partition(split, partition.e_messages)
    modified, report = modify_side_info_graph(split, part)
    net = network_from_modified(modified, report.modified_partition)
    check = validate_network_instance(net, allow_empty_inputs=True)
    if not check:
        raise InvalidInstance(check.violations)
    report.instance = net
    report.target_length = len(net.edges)
    report.message_layout = tuple(net.messages) + tuple(net.edge_ids)
    report.receiver_layout = {e: link_receiver_id(e) for e in net.edge_ids}
    report.receiver_layout.update({t: t for t in net.terminals})
    warns = []
    if any(not net.inputs(e) for e in net.edge_ids) or any(not net.terminal_inputs(t) for t in net.terminals):
        warns.append("some functions have no inputs and carry constants")
    report.warnings = tuple(warns)
    return net, report


def reduce_along_dup_map(modified: IndexInstance, report: ConversionReport) -> IndexInstance:
    """Undo the rewrites in reverse order, recovering the (split) input graph."""
    added = set(report.added_messages)
    side = {r.id: list(r.side_info) for r in modified.receivers}
    for a in reversed(report.log):
        for rid in a.repointed:
            side[rid] = [a.original if y == a.added_message else y for y in side[rid]]
    recs = tuple(
        Receiver(r.id, r.wants, tuple(side[r.id]), r.delta, r.origin)
        for r in modified.receivers
        if r.id not in set(report.added_receivers)
    )
    return IndexInstance(modified.field, tuple(x for x in modified.messages if x not in added), recs)


def extend_ic_code(inst: IndexInstance, code: IndexCode, report: ConversionReport) -> IndexCode:
    """
    Append one component per rewrite: X^_added + X^_original. New messages are
    appended after the original ones, in rewrite order.
    """
    F, q = inst.field, inst.field.q
    if code.n != inst.n:
        raise WrongLength(f"code has n={code.n}, instance has n={inst.n}")
    if not report.log:
        return code
    msgs = tuple(inst.messages) + tuple(report.added_messages)
    pos = {x: i for i, x in enumerate(msgs)}
    n2 = len(msgs)
    extra = []
    for a in report.log:
        c = [0] * n2
        c[pos[a.original]] = 1
        c[pos[a.added_message]] = 1
        extra.append(c)
    if code.kind == "linear":
        comps = [tuple(c) + (0,) * (n2 - code.n) for c in code.components()]
        return IndexCode.from_components(F, n2, comps + extra)
    lim = enum_limit()
    if q**n2 > lim:
        raise LimitExceeded("extended code table", q**n2, lim)
    rows = []
    for i in range(q**n2):
        x = index_vector(i, q, n2)
        rows.append(code.encode(x[: code.n]) + tuple(F.dot(c, x) for c in extra))
    return IndexCode.from_table(F, n2, rows)


def restrict_nc_code_to_ic_code(
    net: NetworkInstance,
    code: NetworkCode,
    report: ConversionReport,
    limit: int | None = None,
) -> IndexCode:
    """
    Index code of length |E| on the unmodified graph: components for the
    original edge messages only. Each duplicated link's global map must factor
    through its original's.
    """
    gm = global_maps(net, code, limit)
    for d, o in report.dup_map.items():
        if not check_functional_dependence(gm[d], gm[o]):
            raise DependenceViolated(d, o)
    src = report.source_instance
    e_orig = [x for x in src.messages if x in set(report.partition.e_messages)]
    return nc_code_to_ic_code(net, code, edges=e_orig, messages=src.messages, limit=limit)


# --------------------------------------------------------------------------
# structural comparison


def _node_signatures(inst: NetworkInstance) -> dict[str, tuple]:
    sig = {}
    for v in inst.nodes:
        if v in inst.terminals:
            sig[v] = ("terminal", v)
        elif v in inst.sources:
            sig[v] = ("source", frozenset(inst.sources[v]))
        elif inst.incoming(v):
            sig[v] = ("node", frozenset(inst.incoming(v)))
        else:
            sig[v] = ("bare", frozenset(inst.out_edges(v)))
    return sig


def structurally_equal(a: NetworkInstance, b: NetworkInstance) -> bool:
    """
    Same network up to renaming non-terminal nodes: sources are identified by
    their owned messages, other nodes by their incoming links, terminals by id.
    Demand sets, input sets and every delta must agree.
    """
    if a.field != b.field:
        return False
    sa, sb = _node_signatures(a), _node_signatures(b)

    def shape(inst, sig):
        edges = {e.id: (sig[e.tail], sig[e.head], inst.delta[e.id]) for e in inst.edges}
        terms = {t: (frozenset(d), inst.delta[t]) for t, d in inst.terminals.items()}
        srcs = frozenset(frozenset(m) for m in inst.sources.values())
        return edges, terms, srcs

    return shape(a, sa) == shape(b, sb)


def rename_messages(inst: IndexInstance, mapping: Mapping[str, str]) -> IndexInstance:
    """Rename message ids (and the matching link receiver ids)."""
    m = dict(mapping)
    rmap = {link_receiver_id(k): link_receiver_id(v) for k, v in m.items()}
    recs = tuple(
        Receiver(
            rmap.get(r.id, r.id),
            tuple(m.get(x, x) for x in r.wants),
            tuple(m.get(x, x) for x in r.side_info),
            r.delta,
            r.origin,
        )
        for r in inst.receivers
    )
    return IndexInstance(inst.field, tuple(m.get(x, x) for x in inst.messages), recs)


def same_index_instance(a: IndexInstance, b: IndexInstance) -> bool:
    """Equal message sets and equal receivers, comparing side information as sets."""

    def shape(inst):
        return (
            inst.field,
            frozenset(inst.messages),
            frozenset((r.id, frozenset(r.wants), frozenset(r.side_info), r.delta) for r in inst.receivers),
        )

    return shape(a) == shape(b)
