"""
Network coding instances, index coding instances (side-information graphs),
and the E/S message partition used when converting between them.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Mapping

from .errors import LimitExceeded, NotDAG, PreconditionError
from .field import FieldSpec


@dataclass(frozen=True)
class Validation:
    ok: bool
    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


# --------------------------------------------------------------------------
# network side


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class NetworkInstance:
    """
    A DAG with source nodes owning messages, terminals with demand sets, and an
    error-resistance capability for every edge and every terminal.

    ``sources`` maps source node -> owned message ids (declared order);
    ``terminals`` maps terminal node -> demanded message ids;
    ``delta`` maps every edge id and terminal id to a nonnegative integer.
    """

    field: FieldSpec
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    sources: Mapping[str, tuple[str, ...]]
    terminals: Mapping[str, tuple[str, ...]]
    delta: Mapping[str, int]

    @classmethod
    def build(cls, field, nodes, edges, sources, terminals, delta=None) -> "NetworkInstance":
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        d = {e.id: 0 for e in edges}
        d.update({t: 0 for t in terminals})
        d.update(delta or {})
        return cls(
            field,
            tuple(nodes),
            edges,
            {k: tuple(v) for k, v in sources.items()},
            {k: tuple(v) for k, v in terminals.items()},
            d,
        )

    @cached_property
    def messages(self) -> tuple[str, ...]:
        """Source messages S in order of first ownership."""
        seen: dict[str, None] = {}
        for owned in self.sources.values():
            for s in owned:
                seen.setdefault(s)
        return tuple(seen)

    @cached_property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _incoming(self) -> dict[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {v: [] for v in self.nodes}
        for e in self.edges:
            inc.setdefault(e.head, []).append(e.id)
        return {v: tuple(x) for v, x in inc.items()}

    def incoming(self, v: str) -> tuple[str, ...]:
        return self._incoming.get(v, ())

    def out_edges(self, v: str) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges if e.tail == v)

    def inputs(self, e: str) -> tuple[str, ...]:
        """In(e): owned messages if the tail is a source node, else incoming edges of the tail."""
        tail = self.edge_map[e].tail
        if tail in self.sources:
            return self.sources[tail]
        return self.incoming(tail)

    def terminal_inputs(self, t: str) -> tuple[str, ...]:
        return self.incoming(t)

    def node_delta(self, v: str) -> int | None:
        """delta_v = min over outgoing edges (delta_t for terminals); None if v has no outputs."""
        if v in self.terminals:
            return self.delta[v]
        outs = self.out_edges(v)
        if not outs:
            return None
        return min(self.delta[e] for e in outs)

    def topological_edges(self) -> tuple[str, ...]:
        """Edge ids in a topological order (ties by declaration order)."""
        pending = {e.id: set(self.incoming(e.tail)) if e.tail not in self.sources else set()
                   for e in self.edges}
        order: list[str] = []
        done: set[str] = set()
        while len(order) < len(self.edges):
            ready = [e.id for e in self.edges if e.id not in done and pending[e.id] <= done]
            if not ready:
                raise NotDAG("edge graph contains a directed cycle")
            for eid in ready:
                order.append(eid)
                done.add(eid)
        return tuple(order)

    def function_ids(self) -> tuple[str, ...]:
        return self.edge_ids + tuple(self.terminals)


def _has_cycle(nodes: Iterable[str], succ: Mapping[str, Iterable[str]]) -> bool:
    color: dict[str, int] = {}

    def visit(u):
        color[u] = 1
        for w in succ.get(u, ()):
            c = color.get(w, 0)
            if c == 1 or (c == 0 and visit(w)):
                return True
        color[u] = 2
        return False

    return any(color.get(u, 0) == 0 and visit(u) for u in nodes)


def validate_network_instance(inst: NetworkInstance, allow_empty_inputs: bool = False) -> Validation:
    """Check the structural invariants; ``allow_empty_inputs`` admits constant-output nodes."""
    bad: list[str] = []
    nodes = set(inst.nodes)
    if len(nodes) != len(inst.nodes):
        bad.append("duplicate node ids")
    ids = [e.id for e in inst.edges]
    for eid, c in Counter(ids).items():
        if c > 1:
            bad.append(f"duplicate edge id {eid}")
    for e in inst.edges:
        for end in (e.tail, e.head):
            if end not in nodes:
                bad.append(f"edge {e.id} references unknown node {end}")
    for v in list(inst.sources) + list(inst.terminals):
        if v not in nodes:
            bad.append(f"unknown node {v} declared as source/terminal")
    both = set(inst.sources) & set(inst.terminals)
    for v in sorted(both):
        bad.append(f"node {v} is both a source and a terminal")
    msgs = set(inst.messages)
    clash = msgs & set(ids)
    for x in sorted(clash):
        bad.append(f"id {x} used for both a message and an edge")
    for e in inst.edges:
        if e.head in inst.sources:
            bad.append(f"source node {e.head} has incoming edge {e.id}")
        if e.tail in inst.terminals:
            bad.append(f"terminal node {e.tail} has outgoing edge {e.id}")
    succ: dict[str, list[str]] = {}
    for e in inst.edges:
        succ.setdefault(e.tail, []).append(e.head)
    if _has_cycle(inst.nodes, succ):
        bad.append("not a DAG: the edge graph contains a directed cycle")
    for t, dem in inst.terminals.items():
        if not dem:
            bad.append(f"terminal {t} has an empty demand set")
        for s in dem:
            if s not in msgs:
                bad.append(f"terminal {t} demands unknown message {s}")
    for fid in inst.function_ids():
        d = inst.delta.get(fid)
        if d is None:
            bad.append(f"missing delta for {fid}")
        elif not (isinstance(d, int) and d >= 0):
            bad.append(f"delta for {fid} must be a nonnegative integer")
    if not bad and not allow_empty_inputs:
        for e in inst.edges:
            if not inst.inputs(e.id):
                bad.append(f"edge {e.id} has empty In(e)")
        for t in inst.terminals:
            if not inst.terminal_inputs(t):
                bad.append(f"terminal {t} has empty In(t)")
    return Validation(not bad, tuple(bad))


# --------------------------------------------------------------------------
# index side


@dataclass(frozen=True)
class Receiver:
    id: str
    wants: tuple[str, ...]
    side_info: tuple[str, ...] = ()
    delta: int = 0
    origin: str | None = None  # set on receivers produced by splitting


@dataclass(frozen=True)
class IndexInstance:
    field: FieldSpec
    messages: tuple[str, ...]
    receivers: tuple[Receiver, ...]

    @classmethod
    def build(cls, field, messages, receivers) -> "IndexInstance":
        recs = []
        for r in receivers:
            if isinstance(r, Receiver):
                recs.append(r)
            else:
                rid, wants, side, *rest = r
                recs.append(Receiver(rid, tuple(wants), tuple(side), rest[0] if rest else 0))
        return cls(field, tuple(messages), tuple(recs))

    @property
    def n(self) -> int:
        return len(self.messages)

    @property
    def m(self) -> int:
        return len(self.receivers)

    @cached_property
    def position(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.messages)}

    @cached_property
    def receiver_map(self) -> dict[str, Receiver]:
        return {r.id: r for r in self.receivers}

    @cached_property
    def index_sets(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
        """Per receiver: (wanted positions, side-info positions, delta)."""
        pos = self.position
        return tuple(
            (tuple(pos[x] for x in r.wants), tuple(pos[x] for x in r.side_info), r.delta)
            for r in self.receivers
        )

    def wanted_by(self, x: str) -> tuple[str, ...]:
        return tuple(r.id for r in self.receivers if x in r.wants)

    def held_by(self, x: str) -> tuple[str, ...]:
        return tuple(r.id for r in self.receivers if x in r.side_info)

    def is_single_demand(self) -> bool:
        return all(len(r.wants) == 1 for r in self.receivers)


def validate_index_instance(inst: IndexInstance) -> Validation:
    bad: list[str] = []
    msgs = set(inst.messages)
    if len(msgs) != len(inst.messages):
        bad.append("duplicate message ids")
    rids = [r.id for r in inst.receivers]
    for rid, c in Counter(rids).items():
        if c > 1:
            bad.append(f"duplicate receiver id {rid}")
    for r in inst.receivers:
        if not r.wants:
            bad.append(f"receiver {r.id} wants nothing")
        for x in itertools.chain(r.wants, r.side_info):
            if x not in msgs:
                bad.append(f"receiver {r.id} references unknown message {x}")
        if len(set(r.wants)) != len(r.wants) or len(set(r.side_info)) != len(r.side_info):
            bad.append(f"receiver {r.id} lists a message twice")
        both = set(r.wants) & set(r.side_info)
        if both:
            bad.append(f"receiver {r.id} wants and holds {sorted(both)}")
        if not (isinstance(r.delta, int) and r.delta >= 0):
            bad.append(f"receiver {r.id} has invalid delta {r.delta!r}")
    return Validation(not bad, tuple(bad))


def split_multi_demand_receivers(inst: IndexInstance) -> IndexInstance:
    """One receiver per wanted message; split receivers keep side info and delta."""
    if inst.is_single_demand():
        return inst
    out = []
    for r in inst.receivers:
        if len(r.wants) == 1:
            out.append(r)
            continue
        for x in r.wants:
            out.append(Receiver(f"{r.id}/{x}", (x,), r.side_info, r.delta, origin=r.id))
    return replace(inst, receivers=tuple(out))


# --------------------------------------------------------------------------
# E/S partition


@dataclass(frozen=True)
class Partition:
    e_messages: tuple[str, ...]
    s_messages: tuple[str, ...]
    e_receivers: Mapping[str, str]  # e-message -> receiver id wanting it
    t_receivers: tuple[str, ...]

    def link_receivers(self) -> set[str]:
        return set(self.e_receivers.values())


def make_partition(inst: IndexInstance, e_messages: Iterable[str]) -> Partition:
    """Partition with the given e-messages, which must be unicast in ``inst``."""
    e_set = set(e_messages)
    e_msgs = tuple(x for x in inst.messages if x in e_set)
    e_recv = {}
    for x in e_msgs:
        w = inst.wanted_by(x)
        if len(w) != 1:
            raise PreconditionError(f"message {x} is not unicast (wanted by {list(w)})")
        e_recv[x] = w[0]
    link = set(e_recv.values())
    return Partition(
        e_msgs,
        tuple(x for x in inst.messages if x not in e_set),
        e_recv,
        tuple(r.id for r in inst.receivers if r.id not in link),
    )


def unicast_messages(inst: IndexInstance) -> tuple[str, ...]:
    return tuple(x for x in inst.messages if len(inst.wanted_by(x)) == 1)


def e_subgraph_acyclic(inst: IndexInstance, e_messages: Iterable[str]) -> bool:
    """No directed cycle among the e-messages and their wanting receivers."""
    e_set = set(e_messages)
    succ: dict[str, list[str]] = {x: [] for x in e_set}
    for x in e_set:
        (rid,) = inst.wanted_by(x)
        for y in inst.receiver_map[rid].side_info:
            if y in e_set:
                succ[y].append(x)  # y held by R_x: y -> R_x -> x
    return not _has_cycle(sorted(e_set), succ)


MAX_PARTITION_SEARCH = 16


def find_unicast_acyclic_partition(inst: IndexInstance) -> Partition:
    """
    Maximum-cardinality acyclic set of unicast messages.

    Among maximum sets the one whose id-sorted tuple is lexicographically
    smallest wins, which makes the choice independent of declaration order.
    """
    if not inst.is_single_demand():
        raise PreconditionError("instance must be single-demand; split it first")
    uni = sorted(unicast_messages(inst))
    if len(uni) > MAX_PARTITION_SEARCH:
        raise LimitExceeded("unicast subset search", 2 ** len(uni), 2**MAX_PARTITION_SEARCH)
    for size in range(len(uni), -1, -1):
        for cand in itertools.combinations(uni, size):
            if e_subgraph_acyclic(inst, cand):
                return make_partition(inst, cand)
    raise AssertionError("empty set is always acyclic")  # unreachable
