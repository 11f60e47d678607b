"""
Deterministic families of tiny instances for exhaustive property sweeps.

- ``index_suite``: every single-demand index instance with up to 3 messages
  and up to 3 receivers, deduplicated up to receiver order.
- ``network_suite``: every network with up to 4 links, one message per
  source, deduplicated up to renaming of sources, internal nodes and terminals.
- ``random_dags``: seeded random networks with up to 6 links.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from .field import make_field
from .model import Edge, IndexInstance, NetworkInstance, Receiver, validate_network_instance


def index_suite(max_n: int = 3, max_m: int = 3, q: int = 2, deltas=(0, 1)) -> Iterator[IndexInstance]:
    F = make_field(q)
    for n in range(1, max_n + 1):
        msgs = tuple(f"x{i + 1}" for i in range(n))
        kinds = []
        for w in range(n):
            others = [j for j in range(n) if j != w]
            for size in range(len(others) + 1):
                for side in itertools.combinations(others, size):
                    for d in deltas:
                        kinds.append((w, side, d))
        for m in range(1, max_m + 1):
            for combo in itertools.combinations_with_replacement(kinds, m):
                recs = tuple(
                    Receiver(f"R{i + 1}", (msgs[w],), tuple(msgs[j] for j in side), d)
                    for i, (w, side, d) in enumerate(combo)
                )
                yield IndexInstance(F, msgs, recs)


# --------------------------------------------------------------------------
# networks


def _is_dag(nodes, edges) -> bool:
    succ = {v: [] for v in nodes}
    indeg = {v: 0 for v in nodes}
    for u, w in edges:
        succ[u].append(w)
        indeg[w] += 1
    stack = [v for v in nodes if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == len(nodes)


def _structures(max_edges: int, max_sources: int, max_internal: int, max_terminals: int):
    """Edge multisets (tail, head) in which every node is used appropriately."""
    for k in range(1, max_sources + 1):
        for ni in range(max_internal + 1):
            for nt in range(1, max_terminals + 1):
                srcs = [f"S{i + 1}" for i in range(k)]
                ints = [f"v{i + 1}" for i in range(ni)]
                terms = [f"t{i + 1}" for i in range(nt)]
                cands = [(u, w) for u in srcs + ints for w in ints + terms if u != w]
                for size in range(1, max_edges + 1):
                    for es in itertools.combinations_with_replacement(cands, size):
                        tails = {u for u, _ in es}
                        heads = {w for _, w in es}
                        if not all(s in tails for s in srcs):
                            continue
                        if not all(v in tails and v in heads for v in ints):
                            continue
                        if not all(t in heads for t in terms):
                            continue
                        if ints and not _is_dag(srcs + ints + terms, es):
                            continue
                        yield srcs, ints, terms, es


def _canonical_key(srcs, ints, terms, es, edelta, demands, tdelta):
    best = None
    for ps in itertools.permutations(range(len(srcs))):
        smap = {srcs[i]: f"S{ps[i] + 1}" for i in range(len(srcs))}
        mmap = {f"m{i + 1}": f"m{ps[i] + 1}" for i in range(len(srcs))}
        for pi in itertools.permutations(range(len(ints))):
            imap = {ints[i]: f"v{pi[i] + 1}" for i in range(len(ints))}
            for pt in itertools.permutations(range(len(terms))):
                tmap = {terms[i]: f"t{pt[i] + 1}" for i in range(len(terms))}
                ren = {**smap, **imap, **tmap}
                ek = tuple(sorted((ren[u], ren[w], d) for (u, w), d in zip(es, edelta)))
                tk = tuple(
                    sorted((tmap[t], tuple(sorted(mmap[x] for x in demands[t])), tdelta[t]) for t in terms)
                )
                key = (ek, tk)
                if best is None or key < best:
                    best = key
    return best


def network_suite(
    max_edges: int = 4,
    max_sources: int = 2,
    max_internal: int = 2,
    max_terminals: int = 2,
    q: int = 2,
    deltas=(0, 1),
) -> Iterator[NetworkInstance]:
    """
    Canonically deduplicated networks. Sources own one message each; every
    source has an outgoing link, every internal node has inputs and outputs,
    every terminal has inputs and a nonempty demand set.
    """
    F = make_field(q)
    seen = set()
    for srcs, ints, terms, es in _structures(max_edges, max_sources, max_internal, max_terminals):
        msgs = [f"m{i + 1}" for i in range(len(srcs))]
        dem_opts = [c for r in range(1, len(msgs) + 1) for c in itertools.combinations(msgs, r)]
        for edelta in itertools.product(deltas, repeat=len(es)):
            for tdel in itertools.product(deltas, repeat=len(terms)):
                for dems in itertools.product(dem_opts, repeat=len(terms)):
                    demands = dict(zip(terms, dems))
                    tdelta = dict(zip(terms, tdel))
                    key = _canonical_key(srcs, ints, terms, es, edelta, demands, tdelta)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield _from_key(F, key)


def _from_key(F, key) -> NetworkInstance:
    ek, tk = key
    edges = tuple(Edge(f"e{i + 1}", u, w) for i, (u, w, _) in enumerate(ek))
    delta = {f"e{i + 1}": d for i, (_, _, d) in enumerate(ek)}
    nodes = sorted({u for u, _, _ in ek} | {w for _, w, _ in ek}, key=lambda v: (v[0] != "S", v[0] == "t", v))
    sources = {v: (f"m{v[1:]}",) for v in nodes if v.startswith("S")}
    terminals = {}
    for t, dem, d in tk:
        terminals[t] = dem
        delta[t] = d
    return NetworkInstance(F, tuple(nodes), edges, sources, terminals, delta)


def random_dags(count: int = 300, max_edges: int = 6, seed: int = 20240601, q: int = 2) -> list[NetworkInstance]:
    """
    Seeded random networks with 1..max_edges links. Each is valid, has no
    non-terminal sinks, and every source has an outgoing link.
    """
    F = make_field(q)
    rng = random.Random(seed)
    out: list[NetworkInstance] = []
    while len(out) < count:
        n_src = rng.randint(1, 2)
        n_int = rng.randint(0, 3)
        n_term = rng.randint(1, 2)
        m_edges = rng.randint(1, max_edges)
        srcs = [f"S{i + 1}" for i in range(n_src)]
        ints = [f"v{i + 1}" for i in range(n_int)]
        terms = [f"t{i + 1}" for i in range(n_term)]
        order = srcs + ints + terms  # edges only go forward: always a DAG
        rank = {v: i for i, v in enumerate(order)}
        cands = [(u, w) for u in srcs + ints for w in ints + terms if rank[u] < rank[w]]
        es = [rng.choice(cands) for _ in range(m_edges)]
        tails = {u for u, _ in es}
        heads = {w for _, w in es}
        used_int = [v for v in ints if v in tails or v in heads]
        if any(s not in tails for s in srcs):
            continue
        if any(not (v in tails and v in heads) for v in used_int):
            continue
        used_terms = [t for t in terms if t in heads]
        if not used_terms:
            continue
        owned = {}
        k = 0
        for s in srcs:
            cnt = rng.randint(1, 2)
            owned[s] = tuple(f"m{k + j + 1}" for j in range(cnt))
            k += cnt
        msgs = [x for v in owned.values() for x in v]
        edges = tuple(Edge(f"e{i + 1}", u, w) for i, (u, w) in enumerate(es))
        delta = {e.id: rng.randint(0, 1) for e in edges}
        terminals = {}
        for t in used_terms:
            dem = tuple(sorted(rng.sample(msgs, rng.randint(1, len(msgs)))))
            terminals[t] = dem
            delta[t] = rng.randint(0, 1)
        inst = NetworkInstance(F, tuple(srcs + used_int + used_terms), edges, owned, terminals, delta)
        if validate_network_instance(inst):
            out.append(inst)
    return out
