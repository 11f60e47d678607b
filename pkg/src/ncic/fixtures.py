"""Bundled example instances and codes, all over GF(2)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .codes import IndexCode, NetworkCode, linear, procedural
from .field import make_field
from .model import IndexInstance, NetworkInstance


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    network: NetworkInstance | None = None
    network_code: NetworkCode | None = None
    index: IndexInstance | None = None
    index_code: IndexCode | None = None


def fig2() -> Fixture:
    """
    Two sources, twelve links, one terminal demanding both messages with
    delta_t = 1. The terminal sees (s1, s1, s2, s1+s2, s1+s2) on e2, e5, e7,
    e9, e11 and decodes with the majority procedure.
    """
    F = make_field(2)
    edges = [
        ("e1", "A", "C"),
        ("e2", "A", "t"),
        ("e3", "B", "C"),
        ("e4", "B", "D"),
        ("e5", "C", "t"),
        ("e6", "C", "E"),
        ("e7", "D", "t"),
        ("e8", "A", "F"),
        ("e9", "E", "t"),
        ("e10", "F", "G"),
        ("e11", "G", "t"),
        ("e12", "D", "G"),
    ]
    delta = {e[0]: 0 for e in edges}
    delta["t"] = 1
    net = NetworkInstance.build(
        F,
        ["A", "B", "C", "D", "E", "F", "G", "t"],
        edges,
        {"A": ("s1",), "B": ("s2",)},
        {"t": ("s1", "s2")},
        delta,
    )
    one = linear(F, [1])
    enc = {
        "e1": one, "e2": one, "e3": one, "e4": one,
        "e5": linear(F, [1, 0]),  # In(C) = (e1, e3)
        "e6": linear(F, [1, 1]),
        "e7": one, "e8": one, "e9": one, "e10": one,
        "e11": linear(F, [1, 1]),  # In(G) = (e10, e12)
        "e12": one,
    }
    code = NetworkCode(enc, {"t": procedural(F, "algorithm1-majority")})
    return Fixture("fig2", "two-source network with a 1-error-resistant terminal", network=net, network_code=code)


def _fig4a_instance() -> IndexInstance:
    F = make_field(2)
    return IndexInstance.build(
        F,
        ["s", "e1", "e2", "e3"],
        [
            ("R_e1", ["e1"], ["e2"], 0),
            ("R_e2", ["e2"], ["e3"], 0),
            ("R_e3", ["e3"], ["s"], 0),
            ("t", ["s"], ["e1", "e2", "e3"], 1),
        ],
    )


def fig4a() -> Fixture:
    F = make_field(2)
    inst = _fig4a_instance()
    code = IndexCode.from_components(F, 4, [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])
    return Fixture("fig4a", "side-information graph with a chain into a 1-error receiver", index=inst, index_code=code)


def fig4b() -> Fixture:
    F = make_field(2)
    inst = IndexInstance.build(
        F,
        ["s", "e1", "e2", "e3", "e4", "e5"],
        [
            ("R_e1", ["e1"], ["e5"], 0),
            ("R_e2", ["e2"], ["e4"], 0),
            ("R_e3", ["e3"], ["s"], 0),
            ("t", ["s"], ["e1", "e2", "e3"], 1),
            ("R_e4", ["e4"], ["s"], 0),
            ("R_e5", ["e5"], ["e4"], 0),
        ],
    )
    comps = [
        [1, 1, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 0],
        [0, 0, 1, 1, 0, 0],
        [0, 0, 0, 1, 1, 0],
        [0, 0, 1, 0, 0, 1],
    ]
    return Fixture(
        "fig4b", "network-shaped rewrite of fig4a with two duplicated links",
        index=inst, index_code=IndexCode.from_components(F, 6, comps),
    )


def fig4c() -> Fixture:
    F = make_field(2)
    net = NetworkInstance.build(
        F,
        ["S", "v4", "v5", "t"],
        [
            ("e1", "v5", "t"),
            ("e2", "v4", "t"),
            ("e3", "S", "t"),
            ("e4", "S", "v4"),
            ("e5", "v4", "v5"),
        ],
        {"S": ("s",)},
        {"t": ("s",)},
        {"e1": 0, "e2": 0, "e3": 0, "e4": 0, "e5": 0, "t": 1},
    )
    one = linear(F, [1])
    code = NetworkCode({e: one for e in net.edge_ids}, {"t": procedural(F, "majority", 3)})
    return Fixture(
        "fig4c", "network read off fig4b: three copies of s reach a majority decoder",
        network=net, network_code=code, index_code=fig4b().index_code,
    )


def two_cycle() -> Fixture:
    F = make_field(2)
    inst = IndexInstance.build(F, ["x1", "x2"], [("R1", ["x1"], ["x2"], 0), ("R2", ["x2"], ["x1"], 0)])
    return Fixture("two-cycle", "two receivers holding each other's message", index=inst,
                   index_code=IndexCode.from_components(F, 2, [[1, 1]]))


def acyclic_chain() -> Fixture:
    F = make_field(2)
    inst = IndexInstance.build(
        F, ["x1", "x2", "x3"],
        [("R1", ["x1"], ["x2"], 0), ("R2", ["x2"], ["x3"], 0), ("R3", ["x3"], [], 0)],
    )
    eye = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    return Fixture("acyclic-chain", "chain without cycles; only the identity length works", index=inst,
                   index_code=IndexCode.from_components(F, 3, eye))


FIXTURES: dict[str, Callable[[], Fixture]] = {
    "fig2": fig2,
    "fig4a": fig4a,
    "fig4b": fig4b,
    "fig4c": fig4c,
    "two-cycle": two_cycle,
    "acyclic-chain": acyclic_chain,
}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def network_fixtures() -> list[Fixture]:
    return [f for f in (b() for b in FIXTURES.values()) if f.network is not None]
