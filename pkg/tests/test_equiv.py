import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ncic.codes import IndexCode, NetworkCode, from_table, linear
from ncic.equiv import (
    PRIME,
    check_functional_dependence,
    check_proposition1,
    check_t_all_redundant,
    classify_problematic_cases,
    compare_network_codes,
    extend_ic_code,
    global_maps,
    ic_code_to_nc_code,
    ic_to_nc_instance,
    link_receiver_id,
    modify_side_info_graph,
    nc_code_to_ic_code,
    nc_to_ic_instance,
    network_from_modified,
    permute_code,
    reduce_along_dup_map,
    rename_messages,
    restrict_nc_code_to_ic_code,
    same_index_instance,
    structurally_equal,
)
from ncic.errors import DependenceViolated, InvalidIndexCode, NonUniqueExtension, PreconditionError, WrongLength
from ncic.field import make_field
from ncic.fixtures import get_fixture
from ncic.icsie import optimal_codelength, validate_icsie
from ncic.model import IndexInstance, NetworkInstance, find_unicast_acyclic_partition, make_partition
from ncic.ncle import find_network_code, validate_ncle
from ncic.sweeps import random_dags

from strategies import index_instances

F2, F3 = make_field(2), make_field(3)


# --------------------------------------------------------------------------
# network -> index


def test_fig2_instance_conversion():
    net = get_fixture("fig2").network
    ic, rep = nc_to_ic_instance(net)
    assert ic.n == 14 and ic.m == 13
    assert ic.messages[:2] == ("s1", "s2")
    r5 = ic.receiver_map["R_e5"]
    assert r5.wants == ("e5",) and r5.side_info == ("e1", "e3") and r5.delta == 0
    t = ic.receiver_map["t"]
    assert t.wants == ("s1", "s2") and t.side_info == ("e2", "e5", "e7", "e9", "e11") and t.delta == 1
    assert rep.target_length == 12
    assert set(rep.partition.e_messages) == set(net.edge_ids)
    assert rep.receiver_layout["e7"] == "R_e7"


def test_conversion_conditions_hold_for_converted_instances():
    for name in ("fig2", "fig4c"):
        ic, rep = nc_to_ic_instance(get_fixture(name).network)
        from ncic.model import split_multi_demand_receivers

        assert check_proposition1(split_multi_demand_receivers(ic), rep.partition)


def test_conversion_condition_violations():
    cyc = get_fixture("two-cycle").index
    p = make_partition(cyc, ["x1", "x2"])
    v = check_proposition1(cyc, p)
    assert not v and any("condition 1" in x for x in v.violations)
    mixed = IndexInstance.build(
        F2, ["s", "a", "b"],
        [("R_a", ["a"], ["s", "b"], 0), ("R_b", ["b"], ["s"], 0), ("t", ["s"], ["a"], 0)],
    )
    v = check_proposition1(mixed, make_partition(mixed, ["a", "b"]))
    assert not v and any("condition 3" in x for x in v.violations)
    term = IndexInstance.build(
        F2, ["s", "r", "a"],
        [("R_a", ["a"], ["s"], 0), ("t", ["s"], ["a", "r"], 0), ("u", ["r"], [], 0)],
    )
    v = check_proposition1(term, make_partition(term, ["a"]))
    assert v and v.warnings


def test_t_all_redundant_on_converted_fixtures():
    ic, rep = nc_to_ic_instance(get_fixture("fig2").network)
    assert check_t_all_redundant(ic, rep.partition)
    fb = get_fixture("fig4b").index
    assert check_t_all_redundant(fb, make_partition(fb, ["e1", "e2", "e3", "e4", "e5"]))


def test_t_all_not_redundant_witness():
    inst = IndexInstance.build(F2, ["s", "a"], [("R_a", ["a"], ["s"], 1), ("t", ["s"], ["a"], 0)])
    assert check_t_all_redundant(inst, make_partition(inst, ["a"]))
    bare = IndexInstance.build(F2, ["s", "a", "b"], [("R_a", ["a"], ["s", "b"], 0), ("R_b", ["b"], ["s", "a"], 0)])
    v = check_t_all_redundant(bare, make_partition(bare, ["a", "b"]))
    assert not v and v.witness == (0, 1, 1)


# --------------------------------------------------------------------------
# code conversion


def test_fig2_code_components():
    fx = get_fixture("fig2")
    code = nc_code_to_ic_code(fx.network, fx.network_code)
    msgs = ("s1", "s2") + fx.network.edge_ids
    expected = {}
    for i in (1, 2, 5, 8, 10):
        expected[f"e{i}"] = {"s1"}
    for i in (3, 4, 7, 12):
        expected[f"e{i}"] = {"s2"}
    for i in (6, 9, 11):
        expected[f"e{i}"] = {"s1", "s2"}
    comps = code.components()
    assert len(comps) == 12
    for e, c in zip(fx.network.edge_ids, comps):
        support = {m for m, v in zip(msgs, c) if v}
        assert support == expected[e] | {e}
    ic, _ = nc_to_ic_instance(fx.network)
    assert validate_icsie(ic, code)


def test_nonlinear_network_code_gives_table():
    net = NetworkInstance.build(
        F2, ["A", "B", "t"], [("a", "A", "t"), ("b", "B", "t"), ("c", "A", "t")],
        {"A": ("x",), "B": ("y",)}, {"t": ("x",)},
    )
    code = NetworkCode(
        {"a": linear(F2, [1]), "b": linear(F2, [1]), "c": from_table(F2, 1, [1, 0])},
        {"t": linear(F2, [1, 0, 0])},
    )
    ic_code = nc_code_to_ic_code(net, code)
    assert ic_code.kind == "table"
    ic, _ = nc_to_ic_instance(net)
    assert validate_icsie(ic, ic_code)
    # sigma = 0 pins X_E to the network's own global maps
    back = ic_code_to_nc_code(net, ic_code, sigma=(0, 0, 0))
    assert compare_network_codes(net, code, back).same
    # the default sigma (codeword of the zero message) shifts c by a constant
    shifted = ic_code_to_nc_code(net, ic_code)
    assert validate_ncle(net, shifted)
    assert global_maps(net, shifted)["c"] == tuple(1 - v for v in global_maps(net, code)["c"])


@pytest.mark.parametrize("name", ["fig2", "fig4c"])
def test_round_trip_identical_over_gf2(name):
    fx = get_fixture(name)
    ic_code = nc_code_to_ic_code(fx.network, fx.network_code)
    back = ic_code_to_nc_code(fx.network, ic_code)
    cmp = compare_network_codes(fx.network, fx.network_code, back)
    assert cmp.same, cmp
    assert validate_ncle(fx.network, back)


def test_round_trip_negates_in_odd_characteristic():
    net = NetworkInstance.build(F3, ["A", "v", "t"], [("a", "A", "v"), ("b", "v", "t")], {"A": ("x",)}, {"t": ("x",)})
    code = NetworkCode({"a": linear(F3, [2]), "b": linear(F3, [1])}, {"t": linear(F3, [2])})
    back = ic_code_to_nc_code(net, nc_code_to_ic_code(net, code))
    ga, gb = global_maps(net, code), global_maps(net, back)
    for e in net.edge_ids:
        assert gb[e] == tuple(F3.neg(v) for v in ga[e])
    assert validate_ncle(net, back)


def test_ic_to_nc_code_errors():
    fx = get_fixture("fig4c")
    good = nc_code_to_ic_code(fx.network, fx.network_code)
    with pytest.raises(WrongLength):
        ic_code_to_nc_code(fx.network, IndexCode.from_components(F2, 6, good.components()[:4]))
    with pytest.raises(WrongLength):
        ic_code_to_nc_code(fx.network, IndexCode.from_components(F2, 5, [[1] * 5] * 5))
    bad = IndexCode.from_components(F2, 6, [[0] * 6] * 5)
    with pytest.raises(InvalidIndexCode):
        ic_code_to_nc_code(fx.network, bad)
    # a codeword outside the image has no preimage at all
    short = IndexCode.from_components(F2, 6, good.components()[:4] + [good.components()[0]])
    with pytest.raises((InvalidIndexCode, NonUniqueExtension)):
        ic_code_to_nc_code(fx.network, short)


def test_sigma_choice_changes_nothing_that_matters():
    fx = get_fixture("fig4c")
    code = nc_code_to_ic_code(fx.network, fx.network_code)
    for sigma in itertools.product(range(2), repeat=5):
        back = ic_code_to_nc_code(fx.network, code, sigma=sigma)
        assert validate_ncle(fx.network, back)


def test_permute_code():
    code = IndexCode.from_components(F2, 3, [[1, 0, 1]])
    p = permute_code(code, ["a", "b", "c"], ["c", "a", "b"])
    assert p.components() == [(1, 1, 0)]
    assert permute_code(code.to_table(), ["a", "b", "c"], ["c", "a", "b"]).encode((1, 0, 0)) == (1,)
    with pytest.raises(PreconditionError):
        permute_code(code, ["a", "b", "c"], ["a", "b", "d"])


def test_functional_dependence():
    assert check_functional_dependence((0, 1, 1, 0), (0, 1, 1, 0))
    assert check_functional_dependence((1, 1, 1, 1), (0, 1, 1, 0))
    assert not check_functional_dependence((0, 1, 0, 1), (0, 1, 1, 0))
    with pytest.raises(PreconditionError):
        check_functional_dependence((0,), (0, 1))


# --------------------------------------------------------------------------
# index -> network


def test_fig4a_cases():
    inst = get_fixture("fig4a").index
    cases = classify_problematic_cases(inst, find_unicast_acyclic_partition(inst))
    assert [(c.case, c.subject) for c in cases] == [(4, "e3"), (4, "e2")]
    assert cases[0].participants == ("R_e2", "t")


def test_fig4a_pipeline():
    fx4a, fx4b, fx4c = get_fixture("fig4a"), get_fixture("fig4b"), get_fixture("fig4c")
    net, rep = ic_to_nc_instance(fx4a.index)
    assert rep.dup_map == {"e3" + PRIME: "e3", "e2" + PRIME: "e2"}
    renamed = rename_messages(rep.modified, {"e3" + PRIME: "e4", "e2" + PRIME: "e5"})
    assert same_index_instance(renamed, fx4b.index)
    renamed_net = rename_net(net, {"e3" + PRIME: "e4", "e2" + PRIME: "e5"})
    assert structurally_equal(renamed_net, fx4c.network)
    ext = extend_ic_code(fx4a.index, fx4a.index_code, rep)
    assert ext.components() == [
        (1, 1, 0, 0, 0, 0), (0, 1, 1, 0, 0, 0), (0, 0, 1, 1, 0, 0), (0, 0, 0, 1, 1, 0), (0, 0, 1, 0, 0, 1),
    ]
    assert validate_icsie(rep.modified, permute_code(ext, fx4a.index.messages + rep.added_messages, rep.modified.messages))
    assert same_index_instance(reduce_along_dup_map(rep.modified, rep), fx4a.index)


def rename_net(net, m):
    from ncic.model import Edge

    edges = tuple(Edge(m.get(e.id, e.id), e.tail, e.head) for e in net.edges)
    delta = {m.get(k, k): v for k, v in net.delta.items()}
    return NetworkInstance(net.field, net.nodes, edges, net.sources, net.terminals, delta)


def test_fig4a_code_to_network_with_zero_sigma():
    fx = get_fixture("fig4a")
    net, rep = ic_to_nc_instance(fx.index)
    ext = extend_ic_code(fx.index, fx.index_code, rep)
    msgs = fx.index.messages + rep.added_messages
    code = ic_code_to_nc_code(net, ext, sigma=(0,) * 5, messages=msgs)
    assert validate_ncle(net, code)
    e3p, e2p = "e3" + PRIME, "e2" + PRIME
    ins = {e: net.inputs(e) for e in net.edge_ids}
    assert ins["e1"] == (e2p,) and code.encoders["e1"].coeffs == ((1,),)
    assert ins["e2"] == (e3p,) and code.encoders["e2"].coeffs == ((1,),)
    assert ins["e3"] == ("s",) and code.encoders["e3"].coeffs == ((1,),)
    assert ins[e3p] == ("s",) and code.encoders[e3p].coeffs == ((1,),)
    assert ins[e2p] == (e3p,) and code.encoders[e2p].coeffs == ((1,),)
    restricted = restrict_nc_code_to_ic_code(net, code, rep)
    assert validate_icsie(fx.index, restricted)
    assert restricted.components() == [(1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1)]


def test_restrict_checks_dependence():
    fx = get_fixture("fig4a")
    net, rep = ic_to_nc_instance(fx.index)
    code = find_network_code(net)
    enc = dict(code.encoders)
    # a constant on e3 cannot determine what its duplicate carries
    enc["e3"] = from_table(F2, 1, [0, 0])
    with pytest.raises(DependenceViolated):
        restrict_nc_code_to_ic_code(net, NetworkCode(enc, code.decoders), rep)


def test_fresh_source_links_for_terminal_holding_source():
    from ncic.model import make_partition as mp

    inst = IndexInstance.build(
        F2, ["s", "r", "a"],
        [("R_a", ["a"], ["s"], 0), ("t", ["s"], ["a"], 0), ("w1", ["r"], ["s"], 0), ("w2", ["r"], [], 0)],
    )
    net, rep = ic_to_nc_instance(inst, mp(inst, ["a"]))
    assert rep.fresh_map and set(rep.fresh_map.values()) == {"s"}
    assert {a.case for a in rep.log} <= {1, 2, 3, 8, 9, 10}
    assert not classify_problematic_cases(rep.modified, rep.modified_partition)
    assert set(net.terminals) == {"t", "w1", "w2"}


# --------------------------------------------------------------------------
# structural round trips


@pytest.mark.parametrize("name", ["fig2", "fig4c"])
def test_network_round_trip_fixtures(name):
    net = get_fixture(name).network
    ic, rep = nc_to_ic_instance(net)
    back, _ = ic_to_nc_instance(ic, rep.partition)
    assert structurally_equal(back, net)
    auto, _ = ic_to_nc_instance(ic)
    assert structurally_equal(auto, net)


@settings(max_examples=100)
@given(st.sampled_from(random_dags(200, seed=7)))
def test_network_round_trip_random(net):
    ic, rep = nc_to_ic_instance(net)
    assert not classify_problematic_cases(*_split(ic, rep))
    back, brep = ic_to_nc_instance(ic, rep.partition)
    assert structurally_equal(back, net)
    assert not brep.log


def _split(ic, rep):
    from ncic.model import split_multi_demand_receivers

    return split_multi_demand_receivers(ic), rep.partition


def test_structural_equality_detects_delta():
    net = get_fixture("fig4c").network
    from dataclasses import replace

    assert not structurally_equal(net, replace(net, delta={**net.delta, "e2": 1}))
    other = replace(net, delta={**net.delta, "t": 0})
    assert not structurally_equal(net, other)


@settings(max_examples=150)
@given(index_instances(qs=(2,), max_n=4, max_m=4, multi_demand=True))
def test_index_to_network_invariants(inst):
    net, rep = ic_to_nc_instance(inst)
    assert not classify_problematic_cases(rep.modified, rep.modified_partition)
    assert same_index_instance(reduce_along_dup_map(rep.modified, rep), rep.source_instance)
    assert len(rep.log) <= 10 * (rep.source_instance.n + rep.source_instance.m)
    assert net.edge_ids == rep.modified_partition.e_messages or set(net.edge_ids) == set(rep.modified_partition.e_messages)
    # every valid code extends to a valid code of the rewritten graph
    c = optimal_codelength(rep.source_instance, "linear").code
    ext = extend_ic_code(rep.source_instance, c, rep)
    order = rep.source_instance.messages + rep.added_messages
    assert validate_icsie(rep.modified, permute_code(ext, order, rep.modified.messages))
    assert network_from_modified(rep.modified, rep.modified_partition).edge_ids == net.edge_ids


def test_rename_messages_renames_link_receivers():
    inst = get_fixture("fig4b").index
    r = rename_messages(inst, {"e4": "f"})
    assert "R_f" in r.receiver_map and r.receiver_map["R_e2"].side_info == ("f",)
    assert link_receiver_id("x") == "R_x"


def test_modify_requires_single_demand():
    inst = IndexInstance.build(F2, ["a", "b"], [("T", ["a", "b"], [], 0)])
    with pytest.raises(PreconditionError):
        modify_side_info_graph(inst, make_partition(inst, []))
