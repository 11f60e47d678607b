from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from ncic.codes import NetworkCode, linear, procedural
from ncic.equiv import nc_to_ic_instance
from ncic.errors import InvalidInstance, LimitExceeded, PreconditionError
from ncic.field import make_field
from ncic.fixtures import get_fixture
from ncic.icsie import optimal_codelength
from ncic.model import NetworkInstance
from ncic.ncle import (
    ALL,
    REACHABLE,
    check_error_resistance,
    derive_conventional_instances,
    find_network_code,
    is_redundant_link,
    network_code_exists,
    reachable_inputs,
    remove_edge,
    remove_edges,
    validate_ncle,
)
from ncic.sweeps import network_suite

import oracles

F2 = make_field(2)


def test_fig2_valid_under_reachable_inputs():
    fx = get_fixture("fig2")
    v = validate_ncle(fx.network, fx.network_code, REACHABLE)
    assert v.valid and not v.report.delivery_failures


def test_fig2_majority_decoder_not_robust_everywhere():
    # off the reachable set the decoder is not 1-error resistant
    fx = get_fixture("fig2")
    v = validate_ncle(fx.network, fx.network_code, ALL)
    assert not v.valid
    bad = v.report.functions["t"]
    assert not bad.ok and bad.out_base != bad.out_corrupted


def test_fig2_decoder_robustness_counts():
    fx = get_fixture("fig2")
    bases = reachable_inputs(fx.network, fx.network_code)["t"]
    assert len(bases) == 4
    assert check_error_resistance(fx.network_code.decoders["t"], 1, bases).ok


def test_fig4c_valid_and_fails_with_larger_budget():
    fx = get_fixture("fig4c")
    assert validate_ncle(fx.network, fx.network_code)
    harder = replace(fx.network, delta={**fx.network.delta, "t": 2})
    v = validate_ncle(harder, fx.network_code)
    assert not v.valid and not v.report.functions["t"].ok


def test_delivery_failure_reported():
    fx = get_fixture("fig4c")
    wrong = NetworkCode(dict(fx.network_code.encoders), {"t": linear(F2, [1, 1, 0])})
    v = validate_ncle(fx.network, wrong)
    assert not v.valid and v.report.delivery_failures


def test_error_resistance_witness():
    f = linear(F2, [1, 1])
    c = check_error_resistance(f, 1, [(0, 0)])
    assert not c.ok and c.base == (0, 0) and f(c.corrupted) != f(c.base)
    with pytest.raises(LimitExceeded):
        check_error_resistance(f, 1, [(0, 0)] * 10, limit=5)


def test_unknown_quantification():
    fx = get_fixture("fig4c")
    with pytest.raises(ValueError):
        validate_ncle(fx.network, fx.network_code, "sometimes")


# --------------------------------------------------------------------------
# direct search


def test_search_finds_fixture_codes():
    for name in ("fig2", "fig4c"):
        net = get_fixture(name).network
        code = find_network_code(net)
        assert code is not None
        assert validate_ncle(net, code)


def test_search_rejects_fig4c_with_larger_budget():
    net = get_fixture("fig4c").network
    assert not network_code_exists(replace(net, delta={**net.delta, "t": 2}))


SMALL = [n for n in network_suite(max_edges=3) if all(len(n.inputs(e)) <= 2 for e in n.edge_ids)]


@settings(max_examples=80)
@given(st.sampled_from(SMALL))
def test_search_matches_table_enumeration(net):
    code = find_network_code(net)
    assert (code is not None) == oracles.brute_ncle_exists(net)
    if code is not None:
        assert validate_ncle(net, code)


def test_parallel_links_with_single_error():
    net = NetworkInstance.build(
        F2, ["A", "t"], [("a", "A", "t"), ("b", "A", "t"), ("c", "A", "t")],
        {"A": ("x",)}, {"t": ("x",)}, {"t": 1},
    )
    assert network_code_exists(net)
    assert not network_code_exists(remove_edge(net, "c"))
    code = NetworkCode({e: linear(F2, [1]) for e in "abc"}, {"t": procedural(F2, "majority", 3)})
    assert validate_ncle(net, code)


# --------------------------------------------------------------------------
# redundant links


def test_fig4c_has_no_redundant_link():
    net = get_fixture("fig4c").network
    for e in net.edge_ids:
        assert not is_redundant_link(net, e)
        assert not is_redundant_link(net, e, method="direct")


def test_extra_copy_is_redundant():
    net = NetworkInstance.build(
        F2, ["A", "t"], [("a", "A", "t"), ("b", "A", "t")], {"A": ("x",)}, {"t": ("x",)},
    )
    assert is_redundant_link(net, "a") and is_redundant_link(net, "b", method="direct")
    with pytest.raises(ValueError):
        is_redundant_link(net, "a", method="guess")
    with pytest.raises(PreconditionError):
        remove_edge(net, "zz")


def test_remove_edges_zeroes_delta():
    net = get_fixture("fig4c").network
    red = remove_edges(net, ["e1"], zero_delta=True)
    assert "e1" not in red.edge_ids and set(red.delta.values()) == {0}


# --------------------------------------------------------------------------
# conventional instances


def test_fig4c_conventional_instances():
    net = get_fixture("fig4c").network
    outs = list(derive_conventional_instances(net))
    # delta_t = 1 removes two of the three terminal inputs
    assert len(outs) == 3
    for d in outs:
        assert len(d.terminal_inputs("t")) == 1
        assert all(v == 0 for v in d.delta.values())
        ic, _ = nc_to_ic_instance(d, allow_empty_inputs=True)
        assert optimal_codelength(ic, "nonlinear").length == len(d.edges)


def test_conventional_instances_reject_invalid():
    net = NetworkInstance.build(F2, ["A", "t"], [("a", "A", "t")], {"A": ("x",)}, {"t": ("y",)})
    with pytest.raises(InvalidInstance):
        list(derive_conventional_instances(net))
