"""
Acceptance criteria, each timed against its budget. Every test records one
PASS/FAIL line; the lines are printed in the terminal summary (and to stdout,
visible with -s).
"""

import json
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE_LINES
from ncic import io, linalg
from ncic.cli import main
from ncic.equiv import (
    PRIME,
    check_t_all_redundant,
    compare_network_codes,
    ic_code_to_nc_code,
    ic_to_nc_instance,
    nc_code_to_ic_code,
    nc_to_ic_instance,
    rename_messages,
    same_index_instance,
    structurally_equal,
)
from ncic.field import error_patterns
from ncic.fixtures import FIXTURES, get_fixture
from ncic.icsie import (
    admissible_deletions,
    delete_side_info_edges,
    find_delta_s_cycle,
    in_confusion_set,
    is_independent_component,
    optimal_codelength,
)
from ncic.model import Edge, NetworkInstance
from ncic.ncle import (
    check_error_resistance,
    derive_conventional_instances,
    is_redundant_link,
    network_code_exists,
    reachable_inputs,
)
from ncic.sweeps import index_suite, network_suite, random_dags

E3P, E2P = "e3" + PRIME, "e2" + PRIME
RENAME = {E3P: "e4", E2P: "e5"}


@contextmanager
def criterion(num: int, text: str, budget: float):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        if ok and dt >= budget:
            ok = False
        line = f"[{num:02d}] {text}: {'PASS' if ok else 'FAIL'} ({dt:.2f}s of {budget:g}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert dt < budget, f"took {dt:.2f}s, budget {budget}s"


@pytest.fixture
def fx(tmp_path):
    for name in FIXTURES:
        main(["fixtures", "emit", name, "--out", str(tmp_path)])
    return tmp_path


def cli(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


_FEASIBLE: list = []


def feasible_networks():
    """Networks of the exhaustive suite that admit a valid network code (cached)."""
    if not _FEASIBLE:
        _FEASIBLE.extend(n for n in network_suite() if network_code_exists(n))
    return _FEASIBLE


def rename_net(net, m):
    edges = tuple(Edge(m.get(e.id, e.id), e.tail, e.head) for e in net.edges)
    delta = {m.get(k, k): v for k, v in net.delta.items()}
    return NetworkInstance(net.field, net.nodes, edges, net.sources, net.terminals, delta)


def test_fig2_code_components_via_cli(fx, capsys, tmp_path):
    with criterion(1, "fig2 network code converts to its 12 index code components", 1.0):
        out_path = tmp_path / "ic.json"
        code, out = cli(
            capsys, "convert", "code-nc2ic", "--network", fx / "fig2.json", "--code", fx / "fig2-code.json",
            "--out", out_path,
        )
        assert code == 0
        lines = [ln.strip() for ln in out.splitlines() if ln.strip().startswith("X_B(")]
        # global maps read off the network by hand
        expected_src = {
            "e1": "s1", "e2": "s1", "e3": "s2", "e4": "s2", "e5": "s1", "e6": "s1 + s2",
            "e7": "s2", "e8": "s1", "e9": "s1 + s2", "e10": "s1", "e11": "s1 + s2", "e12": "s2",
        }
        assert lines == [f"X_B({e}) = {s} + {e}" for e, s in expected_src.items()]
        ic_code, msgs = io.index_code_from_dict(io.load_json(str(out_path)))
        assert ic_code.length == 12 and msgs[:2] == ("s1", "s2")
        for comp, (e, s) in zip(ic_code.components(), expected_src.items()):
            want = [0] * 14
            want[msgs.index(e)] = 1
            for x in s.split(" + "):
                want[msgs.index(x)] = 1
            assert list(comp) == want


def test_fig2_decoder_error_resistance():
    with criterion(2, "fig2 decoder is 1-error resistant on its reachable inputs", 1.0):
        fxt = get_fixture("fig2")
        bases = reachable_inputs(fxt.network, fxt.network_code)["t"]
        assert len(bases) == 4
        # weight <= 1 patterns over GF(2) at length 5: the zero pattern plus 5 single flips
        assert len(error_patterns(2, 5, 1)) == 6
        assert check_error_resistance(fxt.network_code.decoders["t"], 1, bases).ok


def test_fig4a_rewrite_via_cli(fx, capsys, tmp_path):
    with criterion(3, "fig4a rewrites to fig4b and fig4c, with the extended and network codes", 1.0):
        code, out = cli(
            capsys, "convert", "ic2nc", "--graph", fx / "fig4a.json",
            "--out", tmp_path / "net.json", "--modified-out", tmp_path / "mod.json",
        )
        assert code == 0
        assert f"duplicated link {E3P} -> e3" in out and f"duplicated link {E2P} -> e2" in out
        modified = io.index_from_dict(io.load_json(str(tmp_path / "mod.json")))
        net = io.network_from_dict(io.load_json(str(tmp_path / "net.json")))
        # e3' plays the role of e4 and e2' of e5
        assert same_index_instance(rename_messages(modified, RENAME), get_fixture("fig4b").index)
        assert structurally_equal(rename_net(net, RENAME), get_fixture("fig4c").network)

        code, out = cli(
            capsys, "convert", "code-extend", "--graph", fx / "fig4a.json", "--code", fx / "fig4a-code.json",
            "--out", tmp_path / "ext.json",
        )
        assert code == 0
        assert f"(s + e1, e1 + e2, e2 + e3, e3 + {E3P}, e2 + {E2P})" in out

        code, out = cli(
            capsys, "convert", "code-ic2nc", "--graph", fx / "fig4a.json", "--code", tmp_path / "ext.json",
            "--sigma", "0", "--out", tmp_path / "nc.json",
        )
        assert code == 0
        got = {ln.split(" = ")[0].strip(): ln.split(" = ")[1].strip() for ln in out.splitlines() if " = " in ln}
        want = {"e1": E2P, "e2": E3P, "e3": "s", E3P: "s", E2P: E3P}
        for e, rhs in want.items():
            assert got[e] == rhs
        nc = io.network_code_from_dict(io.load_json(str(tmp_path / "nc.json")))
        for e, rhs in want.items():
            assert net.inputs(e) == (rhs,) and nc.encoders[e].coeffs == ((1,),)


def test_fig4a_generator_flips_via_cli(fx, capsys, tmp_path):
    with criterion(4, "fig4a code accepted; every single flip is valid or yields a checked witness", 1.0):
        code, out = cli(capsys, "validate-icsie", "--graph", fx / "fig4a.json", "--code", fx / "fig4a-code.json")
        assert code == 0 and "ICSIE: valid" in out
        inst = get_fixture("fig4a").index
        base = io.load_json(str(fx / "fig4a-code.json"))
        rejected = 0
        for i in range(3):
            for j in range(4):
                d = json.loads(json.dumps(base))
                d["components"][i][j] ^= 1
                p = tmp_path / f"flip-{i}-{j}.json"
                p.write_text(json.dumps(d))
                code, out = cli(capsys, "validate-icsie", "--graph", fx / "fig4a.json", "--code", p, "--format", "json")
                verdict = json.loads(out)
                if code == 0:
                    assert verdict["valid"]
                    continue
                assert code == 1 and not verdict["valid"]
                z = tuple(verdict["witness_z"])
                # re-check against the set definition and the flipped generator
                assert in_confusion_set(inst, z)
                comps = d["components"]
                G = tuple(tuple(comps[c][r] for c in range(3)) for r in range(4))
                assert not any(linalg.vec_mat(inst.field, z, G, 3))
                _, human = cli(capsys, "validate-icsie", "--graph", fx / "fig4a.json", "--code", p)
                assert "witness Z" in human
                rejected += 1
        assert rejected > 0


def test_cycle_law_on_index_suite():
    with criterion(5, "acyclic iff the optimal length is n, linear and nonlinear", 600.0):
        count = 0
        for inst in index_suite():
            acyclic = find_delta_s_cycle(inst) is None
            for mode in ("linear", "nonlinear"):
                assert acyclic == (optimal_codelength(inst, mode).length == inst.n), (inst, mode)
            count += 1
        assert count > 3000


def test_deletion_monotonicity():
    with criterion(6, "deleting admissible side information never beats the error-resistant optimum", 1800.0):
        checked = 0
        for inst in index_suite():
            if all(r.delta == 0 for r in inst.receivers):
                continue
            for mode in ("linear", "nonlinear"):
                top = optimal_codelength(inst, mode).length
                for dels in admissible_deletions(inst):
                    reduced = delete_side_info_edges(inst, dels)
                    assert optimal_codelength(reduced, mode).length <= top, (inst, dels, mode)
                    checked += 1
        assert checked > 10000


def test_t_all_redundant():
    with criterion(7, "the all-edges receiver is redundant for fig2 and fig4b", 5.0):
        ic, rep = nc_to_ic_instance(get_fixture("fig2").network)
        assert check_t_all_redundant(ic, rep.partition).redundant
        net, rep4 = ic_to_nc_instance(get_fixture("fig4a").index)
        assert check_t_all_redundant(rep4.modified, rep4.modified_partition).redundant
        ic4c, rep4c = nc_to_ic_instance(get_fixture("fig4c").network)
        assert check_t_all_redundant(ic4c, rep4c.partition).redundant


def test_code_round_trip():
    with criterion(8, "fig2 and fig4c network codes survive the round trip through index codes", 60.0):
        for name in ("fig2", "fig4c"):
            fxt = get_fixture(name)
            back = ic_code_to_nc_code(fxt.network, nc_code_to_ic_code(fxt.network, fxt.network_code))
            cmp = compare_network_codes(fxt.network, fxt.network_code, back)
            assert cmp.same, (name, cmp)


def test_instance_round_trip():
    with criterion(9, "network to index to network is the identity on fixtures and random DAGs", 300.0):
        nets = [get_fixture(n).network for n in ("fig2", "fig4c")] + random_dags(1000)
        for net in nets:
            ic, rep = nc_to_ic_instance(net)
            back, _ = ic_to_nc_instance(ic, rep.partition)
            assert structurally_equal(back, net), net


def test_redundant_links_are_independent_components():
    with criterion(10, "redundant links coincide with independent components", 1800.0):
        checked = 0
        for net in feasible_networks():
            ic, rep = nc_to_ic_instance(net, allow_empty_inputs=True)
            for e in net.edge_ids:
                indep = is_independent_component(ic, e, rep.partition, len(net.edges))
                assert is_redundant_link(net, e, "direct") == indep, (net, e)
                assert is_redundant_link(net, e, "icsie") == indep, (net, e)
                checked += 1
        assert checked > 0


def test_conventional_instances_admit_codes():
    with criterion(11, "every derived conventional instance admits a network code", 1800.0):
        derived = 0
        for net in feasible_networks():
            for d in derive_conventional_instances(net):
                dic, _ = nc_to_ic_instance(d, allow_empty_inputs=True)
                assert optimal_codelength(dic, "nonlinear").length == len(d.edges), (net, d)
                derived += 1
        assert derived > 0


def test_feasible_networks_have_optimum_at_edge_count():
    with criterion(12, "feasible networks convert to index instances with optimum |E|", 1800.0):
        feasible = 0
        for net in feasible_networks():
            ic, _ = nc_to_ic_instance(net, allow_empty_inputs=True)
            assert optimal_codelength(ic, "nonlinear").length == len(net.edges), net
            feasible += 1
        assert feasible > 0
