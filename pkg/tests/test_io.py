import json

import pytest
from hypothesis import given

from ncic import io
from ncic.codes import from_table
from ncic.errors import FormatError
from ncic.equiv import ic_to_nc_instance
from ncic.field import make_field
from ncic.fixtures import FIXTURES, get_fixture
from ncic.ncle import find_network_code
from ncic.sweeps import random_dags

from strategies import index_instances


def _through_json(d):
    return json.loads(json.dumps(d))


@pytest.mark.parametrize("name", list(FIXTURES))
def test_fixture_round_trip(name):
    fx = get_fixture(name)
    if fx.network is not None:
        d = _through_json(io.network_to_dict(fx.network))
        assert io.network_from_dict(d) == fx.network
        if fx.network_code is not None:
            cd = _through_json(io.network_code_to_dict(fx.network_code, 2))
            assert io.network_code_from_dict(cd) == fx.network_code
    if fx.index is not None:
        assert io.index_from_dict(_through_json(io.index_to_dict(fx.index))) == fx.index
    if fx.index_code is not None:
        msgs = fx.index.messages if fx.index is not None else None
        code, m = io.index_code_from_dict(_through_json(io.index_code_to_dict(fx.index_code, msgs)))
        assert code == fx.index_code and m == msgs


def test_table_codes_round_trip():
    code = get_fixture("fig4a").index_code.to_table()
    back, msgs = io.index_code_from_dict(_through_json(io.index_code_to_dict(code)))
    assert back == code and msgs is None
    net = random_dags(1, seed=3)[0]
    nc = find_network_code(net)
    if nc is not None:
        assert io.network_code_from_dict(_through_json(io.network_code_to_dict(nc, 2))) == nc
    f = from_table(make_field(3), 1, [2, 0, 1])
    assert io.local_from_dict(make_field(3), io.local_to_dict(f)) == f


@given(index_instances(qs=(2, 3, 4), max_n=4, max_m=4, max_delta=2, multi_demand=True))
def test_index_instance_round_trip(inst):
    assert io.index_from_dict(_through_json(io.index_to_dict(inst))) == inst


def test_origin_survives():
    net, rep = ic_to_nc_instance(get_fixture("fig4a").index)
    assert io.index_from_dict(_through_json(io.index_to_dict(rep.modified))) == rep.modified


@pytest.mark.parametrize(
    "doc,frag",
    [
        ({"q": 2, "messages": []}, "missing field 'receivers'"),
        ({"type": "index", "format_version": 9, "q": 2}, "format_version"),
        ({"type": "network", "q": 2, "messages": [], "receivers": []}, "expected a 'index'"),
        ({"type": "index", "q": 6, "messages": [], "receivers": []}, "bad field size"),
        ({"type": "index", "q": 2, "messages": ["a"], "receivers": [{"wants": ["a"]}]}, "malformed"),
        ([], "JSON object"),
    ],
)
def test_format_errors(doc, frag):
    with pytest.raises(FormatError, match=frag):
        io.index_from_dict(doc)


def test_network_format_errors():
    with pytest.raises(FormatError, match="missing field 'terminals'"):
        io.network_from_dict({"q": 2, "nodes": [], "sources": {}, "edges": []})
    with pytest.raises(FormatError, match="unknown kind"):
        io.local_from_dict(make_field(2), {"kind": "neural"})
    with pytest.raises(FormatError, match="component length"):
        io.index_code_from_dict({"q": 2, "n": 3, "components": [[1, 0]]})


def test_file_helpers(tmp_path):
    p = tmp_path / "x.json"
    io.save_json(str(p), get_fixture("fig4c").network)
    assert io.network_from_dict(io.load_json(str(p))) == get_fixture("fig4c").network
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(FormatError, match="invalid JSON"):
        io.load_json(str(bad))
    with pytest.raises(FormatError, match="cannot read"):
        io.load_json(str(tmp_path / "missing.json"))


def test_reports_are_jsonable():
    net, rep = ic_to_nc_instance(get_fixture("fig4a").index)
    d = json.loads(io.dumps(rep))
    assert d["dup_map"] == {"e3'": "e3", "e2'": "e2"}
    assert d["log"][0]["case"] == 4
    assert d["partition"]["e_messages"] == ["e1", "e2", "e3"]
    assert json.loads(io.dumps({"s": frozenset({"b", "a"})})) == {"s": ["a", "b"]}
