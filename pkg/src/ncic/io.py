"""JSON file formats for instances, codes and reports (``format_version`` 1)."""

from __future__ import annotations

import dataclasses
import json
from typing import Any

from .codes import LINEAR, PROCEDURAL, TABLE, IndexCode, LocalFunction, NetworkCode
from .errors import FormatError
from .field import make_field
from .model import Edge, IndexInstance, NetworkInstance, Partition, Receiver

FORMAT_VERSION = 1


def _need(d: dict, key: str, kind: str):
    if key not in d:
        raise FormatError(f"{kind}: missing field {key!r}")
    return d[key]


def _check_header(d: Any, kind: str) -> None:
    if not isinstance(d, dict):
        raise FormatError(f"{kind}: expected a JSON object")
    v = d.get("format_version", FORMAT_VERSION)
    if v != FORMAT_VERSION:
        raise FormatError(f"{kind}: unsupported format_version {v}")
    t = d.get("type")
    if t is not None and t != kind:
        raise FormatError(f"expected a {kind!r} document, got {t!r}")


def _field(d: dict, kind: str):
    try:
        return make_field(int(_need(d, "q", kind)))
    except FormatError:
        raise
    except Exception as exc:  # NotPrimePower, TooLarge, ValueError
        raise FormatError(f"{kind}: bad field size: {exc}") from exc


# --------------------------------------------------------------------------
# instances


def network_to_dict(inst: NetworkInstance) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "type": "network",
        "q": inst.field.q,
        "nodes": list(inst.nodes),
        "sources": {v: list(m) for v, m in inst.sources.items()},
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head, "delta": inst.delta[e.id]} for e in inst.edges],
        "terminals": [{"id": t, "demands": list(d), "delta": inst.delta[t]} for t, d in inst.terminals.items()],
    }


def network_from_dict(d: dict) -> NetworkInstance:
    kind = "network"
    _check_header(d, kind)
    try:
        F = _field(d, kind)
        edges, delta = [], {}
        for e in _need(d, "edges", kind):
            edges.append(Edge(str(e["id"]), str(e["tail"]), str(e["head"])))
            delta[str(e["id"])] = int(e.get("delta", 0))
        terms = {}
        for t in _need(d, "terminals", kind):
            terms[str(t["id"])] = tuple(str(x) for x in t["demands"])
            delta[str(t["id"])] = int(t.get("delta", 0))
        sources = {str(v): tuple(str(x) for x in m) for v, m in _need(d, "sources", kind).items()}
        nodes = tuple(str(v) for v in _need(d, "nodes", kind))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"{kind}: malformed document: {exc!r}") from exc
    return NetworkInstance(F, nodes, tuple(edges), sources, terms, delta)


def index_to_dict(inst: IndexInstance) -> dict:
    recs = []
    for r in inst.receivers:
        rd = {"id": r.id, "wants": list(r.wants), "side_info": list(r.side_info), "delta": r.delta}
        if r.origin is not None:
            rd["origin"] = r.origin
        recs.append(rd)
    return {
        "format_version": FORMAT_VERSION,
        "type": "index",
        "q": inst.field.q,
        "messages": list(inst.messages),
        "receivers": recs,
    }


def index_from_dict(d: dict) -> IndexInstance:
    kind = "index"
    _check_header(d, kind)
    try:
        F = _field(d, kind)
        recs = tuple(
            Receiver(
                str(r["id"]),
                tuple(str(x) for x in r["wants"]),
                tuple(str(x) for x in r.get("side_info", ())),
                int(r.get("delta", 0)),
                r.get("origin"),
            )
            for r in _need(d, "receivers", kind)
        )
        msgs = tuple(str(x) for x in _need(d, "messages", kind))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"{kind}: malformed document: {exc!r}") from exc
    return IndexInstance(F, msgs, recs)


# --------------------------------------------------------------------------
# codes


def local_to_dict(f: LocalFunction) -> dict:
    if f.kind == LINEAR:
        return {"kind": LINEAR, "coeffs": [list(r) for r in f.coeffs]}
    if f.kind == TABLE:
        return {"kind": TABLE, "arity": f.arity, "outputs": f.outputs, "rows": [list(r) for r in f.table]}
    return {"kind": PROCEDURAL, "name": f.name, "arity": f.arity}


def local_from_dict(F, d: dict) -> LocalFunction:
    kind = d.get("kind")
    try:
        if kind == LINEAR:
            rows = tuple(tuple(int(c) for c in r) for r in d["coeffs"])
            arity = len(rows[0]) if rows else int(d.get("arity", 0))
            return LocalFunction(F, arity, LINEAR, len(rows), coeffs=rows)
        if kind == TABLE:
            rows = tuple(tuple(int(c) for c in r) for r in d["rows"])
            return LocalFunction(F, int(d["arity"]), TABLE, int(d.get("outputs", 1)), table=rows)
        if kind == PROCEDURAL:
            from .codes import procedural

            return procedural(F, str(d["name"]), d.get("arity"))
    except FormatError:
        raise
    except Exception as exc:
        raise FormatError(f"local function: {exc}") from exc
    raise FormatError(f"local function: unknown kind {kind!r}")


def network_code_to_dict(code: NetworkCode, q: int) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "type": "network_code",
        "q": q,
        "encoders": {e: local_to_dict(f) for e, f in code.encoders.items()},
        "decoders": {t: local_to_dict(f) for t, f in code.decoders.items()},
    }


def network_code_from_dict(d: dict) -> NetworkCode:
    kind = "network_code"
    _check_header(d, kind)
    F = _field(d, kind)
    enc = {str(e): local_from_dict(F, f) for e, f in _need(d, "encoders", kind).items()}
    dec = {str(t): local_from_dict(F, f) for t, f in _need(d, "decoders", kind).items()}
    return NetworkCode(enc, dec)


def index_code_to_dict(code: IndexCode, messages=None) -> dict:
    d: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "type": "index_code",
        "q": code.field.q,
        "n": code.n,
        "length": code.length,
        "kind": code.kind,
    }
    if messages is not None:
        d["messages"] = list(messages)
    if code.kind == LINEAR:
        d["components"] = [list(c) for c in code.components()]
    else:
        d["rows"] = [list(r) for r in code.table]
    return d


def index_code_from_dict(d: dict) -> tuple[IndexCode, tuple[str, ...] | None]:
    """The code and its optional message order."""
    kind = "index_code"
    _check_header(d, kind)
    F = _field(d, kind)
    msgs = tuple(str(x) for x in d["messages"]) if "messages" in d else None
    try:
        if d.get("kind", LINEAR) == LINEAR:
            comps = [[int(c) for c in r] for r in _need(d, "components", kind)]
            n = int(d.get("n", len(msgs) if msgs else (len(comps[0]) if comps else 0)))
            if any(len(c) != n for c in comps):
                raise FormatError("index_code: component length differs from n")
            return IndexCode.from_components(F, n, comps), msgs
        rows = [[int(c) for c in r] for r in _need(d, "rows", kind)]
        return IndexCode.from_table(F, int(_need(d, "n", kind)), rows), msgs
    except FormatError:
        raise
    except Exception as exc:
        raise FormatError(f"index_code: {exc}") from exc


# --------------------------------------------------------------------------
# generic reports


def to_jsonable(obj: Any) -> Any:
    """Dataclass reports (and anything they contain) as plain JSON values."""
    if isinstance(obj, NetworkInstance):
        return network_to_dict(obj)
    if isinstance(obj, IndexInstance):
        return index_to_dict(obj)
    if isinstance(obj, IndexCode):
        return index_code_to_dict(obj)
    if isinstance(obj, Partition):
        return {
            "e_messages": list(obj.e_messages),
            "s_messages": list(obj.s_messages),
            "e_receivers": dict(obj.e_receivers),
            "t_receivers": list(obj.t_receivers),
        }
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.repr}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(x) for x in items]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=False, ensure_ascii=False)


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc


def save_json(path: str, obj: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
        fh.write("\n")
