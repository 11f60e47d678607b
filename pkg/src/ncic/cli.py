"""
Command-line front end.

Exit codes: 0 success or positive verdict, 1 negative verdict (a witness is
printed), 2 parse or usage error, 3 enumeration limit exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import equiv, icsie, io, ncle
from .codes import LINEAR, IndexCode, LocalFunction, NetworkCode
from .config import ENUM_LIMIT_ENV, RunConfig
from .errors import LimitExceeded, NcicError
from .fixtures import FIXTURES, get_fixture
from .model import (
    find_unicast_acyclic_partition,
    split_multi_demand_receivers,
    validate_index_instance,
    validate_network_instance,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class _Out:
    """Collects human lines and a machine payload; prints one of them."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.lines: list[str] = []
        self.payload: dict = {}

    def line(self, s: str = "") -> None:
        self.lines.append(s)

    def put(self, **kw) -> None:
        self.payload.update(kw)

    def flush(self) -> None:
        if self.cfg.output_format == "json":
            print(io.dumps(self.payload))
        else:
            print("\n".join(self.lines))


# --------------------------------------------------------------------------
# loading and formatting helpers


def _network(path):
    return io.network_from_dict(io.load_json(path))


def _index(path):
    return io.index_from_dict(io.load_json(path))


def _network_code(path):
    return io.network_code_from_dict(io.load_json(path))


def _index_code(path):
    return io.index_code_from_dict(io.load_json(path))


def _expr(coeffs, names) -> str:
    terms = []
    for c, x in zip(coeffs, names):
        if c:
            terms.append(x if c == 1 else f"{c}*{x}")
    return " + ".join(terms) if terms else "0"


def _component_lines(code: IndexCode, names) -> list[str]:
    if code.kind != LINEAR:
        return [f"table code: n={code.n}, length={code.length}"]
    return [_expr(c, names) for c in code.components()]


def _function_line(fid: str, f: LocalFunction, inputs) -> str:
    if f.kind == LINEAR and f.outputs == 1:
        return f"{fid} = {_expr(f.coeffs[0], inputs)}"
    if f.kind == LINEAR:
        return f"{fid} = (" + ", ".join(_expr(r, inputs) for r in f.coeffs) + ")"
    if f.kind == "procedural":
        return f"{fid} = {f.name}({', '.join(inputs)})"
    return f"{fid} = table[{', '.join(inputs)}] -> {f.outputs} output(s)"


def _aligned(code: IndexCode, msgs, target):
    return equiv.permute_code(code, msgs, target.messages) if msgs else code


def _save(args, obj) -> None:
    out = getattr(args, "out", None)
    if out:
        io.save_json(out, obj)


# --------------------------------------------------------------------------
# validate-*


def cmd_validate_nc(args, out: _Out) -> int:
    v = validate_network_instance(_network(args.network))
    out.put(valid=v.ok, violations=list(v.violations))
    out.line("valid network instance" if v else "invalid network instance")
    for x in v.violations:
        out.line(f"  {x}")
    return EXIT_OK if v else EXIT_NEGATIVE


def cmd_validate_ic(args, out: _Out) -> int:
    v = validate_index_instance(_index(args.graph))
    out.put(valid=v.ok, violations=list(v.violations))
    out.line("valid index instance" if v else "invalid index instance")
    for x in v.violations:
        out.line(f"  {x}")
    return EXIT_OK if v else EXIT_NEGATIVE


def cmd_validate_ncle(args, out: _Out) -> int:
    inst, code = _network(args.network), _network_code(args.code)
    verdict = ncle.validate_ncle(inst, code, out.cfg.quantification)
    rep = verdict.report
    out.put(valid=verdict.valid, quantification=out.cfg.quantification, report=rep)
    out.line(f"NCLE ({out.cfg.quantification}): {'valid' if verdict else 'invalid'}")
    if rep.delivery_failures:
        t, x, got, want = rep.delivery_failures[0]
        out.line(f"  delivery fails at {t}: X_S={x} decoded {got}, wanted {want}")
    for fid, c in rep.functions.items():
        if not c.ok:
            out.line(f"  {fid} not resistant: input {c.base} -> {c.out_base}, corrupted {c.corrupted} -> {c.out_corrupted}")
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_validate_icsie(args, out: _Out) -> int:
    inst = _index(args.graph)
    code, msgs = _index_code(args.code)
    code = _aligned(code, msgs, inst)
    v = icsie.validate_icsie(inst, code)
    out.put(valid=v.valid, witness_z=v.witness_z, witness_x=v.witness_x)
    out.line(f"ICSIE: {'valid' if v else 'invalid'}")
    if not v:
        z = dict(zip(inst.messages, v.witness_z))
        recs = [r.id for r, (w, s, d) in zip(inst.receivers, inst.index_sets) if icsie.receiver_confuses(v.witness_z, w, s, d)]
        out.line(f"  witness Z = {v.witness_z} ({z}) lies in I via {', '.join(recs)}")
        if v.witness_x is not None:
            out.line(f"  messages {v.witness_x} and {inst.field.vadd(v.witness_x, v.witness_z)} share a codeword")
    return EXIT_OK if v else EXIT_NEGATIVE


# --------------------------------------------------------------------------
# convert


def cmd_nc2ic(args, out: _Out) -> int:
    ic, rep = equiv.nc_to_ic_instance(_network(args.network))
    _save(args, ic)
    out.put(instance=ic, partition=rep.partition, target_length=rep.target_length, receiver_layout=rep.receiver_layout)
    out.line(f"index instance: n={ic.n} messages, m={ic.m} receivers, target length {rep.target_length}")
    for r in ic.receivers:
        out.line(f"  {r.id}: wants {{{', '.join(r.wants)}}} holds {{{', '.join(r.side_info)}}} delta={r.delta}")
    return EXIT_OK


def cmd_ic2nc(args, out: _Out) -> int:
    net, rep = equiv.ic_to_nc_instance(_index(args.graph))
    _save(args, net)
    if args.modified_out:
        io.save_json(args.modified_out, rep.modified)
    out.put(
        network=net, modified=rep.modified, partition=rep.partition, dup_map=rep.dup_map,
        fresh_map=rep.fresh_map, log=rep.log, warnings=rep.warnings,
    )
    out.line(f"partition: E = {{{', '.join(rep.partition.e_messages)}}}, S = {{{', '.join(rep.partition.s_messages)}}}")
    for a in rep.log:
        out.line(f"  case {a.case} on {a.subject}: added {a.added_message} (for {a.original}), re-pointed {', '.join(a.repointed)}")
    for d, o in rep.dup_map.items():
        out.line(f"  duplicated link {d} -> {o}")
    out.line(f"network: {len(net.nodes)} nodes, {len(net.edges)} edges")
    for e in net.edges:
        out.line(f"  {e.id}: {e.tail} -> {e.head} delta={net.delta[e.id]}")
    for t, d in net.terminals.items():
        out.line(f"  terminal {t}: demands {{{', '.join(d)}}} In={list(net.terminal_inputs(t))} delta={net.delta[t]}")
    return EXIT_OK


def cmd_code_nc2ic(args, out: _Out) -> int:
    inst, code = _network(args.network), _network_code(args.code)
    ic, _ = equiv.nc_to_ic_instance(inst)
    icode = equiv.nc_code_to_ic_code(inst, code)
    _save(args, io.index_code_to_dict(icode, ic.messages))
    lines = _component_lines(icode, ic.messages)
    out.put(messages=list(ic.messages), code=io.index_code_to_dict(icode, ic.messages), components=lines)
    out.line(f"index code of length {icode.length}:")
    for e, s in zip(inst.edge_ids, lines):
        out.line(f"  X_B({e}) = {s}")
    return EXIT_OK


def _parse_sigma(text):
    if text is None:
        return None
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")


def cmd_code_ic2nc(args, out: _Out) -> int:
    code, msgs = _index_code(args.code)
    if args.graph:
        net, rep = equiv.ic_to_nc_instance(_index(args.graph))
        msgs = msgs or rep.modified.messages
    elif args.network:
        net = _network(args.network)
    else:
        raise NcicError("give --network or --graph")
    sigma = _parse_sigma(args.sigma)
    if sigma is not None and len(sigma) == 1 and code.length > 1:
        sigma = sigma * code.length
    nc = equiv.ic_code_to_nc_code(net, code, sigma=sigma, messages=msgs)
    _save(args, io.network_code_to_dict(nc, net.field.q))
    out.put(network_code=io.network_code_to_dict(nc, net.field.q))
    for e in net.edge_ids:
        out.line(_function_line(e, nc.encoders[e], net.inputs(e)))
    for t in net.terminals:
        out.line(_function_line(t, nc.decoders[t], net.terminal_inputs(t)))
    return EXIT_OK


def cmd_code_extend(args, out: _Out) -> int:
    inst = _index(args.graph)
    code, msgs = _index_code(args.code)
    net, rep = equiv.ic_to_nc_instance(inst)
    code = _aligned(code, msgs, rep.source_instance)
    ext = equiv.extend_ic_code(rep.source_instance, code, rep)
    _save(args, io.index_code_to_dict(ext, rep.modified.messages))
    lines = _component_lines(ext, rep.modified.messages)
    out.put(messages=list(rep.modified.messages), code=io.index_code_to_dict(ext, rep.modified.messages), components=lines)
    out.line(f"extended code of length {ext.length}: ({', '.join(lines)})")
    return EXIT_OK


def cmd_code_restrict(args, out: _Out) -> int:
    inst = _index(args.graph)
    net, rep = equiv.ic_to_nc_instance(inst)
    nc = _network_code(args.code)
    ren = dict(pair.split("=", 1) for pair in (args.rename or []))
    if ren:
        nc = NetworkCode({ren.get(e, e): f for e, f in nc.encoders.items()}, dict(nc.decoders))
    icode = equiv.restrict_nc_code_to_ic_code(net, nc, rep)
    names = rep.source_instance.messages
    _save(args, io.index_code_to_dict(icode, names))
    lines = _component_lines(icode, names)
    out.put(messages=list(names), code=io.index_code_to_dict(icode, names), components=lines)
    out.line(f"restricted code of length {icode.length}: ({', '.join(lines)})")
    return EXIT_OK


# --------------------------------------------------------------------------
# analyze


def cmd_cycles(args, out: _Out) -> int:
    inst = split_multi_demand_receivers(_index(args.graph))
    w = icsie.find_delta_s_cycle(inst)
    out.put(acyclic=w is None, cycle=w)
    if w is None:
        out.line("acyclic: no delta_s-cycle")
    else:
        out.line(f"delta_s-cycle: B = {{{', '.join(w.messages)}}}")
    return EXIT_OK


def cmd_opt_length(args, out: _Out) -> int:
    inst = split_multi_demand_receivers(_index(args.graph))
    modes = ["linear", "nonlinear"] if out.cfg.length_mode == "both" else [out.cfg.length_mode]
    res = {m: icsie.optimal_codelength(inst, m) for m in modes}
    out.put(**{m: {"length": r.length, "code": r.code} for m, r in res.items()})
    out.line(f"N_opt ({'/'.join(modes)}): {'/'.join(str(res[m].length) for m in modes)}")
    return EXIT_OK


def cmd_confusion(args, out: _Out) -> int:
    inst = split_multi_demand_receivers(_index(args.graph))
    conf = icsie.confusion_set(inst)
    per = {r.id: len(conf.for_receiver(r.id)) for r in inst.receivers}
    out.put(size=len(conf), per_receiver=per, vectors=sorted(conf.vectors) if args.list else None)
    out.line(f"|I| = {len(conf)} of {inst.field.q ** inst.n - 1} nonzero vectors")
    for rid, c in per.items():
        out.line(f"  |I_{rid}| = {c}")
    if args.list:
        for z in sorted(conf.vectors):
            out.line("  " + "".join(map(str, z)))
    return EXIT_OK


def _instance_and_partition(args):
    if getattr(args, "network", None):
        ic, rep = equiv.nc_to_ic_instance(_network(args.network))
        return split_multi_demand_receivers(ic), rep.partition
    inst = split_multi_demand_receivers(_index(args.graph))
    return inst, find_unicast_acyclic_partition(inst)


def cmd_t_all(args, out: _Out) -> int:
    inst, part = _instance_and_partition(args)
    v = equiv.check_t_all_redundant(inst, part)
    out.put(redundant=v.redundant, witness=v.witness)
    out.line("t_all is redundant" if v else f"t_all is not redundant; witness Z = {v.witness}")
    return EXIT_OK if v else EXIT_NEGATIVE


def cmd_redundant(args, out: _Out) -> int:
    inst = _network(args.network)
    edges = [args.edge] if args.edge else list(inst.edge_ids)
    res = {e: ncle.is_redundant_link(inst, e, method=args.method) for e in edges}
    out.put(redundant=res)
    for e, r in res.items():
        out.line(f"{e}: {'redundant' if r else 'not redundant'}")
    return EXIT_OK


def cmd_independent(args, out: _Out) -> int:
    inst, part = _instance_and_partition(args)
    edges = [args.edge] if args.edge else list(part.e_messages)
    res = {e: icsie.is_independent_component(inst, e, part) for e in edges}
    out.put(independent=res)
    for e, r in res.items():
        out.line(f"{e}: {'independent' if r else 'not independent'}")
    return EXIT_OK


def cmd_conventional(args, out: _Out) -> int:
    inst = _network(args.network)
    rows = []
    for i, d in enumerate(ncle.derive_conventional_instances(inst)):
        ic, _ = equiv.nc_to_ic_instance(d, allow_empty_inputs=True)
        ok = icsie.has_code_of_length(ic, len(d.edges), "nonlinear")
        gone = sorted(set(inst.edge_ids) - set(d.edge_ids))
        rows.append({"deleted": gone, "edges": len(d.edges), "admits_code": ok})
        out.line(f"#{i}: deleted {{{', '.join(gone)}}}; conventional code {'exists' if ok else 'does not exist'}")
    out.put(instances=rows)
    return EXIT_OK if all(r["admits_code"] for r in rows) else EXIT_NEGATIVE


# --------------------------------------------------------------------------
# fixtures


def cmd_fixtures_list(args, out: _Out) -> int:
    items = {}
    for name in FIXTURES:
        fx = get_fixture(name)
        items[name] = fx.description
        out.line(f"{name:14s} {fx.description}")
    out.put(fixtures=items)
    return EXIT_OK


def cmd_fixtures_emit(args, out: _Out) -> int:
    fx = get_fixture(args.name)
    d = Path(args.out)
    d.mkdir(parents=True, exist_ok=True)
    written = []

    def save(suffix, obj):
        p = d / f"{fx.name}{suffix}.json"
        io.save_json(str(p), obj)
        written.append(str(p))

    if fx.network is not None:
        save("", fx.network)
        if fx.network_code is not None:
            save("-code", io.network_code_to_dict(fx.network_code, fx.network.field.q))
        if fx.index_code is not None:
            save("-index-code", io.index_code_to_dict(fx.index_code))
    else:
        save("", fx.index)
        if fx.index_code is not None:
            save("-code", io.index_code_to_dict(fx.index_code, fx.index.messages))
    out.put(written=written)
    for p in written:
        out.line(f"wrote {p}")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", type=int, help="enumeration limit (default 2^20 or $%s)" % ENUM_LIMIT_ENV)
    common.add_argument("--format", choices=["human", "json"], default="human", dest="output_format")
    common.add_argument("--quantification", choices=["reachable", "all"], default="reachable")
    common.add_argument("--mode", choices=["linear", "nonlinear", "both"], default="linear")

    p = argparse.ArgumentParser(prog="ncic", description="Network codes with link errors and index codes with side-information errors.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(parent, name, fn, help_):
        sp = parent.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    s = add(sub, "validate-nc", cmd_validate_nc, "check a network instance")
    s.add_argument("--network", required=True)
    s = add(sub, "validate-ic", cmd_validate_ic, "check an index instance")
    s.add_argument("--graph", required=True)
    s = add(sub, "validate-ncle", cmd_validate_ncle, "check a network code with link errors")
    s.add_argument("--network", required=True)
    s.add_argument("--code", required=True)
    s = add(sub, "validate-icsie", cmd_validate_icsie, "check an index code with side-information errors")
    s.add_argument("--graph", required=True)
    s.add_argument("--code", required=True)

    conv = sub.add_parser("convert", help="instance and code conversions").add_subparsers(dest="what", required=True)
    s = add(conv, "nc2ic", cmd_nc2ic, "network instance -> index instance")
    s.add_argument("--network", required=True)
    s.add_argument("--out")
    s = add(conv, "ic2nc", cmd_ic2nc, "index instance -> network instance")
    s.add_argument("--graph", required=True)
    s.add_argument("--out")
    s.add_argument("--modified-out")
    s = add(conv, "code-nc2ic", cmd_code_nc2ic, "network code -> index code")
    s.add_argument("--network", required=True)
    s.add_argument("--code", required=True)
    s.add_argument("--out")
    s = add(conv, "code-ic2nc", cmd_code_ic2nc, "index code of length |E| -> network code")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--network")
    g.add_argument("--graph")
    s.add_argument("--code", required=True)
    s.add_argument("--sigma", help="comma-separated codeword; a single value is repeated")
    s.add_argument("--out")
    s = add(conv, "code-extend", cmd_code_extend, "index code on G -> index code on the rewritten G'")
    s.add_argument("--graph", required=True)
    s.add_argument("--code", required=True)
    s.add_argument("--out")
    s = add(conv, "code-restrict", cmd_code_restrict, "network code on the derived network -> index code on G")
    s.add_argument("--graph", required=True)
    s.add_argument("--code", required=True)
    s.add_argument("--rename", nargs="*", metavar="OLD=NEW", help="rename edge ids of the code")
    s.add_argument("--out")

    an = sub.add_parser("analyze", help="structural analyses").add_subparsers(dest="what", required=True)
    s = add(an, "cycles", cmd_cycles, "find a delta_s-cycle")
    s.add_argument("--graph", required=True)
    s = add(an, "opt-length", cmd_opt_length, "optimal codelength")
    s.add_argument("--graph", required=True)
    s = add(an, "confusion-set", cmd_confusion, "size of the confusion set")
    s.add_argument("--graph", required=True)
    s.add_argument("--list", action="store_true")
    for name, fn, help_ in (
        ("t-all", cmd_t_all, "is the all-edges receiver redundant"),
        ("independent", cmd_independent, "independent components"),
    ):
        s = add(an, name, fn, help_)
        g = s.add_mutually_exclusive_group(required=True)
        g.add_argument("--graph")
        g.add_argument("--network")
        if name == "independent":
            s.add_argument("--edge")
    s = add(an, "redundant", cmd_redundant, "redundant links")
    s.add_argument("--network", required=True)
    s.add_argument("--edge")
    s.add_argument("--method", choices=["icsie", "direct"], default="icsie")
    s = add(an, "conventional", cmd_conventional, "derived conventional instances")
    s.add_argument("--network", required=True)

    fx = sub.add_parser("fixtures", help="bundled examples").add_subparsers(dest="what", required=True)
    add(fx, "list", cmd_fixtures_list, "list fixtures")
    s = add(fx, "emit", cmd_fixtures_emit, "write fixture files")
    s.add_argument("name", choices=list(FIXTURES))
    s.add_argument("--out", default=".")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            enum_limit=args.limit or RunConfig.enum_limit,
            quantification=args.quantification,
            length_mode=args.mode,
            output_format=args.output_format,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    previous = os.environ.get(ENUM_LIMIT_ENV)
    if args.limit:
        os.environ[ENUM_LIMIT_ENV] = str(args.limit)
    out = _Out(cfg)
    try:
        code = args.fn(args, out)
    except LimitExceeded as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (NcicError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        # main() may run several times in one process
        if previous is None:
            os.environ.pop(ENUM_LIMIT_ENV, None)
        else:
            os.environ[ENUM_LIMIT_ENV] = previous
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
