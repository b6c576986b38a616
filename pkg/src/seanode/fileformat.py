"""The seanode/1 on-disk program format.

A program file is JSON: a version string and a list of methods, each a
signature plus node records. Node records name their kind and carry a
field map matching the kind's declared fields: edges are integers, edge
lists are arrays, optional edges are present-or-absent, constants are
{"int": <signed 32-bit decimal>}. Loading validates structure strictly;
nothing is silently defaulted. Saving is canonical (sorted node ids,
declared field order), so load followed by save is byte-identity on
canonical files.
"""

import json
from dataclasses import fields as dc_fields
from pathlib import Path

from . import ir
from .ir import Graph, IRNode, Program, Signature
from .runtime import INT_MAX, INT_MIN, IntVal

FORMAT_VERSION = "seanode/1"


class FormatError(Exception):
    pass


class ParseError(FormatError):
    def __init__(self, reason: str, line: int | None = None):
        at = f" (line {line})" if line is not None else ""
        super().__init__(f"{reason}{at}")
        self.reason = reason
        self.line = line


class DuplicateId(FormatError):
    def __init__(self, nid: int, method: str):
        super().__init__(f"duplicate node id {nid} in method {method}")
        self.nid = nid


class UnknownKind(FormatError):
    def __init__(self, kind: str, method: str):
        super().__init__(f"unknown node kind {kind!r} in method {method}")
        self.kind = kind


def _edge_arities(cls) -> dict[str, str]:
    arities = {name: arity for name, arity in cls.INPUTS}
    arities.update({name: ir.ONE for name in cls.SUCCESSORS})
    return arities


def _encode_field(name: str, value):
    if name == "const":
        if not isinstance(value, IntVal):
            raise ParseError(f"only integer constants are serializable, got {value}")
        return {"int": value.value}
    if name == "targetMethod":
        return {
            "class": value.className,
            "name": value.methodName,
            "params": list(value.parameterTypes),
        }
    if isinstance(value, tuple):
        return list(value)
    return value


def _node_record(nid: int, node: IRNode) -> dict:
    arities = _edge_arities(type(node))
    out: dict = {}
    for f in dc_fields(node):
        value = getattr(node, f.name)
        if arities.get(f.name) == ir.OPT and value is None:
            continue
        out[f.name] = _encode_field(f.name, value)
    return {"id": nid, "kind": node.kind_name(), "fields": out}


def _signature_record(sig: Signature) -> dict:
    return {
        "class": sig.className,
        "name": sig.methodName,
        "params": list(sig.parameterTypes),
    }


def dumps(program: Program) -> str:
    doc = {
        "version": FORMAT_VERSION,
        "methods": [
            {
                "signature": _signature_record(sig),
                "nodes": [_node_record(nid, node) for nid, node in sorted(g.items())],
            }
            for sig, g in program.methods.items()
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def save(program: Program, path) -> None:
    Path(path).write_text(dumps(program))


def _req(cond: bool, reason: str):
    if not cond:
        raise ParseError(reason)


def _node_id(value, reason: str) -> int:
    _req(isinstance(value, int) and not isinstance(value, bool) and value >= 0, reason)
    return value


def _parse_signature(raw, where: str) -> Signature:
    _req(isinstance(raw, dict), f"{where}: signature must be an object")
    _req(set(raw) == {"class", "name", "params"},
         f"{where}: signature needs exactly class/name/params")
    _req(isinstance(raw["class"], str) and isinstance(raw["name"], str),
         f"{where}: signature class/name must be strings")
    params = raw["params"]
    _req(isinstance(params, list) and all(isinstance(p, str) for p in params),
         f"{where}: signature params must be a list of type strings")
    return Signature(raw["class"], raw["name"], tuple(params))


def _parse_field(cls, name: str, raw, where: str):
    arities = _edge_arities(cls)
    if name in arities:
        if arities[name] == ir.MANY:
            _req(isinstance(raw, list), f"{where}: field {name} must be an array")
            return tuple(
                _node_id(v, f"{where}: field {name} entries must be node ids")
                for v in raw
            )
        return _node_id(raw, f"{where}: field {name} must be a node id")
    if name == "const":
        _req(isinstance(raw, dict) and set(raw) == {"int"},
             f'{where}: const must be {{"int": <decimal>}}')
        v = raw["int"]
        _req(isinstance(v, int) and not isinstance(v, bool)
             and INT_MIN <= v <= INT_MAX,
             f"{where}: const out of 32-bit range")
        return IntVal(v)
    if name == "targetMethod":
        return _parse_signature(raw, where)
    if name in ("index", "selfId"):
        return _node_id(raw, f"{where}: field {name} must be a non-negative integer")
    if name in ("field", "instanceClass"):
        _req(isinstance(raw, str), f"{where}: field {name} must be a string")
        return raw
    raise ParseError(f"{where}: unhandled field {name}")


def _parse_node(raw, method: str) -> tuple[int, IRNode]:
    where = f"method {method}"
    _req(isinstance(raw, dict) and set(raw) == {"id", "kind", "fields"},
         f"{where}: node records need exactly id/kind/fields")
    nid = _node_id(raw["id"], f"{where}: node id must be a non-negative integer")
    where = f"method {method}, node {nid}"
    kind = raw["kind"]
    if not isinstance(kind, str) or kind not in ir.NODE_KINDS or kind == "NoNode":
        raise UnknownKind(str(kind), method)
    cls = ir.NODE_KINDS[kind]
    field_map = raw["fields"]
    _req(isinstance(field_map, dict), f"{where}: fields must be an object")

    arities = _edge_arities(cls)
    kwargs = {}
    declared = [f.name for f in dc_fields(cls)]
    for name in declared:
        if name in field_map:
            kwargs[name] = _parse_field(cls, name, field_map[name], where)
        elif arities.get(name) == ir.OPT:
            kwargs[name] = None
        else:
            raise ParseError(f"{where}: missing required field {name!r}")
    unknown = set(field_map) - set(declared)
    if unknown:
        raise ParseError(f"{where}: unknown fields {sorted(unknown)}")
    return nid, cls(**kwargs)


def loads(text: str) -> Program:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from e
    _req(isinstance(doc, dict) and set(doc) == {"version", "methods"},
         "top level needs exactly version/methods")
    _req(doc["version"] == FORMAT_VERSION,
         f"unsupported format version {doc['version']!r}")
    _req(isinstance(doc["methods"], list), "methods must be an array")

    methods: dict[Signature, Graph] = {}
    for raw_method in doc["methods"]:
        _req(isinstance(raw_method, dict) and set(raw_method) == {"signature", "nodes"},
             "method entries need exactly signature/nodes")
        sig = _parse_signature(raw_method["signature"], "method")
        _req(sig not in methods, f"duplicate method signature {sig}")
        _req(isinstance(raw_method["nodes"], list),
             f"method {sig}: nodes must be an array")
        nodes: dict[int, IRNode] = {}
        for raw_node in raw_method["nodes"]:
            nid, node = _parse_node(raw_node, str(sig))
            if nid in nodes:
                raise DuplicateId(nid, str(sig))
            nodes[nid] = node
        _req(0 in nodes and isinstance(nodes[0], ir.StartNode),
             f"method {sig}: node 0 must be a StartNode")
        methods[sig] = Graph(nodes)
    return Program(methods)


def load(path) -> Program:
    return loads(Path(path).read_text())
