"""Graph well-formedness rules; the gate for interpreter and optimizer entry.

Rules are registered by name so future invariants can be added without
touching the checker core. Violations are data, never exceptions.
"""

from dataclasses import dataclass

from . import ir
from .ir import Graph


@dataclass(frozen=True)
class Violation:
    rule: str
    nid: int
    message: str


@dataclass(frozen=True)
class WfReport:
    ok: bool
    violations: tuple[Violation, ...]

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(f"{v.rule} @{v.nid}: {v.message}" for v in self.violations)


def _check_start(g: Graph):
    node = g.kind(0)
    if isinstance(node, ir.NoNode):
        yield Violation("wf_start", 0, "node id 0 is unmapped")
    elif not isinstance(node, ir.StartNode):
        yield Violation("wf_start", 0, f"node 0 is {node.kind_name()}, expected StartNode")


def _check_closed(g: Graph):
    ids = g.ids()
    for nid, node in sorted(g.items()):
        for target in ir.inputs_of(node) + ir.successors_of(node):
            if target not in ids:
                yield Violation("wf_closed", nid, f"edge to unmapped id {target}")


def _check_ends(g: Graph):
    for nid, node in sorted(g.items()):
        if isinstance(node, (ir.EndNode, ir.LoopEndNode)) and not g.usages(nid):
            yield Violation("wf_ends", nid, f"{node.kind_name()} has no usage")


def _check_phis(g: Graph):
    for nid, node in sorted(g.items()):
        if not isinstance(node, ir.ValuePhiNode):
            continue
        merge = g.kind(node.merge)
        if not isinstance(merge, (ir.MergeNode, ir.LoopBeginNode)):
            yield Violation(
                "wf_phis", nid,
                f"merge edge {node.merge} is {merge.kind_name()}, expected a merge",
            )
        elif len(node.values) != len(merge.ends):
            yield Violation(
                "wf_phis", nid,
                f"{len(node.values)} value inputs for {len(merge.ends)} merge ends",
            )


def _check_self_ids(g: Graph):
    # Nodes that embed their own id must agree with their storage key;
    # a mismatch silently corrupts method-state reads.
    for nid, node in sorted(g.items()):
        self_id = getattr(node, "selfId", None)
        if self_id is not None and self_id != nid:
            yield Violation("wf_selfid", nid, f"selfId field is {self_id}")


# Data kinds whose evaluation recurses into input edges. ValuePhiNode is a
# leaf (it reads the method state), which is what legalizes loop back-edges.
_RECURSIVE_DATA = (
    ir.NegateNode, ir.AddNode, ir.MulNode, ir.IntegerLessThanNode,
    ir.ConditionalNode, ir.ValueProxyNode,
)


def _check_data_acyclic(g: Graph):
    # Expression evaluation terminates only if the data subgraph is a DAG.
    WHITE, GREY, BLACK = 0, 1, 2
    color = {}

    def visit(nid):
        if not isinstance(g.kind(nid), _RECURSIVE_DATA):
            return None
        state = color.get(nid, WHITE)
        if state == GREY:
            return nid
        if state == BLACK:
            return None
        color[nid] = GREY
        for target in ir.inputs_of(g.kind(nid)):
            hit = visit(target)
            if hit is not None:
                return hit
        color[nid] = BLACK
        return None

    for nid, _ in sorted(g.items()):
        hit = visit(nid)
        if hit is not None:
            yield Violation("wf_acyclic", hit, "cycle through data input edges")
            return


DEFAULT_RULES = (
    ("wf_start", _check_start),
    ("wf_closed", _check_closed),
    ("wf_ends", _check_ends),
    ("wf_phis", _check_phis),
    ("wf_selfid", _check_self_ids),
    ("wf_acyclic", _check_data_acyclic),
)


def check(g: Graph, extra_rules=()) -> WfReport:
    """Run all registered rules and collect every violation."""
    violations = []
    for _, rule in tuple(DEFAULT_RULES) + tuple(extra_rules):
        violations.extend(rule(g))
    return WfReport(ok=not violations, violations=tuple(violations))


def wf_start(g: Graph) -> bool:
    return not list(_check_start(g))


def wf_closed(g: Graph) -> bool:
    return not list(_check_closed(g))


def wf_ends(g: Graph) -> bool:
    return not list(_check_ends(g))


def wf_phis(g: Graph) -> bool:
    return not list(_check_phis(g))
