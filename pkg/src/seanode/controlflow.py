"""Small-step control flow within one method: (nid, m, h) -> (nid', m', h').

The step function owns the phi-update protocol: when an end node is
reached, the value inputs selected by that end's position are all
evaluated under the state *before* the step, then written simultaneously.
"""

import enum
from dataclasses import dataclass

from . import ir, runtime
from .dataflow import EvalContext, EvalStuck, evaluate
from .ir import Graph
from .runtime import DynamicHeap, MethodState, ObjRef, TypeMismatch, Value


class StepStuck(Exception):
    """No small-step rule applies to the configuration."""

    def __init__(self, nid: int, reason: str):
        super().__init__(f"@{nid}: {reason}")
        self.nid = nid
        self.reason = reason


@dataclass(frozen=True)
class LocalConfig:
    nid: int
    state: MethodState
    heap: DynamicHeap


class LocalOutcome(enum.Enum):
    RUNNING = "Running"
    HIT_RETURN = "HitReturn"
    HIT_UNWIND = "HitUnwind"
    HIT_INVOKE = "HitInvoke"
    STUCK = "Stuck"


def phis_of(g: Graph, merge: int) -> list[int]:
    """Phi nodes attached to a merge, in ascending id order."""
    node = g.kind(merge)
    if not isinstance(node, (ir.MergeNode, ir.LoopBeginNode)):
        raise StepStuck(merge, f"{node.kind_name()} is not a merge")
    return sorted(
        nid for nid in g.usages(merge)
        if isinstance(g.kind(nid), ir.ValuePhiNode) and g.kind(nid).merge == merge
    )


def merge_of_end(g: Graph, end: int) -> tuple[int, int]:
    """Resolve an end node to (merge id, position of this end in merge.ends)."""
    node = g.kind(end)
    if isinstance(node, ir.LoopEndNode):
        merge = node.loopBegin
        if not isinstance(g.kind(merge), ir.LoopBeginNode):
            raise StepStuck(end, f"loopBegin edge {merge} is not a LoopBeginNode")
    elif isinstance(node, ir.EndNode):
        merges = [
            u for u in g.usages(end)
            if isinstance(g.kind(u), (ir.MergeNode, ir.LoopBeginNode))
        ]
        if not merges:
            raise StepStuck(end, "end node has no merge usage")
        if len(merges) > 1:
            raise StepStuck(end, f"end node has ambiguous merge usages {sorted(merges)}")
        merge = merges[0]
    else:
        raise StepStuck(end, f"{node.kind_name()} is not an end node")
    ends = g.kind(merge).ends
    if end not in ends:
        raise StepStuck(end, f"end not listed in ends of merge {merge}")
    return merge, ends.index(end)


def phi_updates(g: Graph, params, state: MethodState, merge: int, index: int):
    """Evaluate the index-th value input of every phi of the merge, all under
    the given (pre-step) state."""
    ctx = EvalContext(g, state, tuple(params))
    updates = []
    for phi_nid in phis_of(g, merge):
        phi = g.kind(phi_nid)
        if index >= len(phi.values):
            raise StepStuck(phi_nid, f"phi has no value input for end position {index}")
        updates.append((phi_nid, evaluate(ctx, phi.values[index])))
    return updates


def _eval(g, params, state, nid) -> Value:
    try:
        return evaluate(EvalContext(g, state, tuple(params)), nid)
    except EvalStuck as e:
        raise StepStuck(e.nid, e.reason) from e


def _resolve_object(g, params, state, node) -> ObjRef | None:
    # None addresses the static-field region.
    if node.objectOpt is None:
        return None
    v = _eval(g, params, state, node.objectOpt)
    if not isinstance(v, ObjRef):
        raise StepStuck(node.objectOpt, f"expected an object reference, got {v}")
    return v


def step(g: Graph, params, c: LocalConfig, on_store=None) -> LocalConfig:
    """Apply the one local rule that matches the current node.

    on_store, when given, is called with (address, field, value) for every
    heap write, in program order; used by the equivalence harness.
    """
    node = g.kind(c.nid)

    if ir.is_sequential(node):
        return LocalConfig(ir.successors_of(node)[0], c.state, c.heap)

    if isinstance(node, ir.IfNode):
        cond = _eval(g, params, c.state, node.condition)
        try:
            took_true = runtime.val_to_bool(cond)
        except TypeMismatch as e:
            raise StepStuck(node.condition, str(e)) from e
        target = node.trueSuccessor if took_true else node.falseSuccessor
        return LocalConfig(target, c.state, c.heap)

    if isinstance(node, (ir.EndNode, ir.LoopEndNode)):
        merge, index = merge_of_end(g, c.nid)
        updates = phi_updates(g, params, c.state, merge, index)
        return LocalConfig(merge, c.state.set_many(updates), c.heap)

    if isinstance(node, ir.NewInstanceNode):
        ref, heap = c.heap.new_instance(node.instanceClass)
        return LocalConfig(node.next, c.state.set(c.nid, ref), heap)

    if isinstance(node, ir.LoadFieldNode):
        obj = _resolve_object(g, params, c.state, node)
        v = c.heap.load_field(node.field, obj)
        return LocalConfig(node.next, c.state.set(c.nid, v), c.heap)

    if isinstance(node, ir.StoreFieldNode):
        val = _eval(g, params, c.state, node.value)
        obj = _resolve_object(g, params, c.state, node)
        heap = c.heap.store_field(node.field, obj, val)
        if on_store is not None:
            addr = obj.ref if obj is not None else runtime.STATIC_REF
            on_store(addr, node.field, val)
        return LocalConfig(node.next, c.state, heap)

    raise StepStuck(c.nid, f"no local rule for {node.kind_name()}")


# Nodes the local driver stops on; their rules live in the global semantics.
_GLOBAL_KINDS = {
    ir.ReturnNode: LocalOutcome.HIT_RETURN,
    ir.UnwindNode: LocalOutcome.HIT_UNWIND,
    ir.InvokeNode: LocalOutcome.HIT_INVOKE,
    ir.InvokeWithExceptionNode: LocalOutcome.HIT_INVOKE,
}


def run_local(g: Graph, params, c: LocalConfig, fuel: int) -> tuple[LocalConfig, LocalOutcome]:
    """Iterate step until a global-rule node, stuckness, or fuel runs out."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    for _ in range(fuel):
        outcome = _GLOBAL_KINDS.get(type(g.kind(c.nid)))
        if outcome is not None:
            return c, outcome
        try:
            c = step(g, params, c)
        except StepStuck:
            return c, LocalOutcome.STUCK
    return c, LocalOutcome.RUNNING
