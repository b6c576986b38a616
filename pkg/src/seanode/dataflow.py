"""Big-step evaluation of side-effect-free expression subgraphs.

Expressions form a DAG whose leaves are constants, parameters, and
control-flow nodes whose last value is latched in the method state.
Evaluation is pure and deterministic; integer arithmetic wraps at 32 bits.
"""

from dataclasses import dataclass

from . import ir, runtime
from .ir import Graph
from .runtime import IntVal, MethodState, TypeMismatch, Value


class EvalStuck(Exception):
    """No evaluation rule applies at the node."""

    def __init__(self, nid: int, reason: str):
        super().__init__(f"@{nid}: {reason}")
        self.nid = nid
        self.reason = reason


class ParamOutOfRange(EvalStuck):
    def __init__(self, nid: int, index: int, count: int):
        super().__init__(nid, f"parameter index {index} with {count} parameters")
        self.index = index


@dataclass(frozen=True)
class EvalContext:
    graph: Graph
    state: MethodState
    params: tuple[Value, ...]


def _as_int(ctx: EvalContext, nid: int) -> IntVal:
    v = evaluate(ctx, nid)
    if not isinstance(v, IntVal):
        raise EvalStuck(nid, f"expected an integer, got {v}")
    return v


def evaluate(ctx: EvalContext, nid: int) -> Value:
    """Evaluate the expression rooted at nid to a run-time value."""
    node = ctx.graph.kind(nid)
    if isinstance(node, ir.ConstantNode):
        return node.const
    if isinstance(node, ir.ParameterNode):
        if node.index >= len(ctx.params):
            raise ParamOutOfRange(nid, node.index, len(ctx.params))
        return ctx.params[node.index]
    if ir.is_state_leaf(node):
        return ctx.state[nid]
    if isinstance(node, ir.NegateNode):
        return runtime.int_neg(_as_int(ctx, node.value))
    if isinstance(node, ir.AddNode):
        return runtime.int_add(_as_int(ctx, node.x), _as_int(ctx, node.y))
    if isinstance(node, ir.MulNode):
        return runtime.int_mul(_as_int(ctx, node.x), _as_int(ctx, node.y))
    if isinstance(node, ir.IntegerLessThanNode):
        return runtime.int_less_than(_as_int(ctx, node.x), _as_int(ctx, node.y))
    if isinstance(node, ir.ConditionalNode):
        try:
            took_true = runtime.val_to_bool(evaluate(ctx, node.condition))
        except TypeMismatch as e:
            raise EvalStuck(node.condition, str(e)) from e
        return evaluate(ctx, node.trueValue if took_true else node.falseValue)
    if isinstance(node, ir.ValueProxyNode):
        # The loop-exit edge is a scheduling anchor, not a value dependency.
        return evaluate(ctx, node.value)
    raise EvalStuck(nid, f"no evaluation rule for {node.kind_name()}")


def evaluate_all(ctx: EvalContext, nids) -> list[Value]:
    """Pointwise evaluation of a list of expressions under one state."""
    return [evaluate(ctx, nid) for nid in nids]
