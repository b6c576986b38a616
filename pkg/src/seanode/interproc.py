"""Interprocedural small-step semantics over a frame stack, plus the
whole-program driver with a fuel bound and step tracing."""

import enum
from dataclasses import dataclass, field

from . import ir
from .controlflow import LocalConfig, StepStuck, step
from .dataflow import EvalContext, EvalStuck, evaluate, evaluate_all
from .ir import Graph, Program, Signature
from .runtime import UNDEF, DynamicHeap, MethodState, ObjRef, Value, new_map_state


class GlobalStuck(Exception):
    """No global rule applies to the configuration."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class UnknownMethod(GlobalStuck):
    def __init__(self, sig: Signature):
        super().__init__(f"no graph for method {sig}")
        self.signature = sig


class MalformedCall(GlobalStuck):
    pass


class UnwindWithoutHandler(GlobalStuck):
    pass


class UncaughtTopLevel(GlobalStuck):
    pass


@dataclass(frozen=True)
class Frame:
    graph: Graph
    nid: int
    state: MethodState
    params: tuple[Value, ...]


@dataclass(frozen=True)
class GlobalConfig:
    """Stack of frames (index 0 is the top) and the shared heap."""

    stack: tuple[Frame, ...]
    heap: DynamicHeap


class ExecOutcome(enum.Enum):
    RETURNED = "Returned"
    UNCAUGHT_EXCEPTION = "UncaughtException"
    OUT_OF_FUEL = "OutOfFuel"
    STUCK = "Stuck"


# Process exit-status mapping used by the CLI run/trace subcommands.
EXIT_CODES = {
    ExecOutcome.RETURNED: 0,
    ExecOutcome.UNCAUGHT_EXCEPTION: 3,
    ExecOutcome.OUT_OF_FUEL: 4,
    ExecOutcome.STUCK: 5,
}


@dataclass(frozen=True)
class ExecResult:
    outcome: ExecOutcome
    value: Value | None
    steps: int
    heap: DynamicHeap
    reason: str | None = None

    def __str__(self):
        if self.outcome is ExecOutcome.RETURNED:
            return f"Returned {self.value}"
        if self.outcome is ExecOutcome.UNCAUGHT_EXCEPTION:
            return f"UncaughtException {self.value}"
        if self.outcome is ExecOutcome.OUT_OF_FUEL:
            return f"OutOfFuel after {self.steps} steps"
        return f"Stuck: {self.reason}"


@dataclass(frozen=True)
class TraceStep:
    index: int
    nid: int
    kind_name: str
    nid_after: int
    depth: int
    m_delta: tuple = ()
    h_delta: tuple = ()

    def line(self) -> str:
        parts = [f"step {self.index}: {self.nid} {self.kind_name} -> {self.nid_after}"]
        parts += [f"[m: {nid}<-{v}]" for nid, v in self.m_delta]
        parts += [f"[h: ({_addr(a)},{f})<-{v}]" for a, f, v in self.h_delta]
        return " ".join(parts)


def _addr(a: int) -> str:
    return "static" if a < 0 else str(a)


def _frame_eval(frame: Frame, nid: int) -> Value:
    return evaluate(EvalContext(frame.graph, frame.state, frame.params), nid)


def step_top(program: Program, c: GlobalConfig, on_store=None) -> GlobalConfig:
    """Apply the one matching global rule: lift a local step, invoke,
    return, or unwind."""
    if not c.stack:
        raise GlobalStuck("empty frame stack")
    top = c.stack[0]
    node = top.graph.kind(top.nid)

    if isinstance(node, (ir.InvokeNode, ir.InvokeWithExceptionNode)):
        target = top.graph.kind(node.callTarget)
        if not isinstance(target, ir.MethodCallTargetNode):
            raise MalformedCall(
                f"callTarget of invoke {top.nid} is {target.kind_name()}"
            )
        try:
            args = evaluate_all(
                EvalContext(top.graph, top.state, top.params), target.arguments
            )
        except EvalStuck as e:
            raise GlobalStuck(f"argument evaluation stuck {e}") from e
        callee_graph = program.graph(target.targetMethod)
        if callee_graph is None:
            raise UnknownMethod(target.targetMethod)
        callee = Frame(callee_graph, 0, new_map_state(), tuple(args))
        return GlobalConfig((callee,) + c.stack, c.heap)

    if isinstance(node, ir.ReturnNode):
        if len(c.stack) < 2:
            raise UncaughtTopLevel("return with no calling frame")
        try:
            v = UNDEF if node.resultOpt is None else _frame_eval(top, node.resultOpt)
        except EvalStuck as e:
            raise GlobalStuck(f"return value stuck {e}") from e
        caller = c.stack[1]
        return GlobalConfig(
            (_resume_caller(caller, v, after_exception=False),) + c.stack[2:], c.heap
        )

    if isinstance(node, ir.UnwindNode):
        if len(c.stack) < 2:
            raise UncaughtTopLevel("unwind with no calling frame")
        try:
            e_val = _frame_eval(top, node.exception)
        except EvalStuck as e:
            raise GlobalStuck(f"exception value stuck {e}") from e
        if not isinstance(e_val, ObjRef):
            raise GlobalStuck(f"unwound value is not an object reference: {e_val}")
        caller = c.stack[1]
        return GlobalConfig(
            (_resume_caller(caller, e_val, after_exception=True),) + c.stack[2:], c.heap
        )

    # Everything else is a local transition promoted to the top frame.
    try:
        local = step(top.graph, top.params, LocalConfig(top.nid, top.state, c.heap),
                     on_store=on_store)
    except StepStuck as e:
        raise GlobalStuck(str(e)) from e
    new_top = Frame(top.graph, local.nid, local.state, top.params)
    return GlobalConfig((new_top,) + c.stack[1:], local.heap)


def _resume_caller(caller: Frame, v: Value, after_exception: bool) -> Frame:
    node = caller.graph.kind(caller.nid)
    if after_exception:
        if isinstance(node, ir.InvokeNode):
            raise UnwindWithoutHandler(
                f"invoke {caller.nid} has no exception edge"
            )
        if not isinstance(node, ir.InvokeWithExceptionNode):
            raise GlobalStuck(f"unwind into non-invoke caller node {caller.nid}")
        resume = node.exceptionEdge
    else:
        if not isinstance(node, (ir.InvokeNode, ir.InvokeWithExceptionNode)):
            raise GlobalStuck(f"return into non-invoke caller node {caller.nid}")
        resume = node.next
    return Frame(caller.graph, resume, caller.state.set(caller.nid, v), caller.params)


def initial_config(program: Program, main: Signature, args) -> GlobalConfig:
    g = program.graph(main)
    if g is None:
        raise UnknownMethod(main)
    return GlobalConfig((Frame(g, 0, new_map_state(), tuple(args)),), DynamicHeap())


def _state_delta(before: MethodState, after: MethodState):
    prior = dict(before.items())
    return tuple(
        (nid, v) for nid, v in sorted(after.items()) if prior.get(nid) != v
    )


def _heap_delta(before: DynamicHeap, after: DynamicHeap):
    return tuple(
        (addr, fname, v)
        for (addr, fname), v in sorted(after.fields.items(), key=lambda kv: (kv[0][0], kv[0][1]))
        if before.fields.get((addr, fname)) != v
    )


def run(program: Program, main: Signature, args, fuel: int = 1_000_000,
        on_step=None, on_store=None) -> ExecResult:
    """Drive the global semantics from main's start node to quiescence.

    All failure modes are classified in the result; nothing escapes as an
    exception except a missing main method.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    c = initial_config(program, main, args)
    steps = 0
    while True:
        top = c.stack[0]
        node = top.graph.kind(top.nid)
        if len(c.stack) == 1 and isinstance(node, ir.ReturnNode):
            try:
                v = UNDEF if node.resultOpt is None else _frame_eval(top, node.resultOpt)
            except EvalStuck as e:
                return ExecResult(ExecOutcome.STUCK, None, steps, c.heap, str(e))
            return ExecResult(ExecOutcome.RETURNED, v, steps, c.heap)
        if len(c.stack) == 1 and isinstance(node, ir.UnwindNode):
            try:
                v = _frame_eval(top, node.exception)
            except EvalStuck as e:
                return ExecResult(ExecOutcome.STUCK, None, steps, c.heap, str(e))
            if not isinstance(v, ObjRef):
                return ExecResult(
                    ExecOutcome.STUCK, None, steps, c.heap,
                    f"unwound value is not an object reference: {v}",
                )
            return ExecResult(ExecOutcome.UNCAUGHT_EXCEPTION, v, steps, c.heap)
        if steps == fuel:
            return ExecResult(ExecOutcome.OUT_OF_FUEL, None, steps, c.heap)
        try:
            c2 = step_top(program, c, on_store=on_store)
        except GlobalStuck as e:
            return ExecResult(ExecOutcome.STUCK, None, steps, c.heap, e.reason)
        steps += 1
        if on_step is not None:
            on_step(_trace_step(steps, c, c2, node))
        c = c2


def _trace_step(index: int, before: GlobalConfig, after: GlobalConfig,
                node: ir.IRNode) -> TraceStep:
    top_b, top_a = before.stack[0], after.stack[0]
    if len(after.stack) > len(before.stack):
        m_delta = ()  # callee starts with an empty state
    elif len(after.stack) < len(before.stack):
        m_delta = _state_delta(before.stack[1].state, top_a.state)
    else:
        m_delta = _state_delta(top_b.state, top_a.state)
    return TraceStep(
        index=index,
        nid=top_b.nid,
        kind_name=node.kind_name(),
        nid_after=top_a.nid,
        depth=len(after.stack),
        m_delta=m_delta,
        h_delta=_heap_delta(before.heap, after.heap),
    )
