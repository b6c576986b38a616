import pytest

from seanode.corpus import (
    ADD3_SIG, CATCH_SIG, CROSS_SIG, EXPLODE_SIG, FACT_SIG, MAIN_SIG, PAIR_SIG,
    SPIN_SIG, STATICS_SIG, call_chain, catch_exception, cross_frame, factorial,
    heap_pair, spin, static_counter, uncaught,
)
from seanode.interproc import (
    ExecOutcome, Frame, GlobalConfig, GlobalStuck, MalformedCall, UncaughtTopLevel,
    UnknownMethod, UnwindWithoutHandler, initial_config, run, step_top,
)
from seanode.ir import (
    AddNode, ConstantNode, Graph, InvokeNode, MethodCallTargetNode, ParameterNode,
    Program, ReturnNode, Signature, StartNode, UnwindNode,
)
from seanode.runtime import UNDEF, DynamicHeap, IntVal, ObjRef, new_map_state


def drive_to_invoke(program, sig, args):
    c = initial_config(program, sig, args)
    while not isinstance(
        c.stack[0].graph.kind(c.stack[0].nid), (InvokeNode,)
    ):
        c = step_top(program, c)
    return c


def test_invoke_pushes_fresh_frame():
    p = call_chain()
    c = drive_to_invoke(p, MAIN_SIG, [IntVal(5)])
    assert len(c.stack) == 1
    c2 = step_top(p, c)
    assert len(c2.stack) == 2
    callee = c2.stack[0]
    assert callee.nid == 0
    assert callee.state == new_map_state()
    assert callee.params == (IntVal(5),)
    assert callee.graph is p.graph(ADD3_SIG)
    # The caller's state is not extended by the call itself.
    assert c2.stack[1].state == c.stack[0].state


def test_return_stores_value_under_invoke_id():
    callee = Graph({0: StartNode(next=2), 1: ConstantNode(IntVal(99)), 2: ReturnNode(resultOpt=1)})
    callee_sig = Signature("T", "callee", ())
    caller = Graph({
        0: StartNode(next=3),
        2: MethodCallTargetNode(targetMethod=callee_sig, arguments=()),
        3: InvokeNode(selfId=3, callTarget=2, next=4),
        4: ReturnNode(resultOpt=3),
    })
    caller_sig = Signature("T", "caller", ())
    p = Program({caller_sig: caller, callee_sig: callee})

    c = drive_to_invoke(p, caller_sig, [])
    c = step_top(p, c)            # invoke
    c = step_top(p, c)            # callee StartNode
    c = step_top(p, c)            # callee return, pops back to caller
    assert len(c.stack) == 1
    assert c.stack[0].nid == 4
    assert c.stack[0].state[3] == IntVal(99)

    result = run(p, caller_sig, [])
    assert result.outcome is ExecOutcome.RETURNED and result.value == IntVal(99)


def test_unwind_routes_to_exception_edge():
    p = catch_exception()
    result = run(p, CATCH_SIG, [])
    assert result.outcome is ExecOutcome.RETURNED
    assert result.value == IntVal(99)

    records = []
    run(p, CATCH_SIG, [], on_step=lambda r: records.append(r))
    unwind_steps = [r for r in records if r.kind_name == "UnwindNode"]
    assert len(unwind_steps) == 1
    rec = unwind_steps[0]
    assert rec.nid_after == 5  # the invoke's exceptionEdge successor
    assert rec.m_delta == ((2, ObjRef(0)),)


def test_normal_return_through_invoke_with_exception():
    # A callee that returns normally through an InvokeWithExceptionNode
    # resumes the caller at the next successor, not the exception edge.
    from seanode.ir import InvokeWithExceptionNode
    callee_sig = Signature("T", "fine", ())
    callee = Graph({0: StartNode(next=2), 1: ConstantNode(IntVal(5)), 2: ReturnNode(resultOpt=1)})
    caller_sig = Signature("T", "caller", ())
    caller = Graph({
        0: StartNode(next=2),
        1: MethodCallTargetNode(targetMethod=callee_sig, arguments=()),
        2: InvokeWithExceptionNode(selfId=2, callTarget=1, next=3, exceptionEdge=5),
        3: ReturnNode(resultOpt=2),
        5: ReturnNode(resultOpt=None),
    })
    p = Program({caller_sig: caller, callee_sig: callee})
    result = run(p, caller_sig, [])
    assert result.outcome is ExecOutcome.RETURNED
    assert result.value == IntVal(5)


def test_uncaught_exception_outcome():
    result = run(uncaught(), EXPLODE_SIG, [])
    assert result.outcome is ExecOutcome.UNCAUGHT_EXCEPTION
    assert result.value == ObjRef(0)


def test_call_chain_value_and_depths():
    p = call_chain()
    records = []
    result = run(p, MAIN_SIG, [IntVal(5)], on_step=lambda r: records.append(r))
    assert result.outcome is ExecOutcome.RETURNED
    assert result.value == IntVal(13)  # (5 * 2) + 3
    depths = [1] + [r.depth for r in records]
    collapsed = [depths[0]] + [d for i, d in enumerate(depths[1:], 1) if d != depths[i - 1]]
    assert collapsed == [1, 2, 3, 2, 1]
    assert result.steps == len(records)


def test_stack_discipline_per_rule():
    p = call_chain()
    c = initial_config(p, MAIN_SIG, [IntVal(1)])
    depths = [len(c.stack)]
    while True:
        top = c.stack[0]
        node = top.graph.kind(top.nid)
        if isinstance(node, ReturnNode) and len(c.stack) == 1:
            break
        c2 = step_top(p, c)
        assert abs(len(c2.stack) - len(c.stack)) <= 1
        depths.append(len(c2.stack))
        c = c2
    assert max(depths) == 3


def test_heap_is_global_across_frames():
    result = run(cross_frame(), CROSS_SIG, [])
    assert result.outcome is ExecOutcome.RETURNED
    assert result.value == IntVal(42)


def test_void_return_stores_undef():
    p = cross_frame()
    records = []
    run(p, CROSS_SIG, [], on_step=lambda r: records.append(r))
    returns = [r for r in records if r.kind_name == "ReturnNode"]
    assert len(returns) == 1
    assert returns[0].m_delta == ()  # undef never materializes in the state


def test_arguments_evaluated_in_caller_context():
    callee_sig = Signature("T", "id", ("int",))
    callee = Graph({0: StartNode(next=2), 1: ParameterNode(0), 2: ReturnNode(resultOpt=1)})
    caller_sig = Signature("T", "caller", ("int",))
    caller = Graph({
        0: StartNode(next=5),
        1: ParameterNode(0),
        2: ConstantNode(IntVal(10)),
        3: AddNode(x=1, y=2),
        4: MethodCallTargetNode(targetMethod=callee_sig, arguments=(3,)),
        5: InvokeNode(selfId=5, callTarget=4, next=6),
        6: ReturnNode(resultOpt=5),
    })
    p = Program({caller_sig: caller, callee_sig: callee})
    result = run(p, caller_sig, [IntVal(7)])
    assert result.value == IntVal(17)


def test_unknown_method_is_stuck():
    sig = Signature("T", "main", ())
    g = Graph({
        0: StartNode(next=2),
        1: MethodCallTargetNode(targetMethod=Signature("T", "ghost", ()), arguments=()),
        2: InvokeNode(selfId=2, callTarget=1, next=3),
        3: ReturnNode(resultOpt=None),
    })
    result = run(Program({sig: g}), sig, [])
    assert result.outcome is ExecOutcome.STUCK
    assert "ghost" in result.reason


def test_malformed_call_target():
    sig = Signature("T", "main", ())
    g = Graph({
        0: StartNode(next=2),
        1: ConstantNode(IntVal(0)),
        2: InvokeNode(selfId=2, callTarget=1, next=3),
        3: ReturnNode(resultOpt=None),
    })
    c = initial_config(Program({sig: g}), sig, [])
    c = step_top(Program({sig: g}), c)
    with pytest.raises(MalformedCall):
        step_top(Program({sig: g}), c)


def test_unwind_without_handler():
    boom_sig = Signature("T", "boom", ())
    boom = Graph({
        0: StartNode(next=1),
        1: UnwindNode(exception=2),
        2: ConstantNode(IntVal(0)),
    })
    main_sig = Signature("T", "main", ())
    main = Graph({
        0: StartNode(next=2),
        1: MethodCallTargetNode(targetMethod=boom_sig, arguments=()),
        2: InvokeNode(selfId=2, callTarget=1, next=3),
        3: ReturnNode(resultOpt=None),
    })
    p = Program({main_sig: main, boom_sig: boom})
    result = run(p, main_sig, [])
    assert result.outcome is ExecOutcome.STUCK


def test_top_level_return_and_unwind_raise_in_step_top():
    sig = Signature("T", "main", ())
    g = Graph({0: StartNode(next=1), 1: ReturnNode(resultOpt=None)})
    p = Program({sig: g})
    c = step_top(p, initial_config(p, sig, []))
    with pytest.raises(UncaughtTopLevel):
        step_top(p, c)


def test_factorial_through_global_driver():
    p = factorial()
    assert run(p, FACT_SIG, [IntVal(5)]).value == IntVal(120)
    assert run(p, FACT_SIG, [IntVal(13)]).value == IntVal(1932053504)


def test_out_of_fuel_at_exact_budget():
    result = run(spin(), SPIN_SIG, [], fuel=777)
    assert result.outcome is ExecOutcome.OUT_OF_FUEL
    assert result.steps == 777


def test_missing_main_raises():
    with pytest.raises(UnknownMethod):
        run(Program({}), Signature("T", "main", ()), [])


def test_allocations_and_statics_observable_in_result_heap():
    result = run(heap_pair(), PAIR_SIG, [])
    assert result.value == IntVal(14)
    assert result.heap.classes == {0: "Point", 1: "Point"}

    result = run(static_counter(), STATICS_SIG, [])
    assert result.value == IntVal(3)


def test_trace_records_match_steps_and_rerun_identically():
    p = factorial()
    first, second = [], []
    r1 = run(p, FACT_SIG, [IntVal(6)], on_step=lambda r: first.append(r.line()))
    r2 = run(p, FACT_SIG, [IntVal(6)], on_step=lambda r: second.append(r.line()))
    assert first == second
    assert len(first) == r1.steps == r2.steps
