"""Shipped example programs.

Each builder returns a small Program used by the test suite, the CLI
examples, and the equivalence harness. The factorial graph follows the
classic lowering of a counted loop: parameter and constants feed two phi
nodes at the loop header (the counter and the accumulator), the loop end
re-latches them through shared arithmetic nodes, and a proxy carries the
accumulator past the loop exit.
"""

from pathlib import Path

from .fileformat import dumps
from .ir import (
    AddNode, BeginNode, ConditionalNode, ConstantNode, EndNode, Graph, IfNode,
    IntegerLessThanNode, InvokeNode, InvokeWithExceptionNode, LoadFieldNode,
    LoopBeginNode, LoopEndNode, LoopExitNode, MergeNode, MethodCallTargetNode,
    MulNode, NegateNode, NewInstanceNode, ParameterNode, Program, RefNode,
    ReturnNode, Signature, StartNode, StoreFieldNode, UnwindNode, ValuePhiNode,
    ValueProxyNode,
)
from .runtime import IntVal


def _c(n: int) -> ConstantNode:
    return ConstantNode(IntVal(n))


FACT_SIG = Signature("Loops", "fact", ("int",))


def factorial() -> Program:
    # while (n > 1) { result *= n; n = n - 1 }  -- condition held as 1 < n
    g = Graph({
        0: StartNode(next=2),
        1: ParameterNode(0),
        2: BeginNode(next=4),
        3: _c(1),
        4: BeginNode(next=5),
        5: EndNode(),
        6: LoopBeginNode(ends=(5, 21), next=9),
        7: ValuePhiNode(7, values=(1, 20), merge=6),   # n
        8: ValuePhiNode(8, values=(3, 18), merge=6),   # result
        9: BeginNode(next=12),
        10: _c(1),
        11: IntegerLessThanNode(x=10, y=7),
        12: IfNode(condition=11, trueSuccessor=13, falseSuccessor=14),
        13: BeginNode(next=21),
        14: LoopExitNode(loopBegin=6, next=17),
        15: ValueProxyNode(value=8, loopExit=14),
        16: ReturnNode(resultOpt=15),
        17: RefNode(next=16),
        18: MulNode(x=8, y=7),
        19: _c(-1),
        20: AddNode(x=7, y=19),
        21: LoopEndNode(loopBegin=6),
    })
    return Program({FACT_SIG: g})


SUM_SIG = Signature("Loops", "sumTo", ("int",))


def loop_sum() -> Program:
    # s = 0; i = 0; while (i < n) { i = i + 1; s = s + i }
    # The increment node 10 is shared by both phi inputs.
    g = Graph({
        0: StartNode(next=2),
        1: ParameterNode(0),
        2: EndNode(),
        3: LoopBeginNode(ends=(2, 12), next=6),
        4: ValuePhiNode(4, values=(13, 10), merge=3),  # i
        5: ValuePhiNode(5, values=(13, 11), merge=3),  # s
        6: BeginNode(next=8),
        7: IntegerLessThanNode(x=4, y=1),
        8: IfNode(condition=7, trueSuccessor=9, falseSuccessor=14),
        9: BeginNode(next=12),
        10: AddNode(x=4, y=15),
        11: AddNode(x=5, y=10),
        12: LoopEndNode(loopBegin=3),
        13: _c(0),
        14: LoopExitNode(loopBegin=3, next=17),
        15: _c(1),
        16: ValueProxyNode(value=5, loopExit=14),
        17: ReturnNode(resultOpt=16),
    })
    return Program({SUM_SIG: g})


SPIN_SIG = Signature("Loops", "spin", ())


def spin() -> Program:
    # Loop whose back-edge is guarded by a constant-true test; never exits.
    g = Graph({
        0: StartNode(next=1),
        1: EndNode(),
        2: LoopBeginNode(ends=(1, 6), next=3),
        3: BeginNode(next=5),
        4: _c(1),
        5: IfNode(condition=4, trueSuccessor=7, falseSuccessor=8),
        6: LoopEndNode(loopBegin=2),
        7: BeginNode(next=6),
        8: LoopExitNode(loopBegin=2, next=9),
        9: ReturnNode(resultOpt=10),
        10: _c(0),
    })
    return Program({SPIN_SIG: g})


POLY_SIG = Signature("Arith", "polyEval", ("int", "int", "int"))


def arith_chain() -> Program:
    g = Graph({
        0: StartNode(next=5),
        1: ParameterNode(0),
        2: ParameterNode(1),
        3: ParameterNode(2),
        4: AddNode(x=1, y=2),
        5: ReturnNode(resultOpt=6),
        6: MulNode(x=4, y=3),
    })
    return Program({POLY_SIG: g})


MAX_SIG = Signature("Branches", "max", ("int", "int"))


def max_merge() -> Program:
    g = Graph({
        0: StartNode(next=6),
        1: ParameterNode(0),
        2: ParameterNode(1),
        3: IntegerLessThanNode(x=1, y=2),
        6: IfNode(condition=3, trueSuccessor=7, falseSuccessor=8),
        7: BeginNode(next=9),
        8: BeginNode(next=10),
        9: EndNode(),
        10: EndNode(),
        11: MergeNode(ends=(9, 10), next=13),
        12: ValuePhiNode(12, values=(2, 1), merge=11),
        13: ReturnNode(resultOpt=12),
    })
    return Program({MAX_SIG: g})


MAXDATA_SIG = Signature("Branches", "maxData", ("int", "int"))


def conditional_select() -> Program:
    g = Graph({
        0: StartNode(next=5),
        1: ParameterNode(0),
        2: ParameterNode(1),
        3: IntegerLessThanNode(x=1, y=2),
        4: ConditionalNode(condition=3, trueValue=2, falseValue=1),
        5: ReturnNode(resultOpt=4),
    })
    return Program({MAXDATA_SIG: g})


MAIN_SIG = Signature("Calls", "main", ("int",))
ADD3_SIG = Signature("Calls", "add3", ("int",))
HELPER_SIG = Signature("Calls", "helper", ("int",))


def call_chain() -> Program:
    main = Graph({
        0: StartNode(next=3),
        1: ParameterNode(0),
        2: MethodCallTargetNode(targetMethod=ADD3_SIG, arguments=(1,)),
        3: InvokeNode(selfId=3, callTarget=2, next=4),
        4: ReturnNode(resultOpt=3),
    })
    add3 = Graph({
        0: StartNode(next=3),
        1: ParameterNode(0),
        2: MethodCallTargetNode(targetMethod=HELPER_SIG, arguments=(1,)),
        3: InvokeNode(selfId=3, callTarget=2, next=6),
        4: _c(3),
        5: AddNode(x=3, y=4),
        6: ReturnNode(resultOpt=5),
    })
    helper = Graph({
        0: StartNode(next=4),
        1: ParameterNode(0),
        2: _c(2),
        3: MulNode(x=1, y=2),
        4: ReturnNode(resultOpt=3),
    })
    return Program({MAIN_SIG: main, ADD3_SIG: add3, HELPER_SIG: helper})


CATCH_SIG = Signature("Exceptions", "catchIt", ())
BOOM_SIG = Signature("Exceptions", "boom", ())


def catch_exception() -> Program:
    main = Graph({
        0: StartNode(next=2),
        1: MethodCallTargetNode(targetMethod=BOOM_SIG, arguments=()),
        2: InvokeWithExceptionNode(selfId=2, callTarget=1, next=3, exceptionEdge=5),
        3: BeginNode(next=4),
        4: ReturnNode(resultOpt=7),
        5: BeginNode(next=6),
        6: ReturnNode(resultOpt=8),
        7: _c(1),
        8: _c(99),
    })
    boom = Graph({
        0: StartNode(next=1),
        1: NewInstanceNode(selfId=1, instanceClass="Error", next=2),
        2: UnwindNode(exception=1),
    })
    return Program({CATCH_SIG: main, BOOM_SIG: boom})


EXPLODE_SIG = Signature("Exceptions", "explode", ())


def uncaught() -> Program:
    g = Graph({
        0: StartNode(next=1),
        1: NewInstanceNode(selfId=1, instanceClass="Error", next=2),
        2: UnwindNode(exception=1),
    })
    return Program({EXPLODE_SIG: g})


PAIR_SIG = Signature("Heap", "pairSum", ())


def heap_pair() -> Program:
    g = Graph({
        0: StartNode(next=1),
        1: NewInstanceNode(selfId=1, instanceClass="Point", next=2),
        2: NewInstanceNode(selfId=2, instanceClass="Point", next=3),
        3: StoreFieldNode(selfId=3, field="x", value=10, objectOpt=1, next=4),
        4: StoreFieldNode(selfId=4, field="y", value=11, objectOpt=2, next=5),
        5: LoadFieldNode(selfId=5, field="x", objectOpt=1, next=6),
        6: LoadFieldNode(selfId=6, field="y", objectOpt=2, next=7),
        7: ReturnNode(resultOpt=12),
        10: _c(9),
        11: _c(5),
        12: AddNode(x=5, y=6),
    })
    return Program({PAIR_SIG: g})


CROSS_SIG = Signature("Heap", "crossFrame", ())
POKE_SIG = Signature("Heap", "poke", ("ref",))


def cross_frame() -> Program:
    main = Graph({
        0: StartNode(next=1),
        1: NewInstanceNode(selfId=1, instanceClass="Box", next=3),
        2: MethodCallTargetNode(targetMethod=POKE_SIG, arguments=(1,)),
        3: InvokeNode(selfId=3, callTarget=2, next=4),
        4: LoadFieldNode(selfId=4, field="x", objectOpt=1, next=5),
        5: ReturnNode(resultOpt=4),
    })
    poke = Graph({
        0: StartNode(next=3),
        1: ParameterNode(0),
        2: _c(42),
        3: StoreFieldNode(selfId=3, field="x", value=2, objectOpt=1, next=4),
        4: ReturnNode(resultOpt=None),
    })
    return Program({CROSS_SIG: main, POKE_SIG: poke})


STATICS_SIG = Signature("Heap", "statics", ())


def static_counter() -> Program:
    g = Graph({
        0: StartNode(next=2),
        1: _c(3),
        2: StoreFieldNode(selfId=2, field="counter", value=1, objectOpt=None, next=3),
        3: LoadFieldNode(selfId=3, field="counter", objectOpt=None, next=4),
        4: ReturnNode(resultOpt=3),
    })
    return Program({STATICS_SIG: g})


IFTRUE_SIG = Signature("Branches", "constTrue", ("int",))


def if_const_true() -> Program:
    g = Graph({
        0: StartNode(next=3),
        1: ParameterNode(0),
        2: _c(1),
        3: IfNode(condition=2, trueSuccessor=4, falseSuccessor=5),
        4: BeginNode(next=8),
        5: BeginNode(next=9),
        6: _c(10),
        7: AddNode(x=1, y=6),
        8: ReturnNode(resultOpt=7),
        9: ReturnNode(resultOpt=11),
        10: _c(-10),
        11: AddNode(x=1, y=10),
    })
    return Program({IFTRUE_SIG: g})


IFFALSE_SIG = Signature("Branches", "constFalse", ("int",))


def if_const_false() -> Program:
    g = Graph({
        0: StartNode(next=3),
        1: ParameterNode(0),
        2: _c(0),
        3: IfNode(condition=2, trueSuccessor=4, falseSuccessor=5),
        4: BeginNode(next=8),
        5: BeginNode(next=9),
        6: _c(10),
        7: AddNode(x=1, y=6),
        8: ReturnNode(resultOpt=7),
        9: ReturnNode(resultOpt=11),
        10: _c(-10),
        11: AddNode(x=1, y=10),
    })
    return Program({IFFALSE_SIG: g})


IFSAME_SIG = Signature("Branches", "sameTarget", ("int", "int"))


def if_equal_branches() -> Program:
    g = Graph({
        0: StartNode(next=4),
        1: ParameterNode(0),
        2: ParameterNode(1),
        3: IntegerLessThanNode(x=1, y=2),
        4: IfNode(condition=3, trueSuccessor=5, falseSuccessor=5),
        5: BeginNode(next=7),
        6: AddNode(x=1, y=2),
        7: ReturnNode(resultOpt=6),
    })
    return Program({IFSAME_SIG: g})


NESTED_SIG = Signature("Branches", "nestedDup", ("int", "int"))


def nested_duplicate_test() -> Program:
    # The inner test at node 9 is a distinct node structurally equal to the
    # dominating test at node 3.
    g = Graph({
        0: StartNode(next=4),
        1: ParameterNode(0),
        2: ParameterNode(1),
        3: IntegerLessThanNode(x=1, y=2),
        4: IfNode(condition=3, trueSuccessor=5, falseSuccessor=6),
        5: BeginNode(next=8),
        6: BeginNode(next=7),
        7: ReturnNode(resultOpt=15),
        8: IfNode(condition=9, trueSuccessor=10, falseSuccessor=11),
        9: IntegerLessThanNode(x=1, y=2),
        10: BeginNode(next=12),
        11: BeginNode(next=13),
        12: ReturnNode(resultOpt=16),
        13: ReturnNode(resultOpt=17),
        15: _c(3),
        16: _c(1),
        17: _c(2),
    })
    return Program({NESTED_SIG: g})


INDEP_SIG = Signature("Branches", "independent", ("int", "int", "int"))


def independent_conditions() -> Program:
    g = Graph({
        0: StartNode(next=4),
        1: ParameterNode(0),
        2: ParameterNode(1),
        3: ParameterNode(2),
        4: IfNode(condition=5, trueSuccessor=6, falseSuccessor=7),
        5: IntegerLessThanNode(x=1, y=2),
        6: BeginNode(next=9),
        7: BeginNode(next=8),
        8: ReturnNode(resultOpt=16),
        9: IfNode(condition=10, trueSuccessor=11, falseSuccessor=12),
        10: IntegerLessThanNode(x=2, y=3),
        11: BeginNode(next=13),
        12: BeginNode(next=14),
        13: ReturnNode(resultOpt=17),
        14: ReturnNode(resultOpt=18),
        16: _c(3),
        17: _c(1),
        18: _c(2),
    })
    return Program({INDEP_SIG: g})


FOLD_SIG = Signature("Arith", "foldChain", ())


def canon_chain() -> Program:
    g = Graph({
        0: StartNode(next=6),
        1: _c(2),
        2: _c(3),
        3: AddNode(x=1, y=2),
        4: _c(1),
        5: MulNode(x=3, y=4),
        6: ReturnNode(resultOpt=5),
    })
    return Program({FOLD_SIG: g})


DNEG_SIG = Signature("Arith", "doubleNegate", ("int",))


def negate_chain() -> Program:
    g = Graph({
        0: StartNode(next=4),
        1: ParameterNode(0),
        2: NegateNode(value=1),
        3: NegateNode(value=2),
        4: ReturnNode(resultOpt=3),
    })
    return Program({DNEG_SIG: g})


SELECT_SAME_SIG = Signature("Arith", "selectSame", ("int", "int"))


def conditional_same_branches() -> Program:
    g = Graph({
        0: StartNode(next=5),
        1: ParameterNode(0),
        2: ParameterNode(1),
        3: IntegerLessThanNode(x=1, y=2),
        4: ConditionalNode(condition=3, trueValue=2, falseValue=2),
        5: ReturnNode(resultOpt=4),
    })
    return Program({SELECT_SAME_SIG: g})


IDENT_SIG = Signature("Arith", "identities", ("int",))


def identity_chain() -> Program:
    # (a * 0) + (a + 0) canonicalizes down to a.
    g = Graph({
        0: StartNode(next=6),
        1: ParameterNode(0),
        2: _c(0),
        3: MulNode(x=1, y=2),
        4: AddNode(x=1, y=2),
        5: AddNode(x=3, y=4),
        6: ReturnNode(resultOpt=5),
    })
    return Program({IDENT_SIG: g})


CORPUS = {
    "factorial": factorial,
    "loop-sum": loop_sum,
    "spin": spin,
    "arith-chain": arith_chain,
    "max-merge": max_merge,
    "conditional-select": conditional_select,
    "call-chain": call_chain,
    "catch-exception": catch_exception,
    "uncaught": uncaught,
    "heap-pair": heap_pair,
    "cross-frame": cross_frame,
    "static-counter": static_counter,
    "if-const-true": if_const_true,
    "if-const-false": if_const_false,
    "if-equal-branches": if_equal_branches,
    "nested-duplicate-test": nested_duplicate_test,
    "independent-conditions": independent_conditions,
    "canon-chain": canon_chain,
    "negate-chain": negate_chain,
    "conditional-same-branches": conditional_same_branches,
    "identity-chain": identity_chain,
}


def corpus_programs() -> dict[str, Program]:
    return {name: build() for name, build in CORPUS.items()}


def write_corpus(directory) -> list[Path]:
    """Serialize every corpus program to <directory>/<name>.json."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, program in corpus_programs().items():
        path = directory / f"{name}.json"
        path.write_text(dumps(program))
        written.append(path)
    return written


if __name__ == "__main__":
    import sys

    target = sys.argv[1] if len(sys.argv) > 1 else "corpus"
    for path in write_corpus(target):
        print(path)
