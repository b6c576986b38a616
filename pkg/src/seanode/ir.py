"""Graph data model for the sea-of-nodes IR.

A graph is a finite partial map from integer node ids to node values.
Every node variant declares its input edges (data dependencies) and
successor edges (control flow) as ordered field lists, so generic
traversals never need per-kind special cases.
"""

from dataclasses import dataclass
from typing import ClassVar

from .runtime import Value

# Edge field arities.
ONE = "one"
MANY = "many"
OPT = "opt"


class InvalidEdit(Exception):
    """A graph edit violated its precondition (occupied/unmapped id, NoNode)."""


@dataclass(frozen=True)
class Signature:
    """Identifies a method: defining class, name, and parameter types."""

    className: str
    methodName: str
    parameterTypes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parameterTypes", tuple(self.parameterTypes))

    def __str__(self):
        return f"{self.className}.{self.methodName}({','.join(self.parameterTypes)})"


@dataclass(frozen=True)
class IRNode:
    """Base of all node variants.

    INPUTS lists (field name, arity) pairs in input-edge order; SUCCESSORS
    lists successor-edge field names in order. Remaining dataclass fields
    are plain data attributes.
    """

    INPUTS: ClassVar[tuple] = ()
    SUCCESSORS: ClassVar[tuple] = ()

    @classmethod
    def kind_name(cls) -> str:
        return cls.__name__


@dataclass(frozen=True)
class NoNode(IRNode):
    """Result of looking up an unmapped id; never stored in a graph."""


@dataclass(frozen=True)
class ConstantNode(IRNode):
    const: Value


@dataclass(frozen=True)
class ParameterNode(IRNode):
    index: int


@dataclass(frozen=True)
class ValuePhiNode(IRNode):
    selfId: int
    values: tuple[int, ...]
    merge: int

    # Input edge zero connects the phi to its merge node.
    INPUTS = (("merge", ONE), ("values", MANY))

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))


@dataclass(frozen=True)
class NegateNode(IRNode):
    value: int

    INPUTS = (("value", ONE),)


@dataclass(frozen=True)
class AddNode(IRNode):
    x: int
    y: int

    INPUTS = (("x", ONE), ("y", ONE))


@dataclass(frozen=True)
class MulNode(IRNode):
    x: int
    y: int

    INPUTS = (("x", ONE), ("y", ONE))


@dataclass(frozen=True)
class IntegerLessThanNode(IRNode):
    x: int
    y: int

    INPUTS = (("x", ONE), ("y", ONE))


@dataclass(frozen=True)
class ConditionalNode(IRNode):
    condition: int
    trueValue: int
    falseValue: int

    INPUTS = (("condition", ONE), ("trueValue", ONE), ("falseValue", ONE))


@dataclass(frozen=True)
class ValueProxyNode(IRNode):
    """Forwards the value of a loop-carried node past its loop exit."""

    value: int
    loopExit: int

    INPUTS = (("value", ONE), ("loopExit", ONE))


@dataclass(frozen=True)
class StartNode(IRNode):
    next: int

    SUCCESSORS = ("next",)


@dataclass(frozen=True)
class BeginNode(IRNode):
    next: int

    SUCCESSORS = ("next",)


@dataclass(frozen=True)
class RefNode(IRNode):
    """Control no-op; the residue left by branch-removing rewrites."""

    next: int

    SUCCESSORS = ("next",)


@dataclass(frozen=True)
class IfNode(IRNode):
    condition: int
    trueSuccessor: int
    falseSuccessor: int

    INPUTS = (("condition", ONE),)
    SUCCESSORS = ("trueSuccessor", "falseSuccessor")


@dataclass(frozen=True)
class EndNode(IRNode):
    pass


@dataclass(frozen=True)
class MergeNode(IRNode):
    ends: tuple[int, ...]
    next: int

    INPUTS = (("ends", MANY),)
    SUCCESSORS = ("next",)

    def __post_init__(self):
        object.__setattr__(self, "ends", tuple(self.ends))


@dataclass(frozen=True)
class LoopBeginNode(IRNode):
    ends: tuple[int, ...]
    next: int

    INPUTS = (("ends", MANY),)
    SUCCESSORS = ("next",)

    def __post_init__(self):
        object.__setattr__(self, "ends", tuple(self.ends))


@dataclass(frozen=True)
class LoopEndNode(IRNode):
    loopBegin: int

    INPUTS = (("loopBegin", ONE),)


@dataclass(frozen=True)
class LoopExitNode(IRNode):
    loopBegin: int
    next: int

    INPUTS = (("loopBegin", ONE),)
    SUCCESSORS = ("next",)


@dataclass(frozen=True)
class NewInstanceNode(IRNode):
    selfId: int
    instanceClass: str
    next: int

    SUCCESSORS = ("next",)


@dataclass(frozen=True)
class LoadFieldNode(IRNode):
    selfId: int
    field: str
    objectOpt: int | None
    next: int

    INPUTS = (("objectOpt", OPT),)
    SUCCESSORS = ("next",)


@dataclass(frozen=True)
class StoreFieldNode(IRNode):
    selfId: int
    field: str
    value: int
    objectOpt: int | None
    next: int

    INPUTS = (("value", ONE), ("objectOpt", OPT))
    SUCCESSORS = ("next",)


@dataclass(frozen=True)
class ReturnNode(IRNode):
    resultOpt: int | None

    INPUTS = (("resultOpt", OPT),)


@dataclass(frozen=True)
class InvokeNode(IRNode):
    selfId: int
    callTarget: int
    next: int

    INPUTS = (("callTarget", ONE),)
    SUCCESSORS = ("next",)


@dataclass(frozen=True)
class InvokeWithExceptionNode(IRNode):
    selfId: int
    callTarget: int
    next: int
    exceptionEdge: int

    INPUTS = (("callTarget", ONE),)
    SUCCESSORS = ("next", "exceptionEdge")


@dataclass(frozen=True)
class MethodCallTargetNode(IRNode):
    targetMethod: Signature
    arguments: tuple[int, ...]

    INPUTS = (("arguments", MANY),)

    def __post_init__(self):
        object.__setattr__(self, "arguments", tuple(self.arguments))


@dataclass(frozen=True)
class UnwindNode(IRNode):
    exception: int

    INPUTS = (("exception", ONE),)


NODE_KINDS = {
    cls.__name__: cls
    for cls in (
        ConstantNode, ParameterNode, ValuePhiNode, NegateNode, AddNode,
        MulNode, IntegerLessThanNode, ConditionalNode, ValueProxyNode,
        StartNode, BeginNode, RefNode, IfNode, EndNode, MergeNode,
        LoopBeginNode, LoopEndNode, LoopExitNode, NewInstanceNode,
        LoadFieldNode, StoreFieldNode, ReturnNode, InvokeNode,
        InvokeWithExceptionNode, MethodCallTargetNode, UnwindNode,
    )
}


def _edge_fields(node: IRNode, specs) -> list[int]:
    out = []
    for name, arity in specs:
        v = getattr(node, name)
        if arity == MANY:
            out.extend(v)
        elif arity == OPT:
            if v is not None:
                out.append(v)
        else:
            out.append(v)
    return out


def inputs_of(node: IRNode) -> list[int]:
    """Ordered input-edge targets of a node (absent optional edges omitted)."""
    return _edge_fields(node, type(node).INPUTS)


def successors_of(node: IRNode) -> list[int]:
    """Ordered successor-edge targets of a node."""
    return _edge_fields(node, tuple((n, ONE) for n in type(node).SUCCESSORS))


SEQUENTIAL_KINDS = (StartNode, BeginNode, RefNode, LoopExitNode, MergeNode, LoopBeginNode)
BINARY_ARITH_KINDS = (AddNode, MulNode, IntegerLessThanNode)
DATA_KINDS = (
    ConstantNode, ParameterNode, ValuePhiNode, NegateNode, AddNode, MulNode,
    IntegerLessThanNode, ConditionalNode, ValueProxyNode,
)
# Nodes whose value is latched into the method state by a control-flow step
# and read back from it by expression evaluation.
STATE_LEAF_KINDS = (
    ValuePhiNode, InvokeNode, InvokeWithExceptionNode, NewInstanceNode, LoadFieldNode,
)


def is_sequential(node: IRNode) -> bool:
    """True for control nodes whose step is just "go to the only successor"."""
    return isinstance(node, SEQUENTIAL_KINDS)


def is_binary_arith(node: IRNode) -> bool:
    return isinstance(node, BINARY_ARITH_KINDS)


def is_data(node: IRNode) -> bool:
    return isinstance(node, DATA_KINDS)


def is_control(node: IRNode) -> bool:
    """True for nodes that can appear as the current point of control."""
    return bool(type(node).SUCCESSORS) or isinstance(
        node, (EndNode, LoopEndNode, ReturnNode, UnwindNode)
    )


def is_state_leaf(node: IRNode) -> bool:
    return isinstance(node, STATE_LEAF_KINDS)


class Graph:
    """Finite partial map from node ids to nodes; immutable after construction.

    Lookups are total: unmapped ids yield NoNode. Edits return new graphs.
    """

    __slots__ = ("_nodes",)

    def __init__(self, nodes: dict[int, IRNode]):
        for nid, node in nodes.items():
            if not isinstance(nid, int) or nid < 0:
                raise InvalidEdit(f"node id must be a non-negative integer: {nid!r}")
            if isinstance(node, NoNode):
                raise InvalidEdit(f"cannot store NoNode at id {nid}")
        self._nodes = dict(nodes)

    def kind(self, nid: int) -> IRNode:
        return self._nodes.get(nid, NoNode())

    def ids(self) -> set[int]:
        return set(self._nodes)

    def __contains__(self, nid: int) -> bool:
        return nid in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def inputs(self, nid: int) -> set[int]:
        return set(inputs_of(self.kind(nid)))

    def succ(self, nid: int) -> set[int]:
        return set(successors_of(self.kind(nid)))

    def usages(self, nid: int) -> set[int]:
        return {m for m in self._nodes if nid in self.inputs(m)}

    def predecessors(self, nid: int) -> set[int]:
        return {m for m in self._nodes if nid in self.succ(m)}

    def fresh_id(self) -> int:
        return max(self._nodes) + 1 if self._nodes else 0

    def insert_node(self, nid: int, node: IRNode) -> "Graph":
        if nid in self._nodes:
            raise InvalidEdit(f"insert on occupied id {nid}")
        if isinstance(node, NoNode):
            raise InvalidEdit(f"cannot store NoNode at id {nid}")
        nodes = dict(self._nodes)
        nodes[nid] = node
        return Graph(nodes)

    def replace_node(self, nid: int, node: IRNode) -> "Graph":
        if nid not in self._nodes:
            raise InvalidEdit(f"replace on unmapped id {nid}")
        if isinstance(node, NoNode):
            raise InvalidEdit(f"cannot store NoNode at id {nid}")
        nodes = dict(self._nodes)
        nodes[nid] = node
        return Graph(nodes)

    def items(self):
        return self._nodes.items()

    def __eq__(self, other):
        return isinstance(other, Graph) and self._nodes == other._nodes

    def __repr__(self):
        lines = ", ".join(f"{nid}: {node}" for nid, node in sorted(self._nodes.items()))
        return f"Graph({{{lines}}})"


@dataclass
class Program:
    """Finite map from method signatures to their graphs."""

    methods: dict[Signature, Graph]

    def graph(self, sig: Signature) -> Graph | None:
        return self.methods.get(sig)

    def signatures(self) -> list[Signature]:
        return list(self.methods)

    def resolve(self, name: str) -> Signature:
        """Find a signature by "name" or "Class.name"; errors if ambiguous."""
        matches = [
            s for s in self.methods
            if s.methodName == name or f"{s.className}.{s.methodName}" == name
        ]
        if not matches:
            raise KeyError(f"no method named {name!r}")
        if len(matches) > 1:
            opts = ", ".join(str(s) for s in matches)
            raise KeyError(f"ambiguous method name {name!r}: {opts}")
        return matches[0]
