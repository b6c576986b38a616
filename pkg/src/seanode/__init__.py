"""Executable semantics for a sea-of-nodes compiler IR.

The package provides the graph data model (ir), run-time values and heap
(runtime), well-formedness checking (wellformed), big-step expression
evaluation (dataflow), small-step local and interprocedural execution
(controlflow, interproc), canonicalization and conditional elimination
(optimize), a rewrite-equivalence harness (equivalence), the seanode/1
file format (fileformat), and a CLI (cli).
"""

from .ir import Graph, Program, Signature
from .fileformat import load, loads, save, dumps
from .interproc import ExecOutcome, ExecResult, run
from .optimize import apply_pass
from .wellformed import check

__all__ = [
    "Graph", "Program", "Signature",
    "load", "loads", "save", "dumps",
    "ExecOutcome", "ExecResult", "run",
    "apply_pass", "check",
]
