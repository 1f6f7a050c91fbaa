"""Straight-line program representation of multivariate polynomials.

A program over ``m`` variables is a list of arithmetic nodes evaluated on a
value tape.  Tape slot 0 holds the constant ``f0 = 1``, slots ``1..m`` hold
the inputs ``x_1..x_m``, and node ``j`` (1-based position in the list) writes
slot ``m + j``.  Each node computes ``coef * (f_u OP f_v)`` where ``OP`` is
one of ``add``, ``sub``, ``mul``, ``pow``; for ``pow`` the second operand
slot is an integer exponent literal, not a tape reference.

Node ids are dense: ``m+1, m+2, ...`` in order, so an id doubles as a tape
index.  Programs are treated as immutable once built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import MalformedSlp

OPS = ("add", "sub", "mul", "pow")
OP_ADD, OP_SUB, OP_MUL, OP_POW = range(4)
_OP_CODE = {name: code for code, name in enumerate(OPS)}


@dataclass
class SlpNode:
    """One arithmetic node: ``coef * (f_in0 op f_in1)``.

    For ``op == "pow"`` the second entry of ``inputs`` is the integer
    exponent (>= 1), not a node reference.
    """

    id: int
    op: str
    inputs: tuple
    coef: float

    def to_dict(self):
        return {"id": self.id, "op": self.op,
                "in": [int(self.inputs[0]), int(self.inputs[1])],
                "coef": float(self.coef)}


@dataclass(eq=False)
class SlpProgram:
    """A validated-on-demand straight-line program.

    Attributes
    ----------
    num_vars : int
        Number of input variables ``m``.
    nodes : list of SlpNode
        Arithmetic nodes in topological order with ids ``m+1 .. m+N``.
    output : int
        Tape id of the program output (may reference an input for the
        identity program).
    """

    num_vars: int
    nodes: list = field(default_factory=list)
    output: int = 0

    @property
    def node_count(self):
        return len(self.nodes)

    @cached_property
    def arrays(self):
        """Structure-of-arrays encoding consumed by the evaluation kernels."""
        n = len(self.nodes)
        ops = np.empty(n, dtype=np.int64)
        ia = np.empty(n, dtype=np.int64)
        ib = np.empty(n, dtype=np.int64)
        coef = np.empty(n, dtype=np.float64)
        for k, node in enumerate(self.nodes):
            ops[k] = _OP_CODE[node.op]
            ia[k] = node.inputs[0]
            ib[k] = node.inputs[1]
            coef[k] = node.coef
        return ops, ia, ib, coef

    def to_dict(self):
        return {"num_vars": self.num_vars,
                "nodes": [n.to_dict() for n in self.nodes],
                "output": self.output}

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @staticmethod
    def from_dict(data):
        nodes = [SlpNode(id=int(n["id"]), op=str(n["op"]),
                         inputs=(int(n["in"][0]), int(n["in"][1])),
                         coef=float(n["coef"]))
                 for n in data["nodes"]]
        return SlpProgram(num_vars=int(data["num_vars"]), nodes=nodes,
                          output=int(data["output"]))

    @staticmethod
    def from_json(text):
        return SlpProgram.from_dict(json.loads(text))


class ProgramBuilder:
    """Incremental constructor that keeps ids dense and references legal."""

    def __init__(self, num_vars):
        if num_vars < 1:
            raise MalformedSlp("program needs at least one variable")
        self.num_vars = num_vars
        self.nodes = []

    def _next_id(self):
        return self.num_vars + len(self.nodes) + 1

    def input(self, i):
        """Tape id of input variable ``x_i`` (1-based)."""
        if not 1 <= i <= self.num_vars:
            raise MalformedSlp(f"input index {i} out of range")
        return i

    def _emit(self, op, u, v, coef):
        nid = self._next_id()
        if not (0 <= u < nid):
            raise MalformedSlp(f"operand {u} not defined before node {nid}")
        if op != "pow" and not (0 <= v < nid):
            raise MalformedSlp(f"operand {v} not defined before node {nid}")
        self.nodes.append(SlpNode(id=nid, op=op, inputs=(u, v), coef=float(coef)))
        return nid

    def add(self, u, v, coef=1.0):
        return self._emit("add", u, v, coef)

    def sub(self, u, v, coef=1.0):
        return self._emit("sub", u, v, coef)

    def mul(self, u, v, coef=1.0):
        return self._emit("mul", u, v, coef)

    def pow(self, u, exponent, coef=1.0):
        if int(exponent) != exponent or exponent < 1:
            raise MalformedSlp(f"pow exponent must be an integer >= 1, got {exponent}")
        return self._emit("pow", u, int(exponent), coef)

    def finish(self, output):
        top = self.num_vars + len(self.nodes)
        if not 0 <= output <= top:
            raise MalformedSlp(f"output id {output} does not exist")
        return SlpProgram(num_vars=self.num_vars, nodes=self.nodes, output=output)


@dataclass
class ValidationReport:
    """Result of :func:`validate`."""

    num_vars: int
    node_count: int
    output_degree: int
    homogeneous: bool
    node_degrees: np.ndarray  # formal degree per tape slot


def validate(program):
    """Check structure and report formal degrees.

    Confirms dense topologically ordered ids, in-range operand references,
    integer ``pow`` exponents >= 1 and finite coefficients.  Degrees are
    propagated formally (add/sub: max with a heterogeneity flag on mismatch,
    mul: sum, pow: product with the exponent); cancellations are ignored.

    Raises
    ------
    MalformedSlp
        On any structural violation.
    """
    m = program.num_vars
    if m < 1:
        raise MalformedSlp("program needs at least one variable")
    n = len(program.nodes)
    deg = np.zeros(m + n + 1, dtype=np.int64)
    deg[1:m + 1] = 1
    pure = np.ones(m + n + 1, dtype=bool)

    for k, node in enumerate(program.nodes):
        nid = m + 1 + k
        if node.id != nid:
            raise MalformedSlp(f"node at position {k} has id {node.id}, expected {nid}")
        if node.op not in OPS:
            raise MalformedSlp(f"node {nid}: unknown op {node.op!r}")
        if not np.isfinite(node.coef):
            raise MalformedSlp(f"node {nid}: non-finite coefficient")
        u, v = node.inputs
        if not (isinstance(u, (int, np.integer)) and 0 <= u < nid):
            raise MalformedSlp(f"node {nid}: operand {u} out of range")
        if node.op == "pow":
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise MalformedSlp(f"node {nid}: pow exponent must be an integer >= 1")
            deg[nid] = deg[u] * v
            pure[nid] = pure[u]
        else:
            if not (isinstance(v, (int, np.integer)) and 0 <= v < nid):
                raise MalformedSlp(f"node {nid}: operand {v} out of range")
            if node.op == "mul":
                deg[nid] = deg[u] + deg[v]
                pure[nid] = pure[u] and pure[v]
            else:
                deg[nid] = max(deg[u], deg[v])
                pure[nid] = pure[u] and pure[v] and deg[u] == deg[v]

    if not 0 <= program.output <= m + n:
        raise MalformedSlp(f"output id {program.output} does not exist")

    return ValidationReport(num_vars=m, node_count=n,
                            output_degree=int(deg[program.output]),
                            homogeneous=bool(pure[program.output]),
                            node_degrees=deg)


def degree(program):
    """Formal output degree and homogeneity flag of a validated program."""
    report = validate(program)
    return report.output_degree, report.homogeneous
