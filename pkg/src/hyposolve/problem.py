"""Domain-Driven problem container and its JSON format.

A problem is ``min <c, x>  s.t.  A x + b in K`` where K is the product of
the blocks' canonical sets.  Block descriptors mirror the constraint schema
``{kind, dim, payload...}``; HB payloads accept the polynomial in
``straight_line``, ``monomial`` or ``determinant`` format plus the
hyperbolicity direction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .blocks import (DetBlock, DirectSum, EntrBlock, HbBlock, LpBlock,
                     SocBlock)
from .cone import HyperbolicCone
from .errors import InvalidParams
from .monomial import MonomialPoly, mono_to_slp
from .slp import SlpProgram


@dataclass(eq=False)
class DomainDrivenProblem:
    """Objective c, embedding A, blockwise shift b, and barrier blocks."""

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    blocks: DirectSum
    objective_offset: float = 0.0
    name: str = ""
    expected_status: str = ""
    block_meta: list = field(default_factory=list)  # descriptors for re-serialization

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=np.float64)
        if hasattr(self.A, "toarray"):  # accept scipy sparse, work dense at desk scale
            self.A = self.A.toarray()
        self.A = np.asarray(self.A, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)

    @property
    def num_vars(self):
        return len(self.c)

    @property
    def embedding_dim(self):
        return self.A.shape[0]

    def validate(self):
        m_emb, n = self.A.shape
        if self.c.shape != (n,):
            raise InvalidParams(f"c has length {self.c.shape}, expected ({n},)")
        if self.b.shape != (m_emb,):
            raise InvalidParams(f"b has length {self.b.shape}, expected ({m_emb},)")
        if self.blocks.dim != m_emb:
            raise InvalidParams(f"blocks cover {self.blocks.dim} rows, A has {m_emb}")
        if n > m_emb:
            raise InvalidParams("A cannot have full column rank (more columns than rows)")
        r = np.linalg.qr(self.A, mode="r")
        diag = np.abs(np.diag(r))
        if diag.min() <= 1e-12 * max(1.0, diag.max()):
            raise InvalidParams("A is rank deficient")
        return self


def _block_to_dict(blk):
    if blk.kind == "LP":
        return {"kind": "LP", "dim": blk.dim}
    if blk.kind == "SOC":
        return {"kind": "SOC", "dim": blk.dim}
    if blk.kind == "ENTR":
        return {"kind": "ENTR", "pairs": blk.pairs}
    if blk.kind == "DET":
        return {"kind": "DET", "dim": blk.dim,
                "matrices": [h.tolist() for h in [blk.h0] + list(blk.hs)],
                "interior_point": blk.interior_point().tolist()}
    if blk.kind == "HB":
        return {"kind": "HB", "dim": blk.dim, "format": "straight_line",
                "poly": blk.cone.program.to_dict(),
                "direction": blk.cone.e.tolist()}
    raise InvalidParams(f"unknown block kind {blk.kind!r}")


def block_from_dict(data):
    kind = data["kind"]
    if kind == "LP":
        return LpBlock(int(data["dim"]))
    if kind == "SOC":
        return SocBlock(int(data["dim"]))
    if kind == "ENTR":
        return EntrBlock(int(data["pairs"]))
    if kind == "DET":
        return DetBlock(data["matrices"], interior=data.get("interior_point"))
    if kind == "HB":
        fmt = data.get("format", "straight_line")
        direction = np.asarray(data["direction"], dtype=np.float64)
        if fmt == "straight_line":
            program = SlpProgram.from_dict(data["poly"])
        elif fmt == "monomial":
            program = mono_to_slp(MonomialPoly.from_list(data["poly"]))
        elif fmt == "determinant":
            return DetBlock(data["poly"], interior=direction)
        else:
            raise InvalidParams(f"unknown HB polynomial format {fmt!r}")
        return HbBlock(HyperbolicCone(program, direction))
    raise InvalidParams(f"unknown block kind {kind!r}")


def problem_to_dict(problem):
    return {
        "name": problem.name,
        "c": problem.c.tolist(),
        "A": problem.A.tolist(),
        "b": problem.b.tolist(),
        "blocks": [_block_to_dict(blk) for blk in problem.blocks.blocks],
        "objective_offset": problem.objective_offset,
        "expected_status": problem.expected_status,
    }


def problem_from_dict(data):
    blocks = DirectSum([block_from_dict(bd) for bd in data["blocks"]])
    return DomainDrivenProblem(
        c=np.asarray(data["c"], dtype=np.float64),
        A=np.asarray(data["A"], dtype=np.float64),
        b=np.asarray(data["b"], dtype=np.float64),
        blocks=blocks,
        objective_offset=float(data.get("objective_offset", 0.0)),
        name=str(data.get("name", "")),
        expected_status=str(data.get("expected_status", "")),
    ).validate()


def save_problem(problem, path):
    with open(path, "w") as fh:
        json.dump(problem_to_dict(problem), fh, sort_keys=True)


def load_problem(path):
    with open(path) as fh:
        return problem_from_dict(json.load(fh))
