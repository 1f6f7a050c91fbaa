"""Evaluation and differentiation of straight-line programs.

One forward sweep gives the value tape; one reverse adjoint sweep gives the
gradient in O(N) scalar operations; a batched reverse-over-forward sweep
gives the full Hessian in O(N) row operations on m-vectors.  Tapes are
reusable: ``gradient`` and ``hessian`` accept a precomputed
:class:`EvalTape` so barrier code can share a single forward pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import NonFiniteIntermediate
from .slp import OP_ADD, OP_MUL, OP_POW, OP_SUB


@dataclass
class EvalTape:
    """Forward-pass values ``f_0 .. f_{m+N}`` at a fixed input point."""

    values: np.ndarray
    inputs: np.ndarray


def _check_finite(arr, what):
    if not np.all(np.isfinite(arr)):
        raise NonFiniteIntermediate(f"non-finite value in {what}")


def _as_input(program, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (program.num_vars,):
        raise ValueError(f"expected input of shape ({program.num_vars},), got {x.shape}")
    _check_finite(x, "input")
    return x


def eval(program, x):
    """Evaluate ``program`` at ``x``; returns ``(value, tape)``.

    Raises NonFiniteIntermediate if the sweep overflows or produces NaN.
    """
    x = _as_input(program, x)
    ops, ia, ib, coef = program.arrays
    values = kernels.forward(ops, ia, ib, coef, program.num_vars, x)
    _check_finite(values, "forward sweep")
    return float(values[program.output]), EvalTape(values=values, inputs=x)


def eval_many(program, X):
    """Evaluate at each row of ``X`` (B, m); returns a length-B value array."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != program.num_vars:
        raise ValueError(f"expected points with {program.num_vars} coordinates")
    _check_finite(X, "input")
    ops, ia, ib, coef = program.arrays
    tape = kernels.forward_batch(ops, ia, ib, coef, program.num_vars, X)
    _check_finite(tape, "forward sweep")
    return np.asarray(tape[program.output]).copy()


def _tape_for(program, x, tape):
    if tape is None:
        if x is None:
            raise ValueError("pass either x or a precomputed tape")
        return eval(program, x)[1]
    return tape


def gradient(program, x=None, tape=None):
    """Gradient via one reverse adjoint sweep over the tape."""
    tape = _tape_for(program, x, tape)
    ops, ia, ib, coef = program.arrays
    d = kernels.reverse_grad(ops, ia, ib, coef, program.num_vars,
                             tape.values, program.output)
    _check_finite(d, "reverse sweep")
    return np.asarray(d[1:program.num_vars + 1]).copy()


def hessian(program, x=None, tape=None, return_grad=False):
    """Hessian via the batched reverse-over-forward sweep.

    The result is symmetrized as (H + H^T)/2, which makes it bitwise equal
    to its transpose.  With ``return_grad=True`` also returns the gradient
    extracted from the same sweep.
    """
    tape = _tape_for(program, x, tape)
    ops, ia, ib, coef = program.arrays
    h_raw, grad = kernels.hessian_sweep(ops, ia, ib, coef, program.num_vars,
                                        tape.values, program.output)
    _check_finite(h_raw, "hessian sweep")
    h = 0.5 * (h_raw + h_raw.T)
    if return_grad:
        _check_finite(grad, "hessian sweep gradient")
        return h, np.asarray(grad).copy()
    return h


# --- operation counting ------------------------------------------------------
#
# The counters mirror the sweeps one-to-one so complexity properties can be
# asserted without instrumenting the hot loops:
#   gradient: 1 node evaluation (forward) plus one adjoint update per operand
#             reference (2 for add/sub/mul, 1 for pow).
#   hessian:  width-m row operations only; forward table build costs 2 rows
#             for add/sub/mul and 1 for pow, the reverse sweep costs 2 rows
#             for add/sub, 4 for mul and 2 for pow.

_GRAD_REVERSE_OPS = {OP_ADD: 2, OP_SUB: 2, OP_MUL: 2, OP_POW: 1}
_HESS_FORWARD_ROWS = {OP_ADD: 2, OP_SUB: 2, OP_MUL: 2, OP_POW: 1}
_HESS_REVERSE_ROWS = {OP_ADD: 2, OP_SUB: 2, OP_MUL: 4, OP_POW: 2}


def gradient_op_count(program):
    """Scalar operations performed by one gradient call."""
    ops = program.arrays[0]
    return int(len(ops) + sum(_GRAD_REVERSE_OPS[op] for op in ops.tolist()))


def hessian_rowop_count(program):
    """Width-m row operations performed by one hessian call."""
    ops = program.arrays[0]
    return int(sum(_HESS_FORWARD_ROWS[op] + _HESS_REVERSE_ROWS[op]
                   for op in ops.tolist()))
