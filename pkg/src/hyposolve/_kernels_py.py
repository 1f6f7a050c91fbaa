"""Pure-Python / NumPy evaluation kernels.

Fallback used when the compiled extension is unavailable (or when
``HYPOSOLVE_PURE=1``).  Semantics match ``_kernels.pyx`` exactly; the
compiled module is just faster.

Op codes: 0 add, 1 sub, 2 mul, 3 pow.  ``ia`` holds first-operand tape
indices; ``ib`` holds second-operand indices, except for pow where it is the
integer exponent.  Tape layout: slot 0 is the constant 1, slots 1..m the
inputs, slot m+1+k the k-th node.
"""

import numpy as np

BACKEND = "pure"


def forward(ops, ia, ib, coef, m, x):
    """One forward sweep; returns the full value tape of length m+N+1."""
    n = len(ops)
    tape = np.empty(m + n + 1, dtype=np.float64)
    tape[0] = 1.0
    tape[1:m + 1] = x
    t = tape  # local alias, python-level loop
    for k in range(n):
        op = ops[k]
        u = ia[k]
        a = coef[k]
        if op == 0:
            t[m + 1 + k] = a * (t[u] + t[ib[k]])
        elif op == 1:
            t[m + 1 + k] = a * (t[u] - t[ib[k]])
        elif op == 2:
            t[m + 1 + k] = a * t[u] * t[ib[k]]
        else:
            t[m + 1 + k] = a * t[u] ** int(ib[k])
    return tape


def forward_batch(ops, ia, ib, coef, m, X):
    """Forward sweep over a batch of points X (B, m); returns the tape matrix.

    The whole tape is kept as a (m+N+1, B) matrix so each node is one
    vectorized row operation.  Output values live in row ``out``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    nb = X.shape[0]
    n = len(ops)
    tape = np.empty((m + n + 1, nb), dtype=np.float64)
    tape[0] = 1.0
    tape[1:m + 1] = X.T
    for k in range(n):
        op = ops[k]
        u = ia[k]
        a = coef[k]
        if op == 0:
            tape[m + 1 + k] = a * (tape[u] + tape[ib[k]])
        elif op == 1:
            tape[m + 1 + k] = a * (tape[u] - tape[ib[k]])
        elif op == 2:
            tape[m + 1 + k] = a * tape[u] * tape[ib[k]]
        else:
            tape[m + 1 + k] = a * tape[u] ** int(ib[k])
    return tape


def reverse_grad(ops, ia, ib, coef, m, tape, out):
    """Reverse adjoint sweep; returns adjoints for all tape slots.

    The gradient with respect to the inputs is ``d[1:m+1]``.
    """
    n = len(ops)
    d = np.zeros(m + n + 1, dtype=np.float64)
    d[out] = 1.0
    t = tape
    for k in range(n - 1, -1, -1):
        delta = d[m + 1 + k]
        if delta == 0.0:
            continue
        op = ops[k]
        u = ia[k]
        a = coef[k]
        if op == 0:
            ad = a * delta
            d[u] += ad
            d[ib[k]] += ad
        elif op == 1:
            ad = a * delta
            d[u] += ad
            d[ib[k]] -= ad
        elif op == 2:
            v = ib[k]
            d[u] += a * t[v] * delta
            d[v] += a * t[u] * delta
        else:
            p = int(ib[k])
            d[u] += a * p * t[u] ** (p - 1) * delta
    return d


def hessian_sweep(ops, ia, ib, coef, m, tape, out):
    """Batched reverse-over-forward sweep.

    Builds the forward-mode gradient table MG (one row per tape slot), then
    runs one reverse sweep propagating both scalar adjoints and adjoint
    gradient rows.  Returns ``(H_raw, grad)`` where ``H_raw`` is the
    unsymmetrized m-by-m second-derivative matrix and ``grad`` the first
    derivatives.
    """
    n = len(ops)
    size = m + n + 1
    mg = np.zeros((size, m), dtype=np.float64)
    mg[1:m + 1] = np.eye(m)
    t = tape
    for k in range(n):
        op = ops[k]
        u = ia[k]
        a = coef[k]
        row = m + 1 + k
        if op == 0:
            np.multiply(mg[u] + mg[ib[k]], a, out=mg[row])
        elif op == 1:
            np.multiply(mg[u] - mg[ib[k]], a, out=mg[row])
        elif op == 2:
            v = ib[k]
            mg[row] = a * (t[u] * mg[v] + t[v] * mg[u])
        else:
            p = int(ib[k])
            mg[row] = (a * p * t[u] ** (p - 1)) * mg[u]

    d = np.zeros(size, dtype=np.float64)
    adj = np.zeros((size, m), dtype=np.float64)
    d[out] = 1.0
    for k in range(n - 1, -1, -1):
        row = m + 1 + k
        delta = d[row]
        arow = adj[row]
        op = ops[k]
        u = ia[k]
        a = coef[k]
        if op == 0:
            v = ib[k]
            ad = a * delta
            d[u] += ad
            d[v] += ad
            adj[u] += a * arow
            adj[v] += a * arow
        elif op == 1:
            v = ib[k]
            ad = a * delta
            d[u] += ad
            d[v] -= ad
            adj[u] += a * arow
            adj[v] -= a * arow
        elif op == 2:
            v = ib[k]
            d[u] += a * t[v] * delta
            d[v] += a * t[u] * delta
            adj[u] += a * (t[v] * arow + delta * mg[v])
            adj[v] += a * (t[u] * arow + delta * mg[u])
        else:
            p = int(ib[k])
            d[u] += a * p * t[u] ** (p - 1) * delta
            adj[u] += (a * p * t[u] ** (p - 1)) * arow
            if p >= 2:
                adj[u] += (a * p * (p - 1) * t[u] ** (p - 2) * delta) * mg[u]
    return adj[1:m + 1].copy(), d[1:m + 1].copy()
