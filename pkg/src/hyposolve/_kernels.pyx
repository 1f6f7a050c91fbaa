# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels; see _kernels_py.py for the reference semantics."""

import numpy as np

from libc.math cimport pow as cpow

BACKEND = "compiled"


def forward(long[:] ops, long[:] ia, long[:] ib, double[:] coef, int m, double[:] x):
    cdef Py_ssize_t n = ops.shape[0]
    out_arr = np.empty(m + n + 1, dtype=np.float64)
    cdef double[:] t = out_arr
    cdef Py_ssize_t k
    cdef long op, u
    cdef double a
    t[0] = 1.0
    for k in range(m):
        t[1 + k] = x[k]
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
            t[m + 1 + k] = a * cpow(t[u], <double>ib[k])
    return out_arr


def forward_batch(long[:] ops, long[:] ia, long[:] ib, double[:] coef, int m, X):
    X = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
    cdef double[:, ::1] xv = X
    cdef Py_ssize_t nb = xv.shape[0]
    cdef Py_ssize_t n = ops.shape[0]
    out_arr = np.empty((m + n + 1, nb), dtype=np.float64)
    cdef double[:, ::1] t = out_arr
    cdef Py_ssize_t k, j
    cdef long op, u, v
    cdef double a, e
    for j in range(nb):
        t[0, j] = 1.0
    for k in range(m):
        for j in range(nb):
            t[1 + k, j] = xv[j, k]
    for k in range(n):
        op = ops[k]
        u = ia[k]
        v = ib[k]
        a = coef[k]
        if op == 0:
            for j in range(nb):
                t[m + 1 + k, j] = a * (t[u, j] + t[v, j])
        elif op == 1:
            for j in range(nb):
                t[m + 1 + k, j] = a * (t[u, j] - t[v, j])
        elif op == 2:
            for j in range(nb):
                t[m + 1 + k, j] = a * t[u, j] * t[v, j]
        else:
            e = <double>v
            for j in range(nb):
                t[m + 1 + k, j] = a * cpow(t[u, j], e)
    return out_arr


def reverse_grad(long[:] ops, long[:] ia, long[:] ib, double[:] coef, int m,
                 double[:] tape, long out):
    cdef Py_ssize_t n = ops.shape[0]
    d_arr = np.zeros(m + n + 1, dtype=np.float64)
    cdef double[:] d = d_arr
    cdef Py_ssize_t k
    cdef long op, u, v, p
    cdef double a, delta, ad
    d[out] = 1.0
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
            d[u] += a * tape[v] * delta
            d[v] += a * tape[u] * delta
        else:
            p = ib[k]
            d[u] += a * p * cpow(tape[u], <double>(p - 1)) * delta
    return d_arr


def hessian_sweep(long[:] ops, long[:] ia, long[:] ib, double[:] coef, int m,
                  double[:] tape, long out):
    cdef Py_ssize_t n = ops.shape[0]
    cdef Py_ssize_t size = m + n + 1
    mg_arr = np.zeros((size, m), dtype=np.float64)
    adj_arr = np.zeros((size, m), dtype=np.float64)
    d_arr = np.zeros(size, dtype=np.float64)
    cdef double[:, ::1] mg = mg_arr
    cdef double[:, ::1] adj = adj_arr
    cdef double[:] d = d_arr
    cdef Py_ssize_t k, j, row
    cdef long op, u, v, p
    cdef double a, delta, fu, fv, c1, c2

    for k in range(m):
        mg[1 + k, k] = 1.0

    for k in range(n):
        op = ops[k]
        u = ia[k]
        a = coef[k]
        row = m + 1 + k
        if op == 0:
            v = ib[k]
            for j in range(m):
                mg[row, j] = a * (mg[u, j] + mg[v, j])
        elif op == 1:
            v = ib[k]
            for j in range(m):
                mg[row, j] = a * (mg[u, j] - mg[v, j])
        elif op == 2:
            v = ib[k]
            fu = tape[u]
            fv = tape[v]
            for j in range(m):
                mg[row, j] = a * (fu * mg[v, j] + fv * mg[u, j])
        else:
            p = ib[k]
            c1 = a * p * cpow(tape[u], <double>(p - 1))
            for j in range(m):
                mg[row, j] = c1 * mg[u, j]

    d[out] = 1.0
    for k in range(n - 1, -1, -1):
        row = m + 1 + k
        delta = d[row]
        op = ops[k]
        u = ia[k]
        a = coef[k]
        if op == 0:
            v = ib[k]
            d[u] += a * delta
            d[v] += a * delta
            for j in range(m):
                adj[u, j] += a * adj[row, j]
                adj[v, j] += a * adj[row, j]
        elif op == 1:
            v = ib[k]
            d[u] += a * delta
            d[v] -= a * delta
            for j in range(m):
                adj[u, j] += a * adj[row, j]
                adj[v, j] -= a * adj[row, j]
        elif op == 2:
            v = ib[k]
            fu = tape[u]
            fv = tape[v]
            d[u] += a * fv * delta
            d[v] += a * fu * delta
            for j in range(m):
                adj[u, j] += a * (fv * adj[row, j] + delta * mg[v, j])
                adj[v, j] += a * (fu * adj[row, j] + delta * mg[u, j])
        else:
            p = ib[k]
            c1 = a * p * cpow(tape[u], <double>(p - 1))
            d[u] += c1 * delta
            if p >= 2:
                c2 = a * p * (p - 1) * cpow(tape[u], <double>(p - 2)) * delta
                for j in range(m):
                    adj[u, j] += c1 * adj[row, j] + c2 * mg[u, j]
            else:
                for j in range(m):
                    adj[u, j] += c1 * adj[row, j]
    return adj_arr[1:m + 1].copy(), d_arr[1:m + 1].copy()
