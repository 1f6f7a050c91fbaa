"""Constructors emitting straight-line programs for hyperbolic polynomial families.

Families: elementary symmetric polynomials (dynamic-programming recursion),
Vamos and Vamos-like basis-generating polynomials, products of linear forms,
directional derivatives, compositions of an elementary symmetric polynomial
with normalized linear forms, and spanning-tree polynomials of small graphs.
All builders are pure functions returning validated homogeneous programs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DegreeTooLow, DisconnectedGraph, InvalidParams, TooLarge,
                     VanishingOnDirection, ZeroRow)
from .monomial import make_monomial
from .slp import ProgramBuilder, validate


@dataclass
class SimpleGraph:
    """Undirected graph; edge j is variable x_{j+1} of the tree polynomial."""

    num_vertices: int
    edges: list  # list of (u, v) with 0-based vertex indices


def _esp_table(builder, refs, k):
    """Dynamic-programming block for e_k over the given operand ids.

    Fills the recursion e_k^(i) = e_k^(i-1) + x_i * e_{k-1}^(i-1)
    column-by-column in i, creating each cell exactly once and skipping
    cells that cannot reach e_k^(n).  Returns the id of e_k^(n).
    """
    n = len(refs)
    table = {}  # (i, kp) -> node id
    for i in range(1, n + 1):
        xi = refs[i - 1]
        lo = max(1, k - (n - i))
        hi = min(k, i)
        for kp in range(lo, hi + 1):
            term = xi if kp == 1 else builder.mul(xi, table[(i - 1, kp - 1)])
            prev = table.get((i - 1, kp))
            table[(i, kp)] = term if prev is None else builder.add(prev, term)
    return table[(n, k)]


def esp(n, k):
    """Elementary symmetric polynomial e_k^n; node count O(nk)."""
    if not 1 <= k <= n:
        raise InvalidParams(f"esp requires 1 <= k <= n, got ({n}, {k})")
    b = ProgramBuilder(n)
    out = _esp_table(b, [b.input(i) for i in range(1, n + 1)], k)
    return b.finish(out)


def esp_cell_counts(n, k):
    """(mul, add) node counts of the e_k^n block, from the cell grid.

    A cell (i, kp) emits a mul unless kp == 1 (the product with e_0 is the
    bare variable) and an add unless kp == i (no previous-column value).
    """
    muls = adds = 0
    for i in range(1, n + 1):
        lo = max(1, k - (n - i))
        hi = min(k, i)
        for kp in range(lo, hi + 1):
            if kp >= 2:
                muls += 1
            if kp <= i - 1:
                adds += 1
    return muls, adds


def vamos():
    """Basis-generating polynomial of the Vamos matroid on 8 elements.

    Equals ``vamos_like(4)``: e_4^8 minus the five pairwise products of the
    variable pairs (x1x2, x3x4, x5x6, x7x8) that form dependent quadruples.
    """
    return vamos_like(4)


def vamos_like(m):
    """Vamos-like polynomial on 2m variables, degree 4.

    e_4^{2m} minus the star sum over pairwise products y_1*y_k (k=2..m) and
    the path sum y_k*y_{k+1} (k=2..m-1), with y_k := x_{2k-1} x_{2k} created
    once and reused.
    """
    if m < 4:
        raise InvalidParams(f"vamos_like requires m >= 4, got {m}")
    b = ProgramBuilder(2 * m)
    e4 = _esp_table(b, [b.input(i) for i in range(1, 2 * m + 1)], 4)
    y = [b.mul(b.input(2 * j - 1), b.input(2 * j)) for j in range(1, m + 1)]
    star = b.mul(y[0], y[1])
    for j in range(2, m):
        star = b.add(star, b.mul(y[0], y[j]))
    path = b.mul(y[1], y[2])
    for j in range(2, m - 1):
        path = b.add(path, b.mul(y[j], y[j + 1]))
    return b.finish(b.sub(b.sub(e4, star), path))


def _linear_form(builder, row, scale=1.0):
    """Emit c_1 x_1 + ... + c_m x_m, encoding scaled variables as mul(x_i, f0)."""
    acc = None
    for j, c in enumerate(row):
        if c == 0.0:
            continue
        node = builder.mul(builder.input(j + 1), 0, coef=float(c) * scale)
        acc = node if acc is None else builder.add(acc, node)
    if acc is None:
        raise ZeroRow("linear form matrix has an all-zero row")
    return acc


def product_of_linear_forms(L):
    """Product of the linear forms given by the rows of L (ell, m)."""
    L = np.atleast_2d(np.asarray(L, dtype=np.float64))
    ell, m = L.shape
    if ell < 1:
        raise InvalidParams("need at least one linear form")
    b = ProgramBuilder(m)
    forms = [_linear_form(b, row) for row in L]
    acc = forms[0]
    for f in forms[1:]:
        acc = b.mul(acc, f)
    return b.finish(acc)


def directional_derivative(program, e):
    """Tangent program for the directional derivative along ``e``.

    Forward-mode transformation: every node gets a companion derivative node
    seeded with the constants e_i at the inputs; zero tangents are pruned.
    Requires a homogeneous program of degree >= 2; the output has degree d-1.
    """
    report = validate(program)
    if not report.homogeneous or report.output_degree < 2:
        raise DegreeTooLow("directional derivative needs a homogeneous program "
                           f"of degree >= 2 (got degree {report.output_degree}, "
                           f"homogeneous={report.homogeneous})")
    e = np.asarray(e, dtype=np.float64)
    m = program.num_vars
    if e.shape != (m,):
        raise InvalidParams(f"direction must have length {m}")

    b = ProgramBuilder(m)
    emit = {"add": b.add, "sub": b.sub, "mul": b.mul, "pow": b.pow}
    # replay the original nodes; ids are preserved because the builder
    # allocates the same dense id sequence
    for node in program.nodes:
        emit[node.op](node.inputs[0], node.inputs[1], coef=node.coef)

    const_cache = {}

    def const_node(value):
        if value not in const_cache:
            const_cache[value] = b.mul(0, 0, coef=value)
        return const_cache[value]

    tangent = {0: None}  # tape id -> tangent id (None = identically zero)
    for i in range(1, m + 1):
        tangent[i] = const_node(float(e[i - 1])) if e[i - 1] != 0.0 else None

    for node in program.nodes:
        u, v = node.inputs
        a = node.coef
        tu = tangent[u]
        if node.op == "pow":
            p = v
            if tu is None:
                tangent[node.id] = None
            elif p == 1:
                tangent[node.id] = b.mul(tu, 0, coef=a)
            else:
                tangent[node.id] = b.mul(b.pow(u, p - 1, coef=a * p), tu)
            continue
        tv = tangent[v]
        if node.op == "add" or node.op == "sub":
            sign = 1.0 if node.op == "add" else -1.0
            if tu is None and tv is None:
                tangent[node.id] = None
            elif tv is None:
                tangent[node.id] = b.mul(tu, 0, coef=a)
            elif tu is None:
                tangent[node.id] = b.mul(tv, 0, coef=sign * a)
            else:
                tangent[node.id] = emit[node.op](tu, tv, coef=a)
        else:  # mul
            left = b.mul(tu, v, coef=a) if tu is not None else None
            right = b.mul(u, tv, coef=a) if tv is not None else None
            if left is None and right is None:
                tangent[node.id] = None
            elif right is None:
                tangent[node.id] = left
            elif left is None:
                tangent[node.id] = right
            else:
                tangent[node.id] = b.add(left, right)

    out = tangent[program.output]
    if out is None:
        out = b.sub(0, 0)  # derivative is identically zero
    return b.finish(out)


def compose_esp_with_linear_forms(k, L, e):
    """e_k composed with the characteristic map of a product of linear forms.

    Substitutes the normalized forms l_i(x) / l_i(e) for the inputs of the
    e_k^ell recursion, so the value at ``e`` is exactly C(ell, k).  The
    result is hyperbolic in direction ``e``.
    """
    L = np.atleast_2d(np.asarray(L, dtype=np.float64))
    ell, m = L.shape
    if not 1 <= k <= ell:
        raise InvalidParams(f"compose requires 1 <= k <= ell, got k={k}, ell={ell}")
    e = np.asarray(e, dtype=np.float64)
    if e.shape != (m,):
        raise InvalidParams(f"direction must have length {m}")
    le = L @ e
    if np.any(np.abs(le) < 1e-300):
        bad = int(np.argmin(np.abs(le)))
        raise VanishingOnDirection(f"linear form {bad} vanishes at the direction")
    b = ProgramBuilder(m)
    forms = [_linear_form(b, row, scale=1.0 / le[i]) for i, row in enumerate(L)]
    return b.finish(_esp_table(b, forms, k))


def _connected(num_vertices, edges):
    seen = {0}
    stack = [0]
    adj = {i: [] for i in range(num_vertices)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == num_vertices


def spanning_tree_poly(g):
    """Spanning-tree generating polynomial of a connected graph.

    One square-free monomial per spanning tree, enumerated by recursive edge
    inclusion/exclusion with connectivity pruning.  Enumeration scale only
    (at most 24 edges); convert with ``mono_to_slp`` for solver use.
    """
    nv = g.num_vertices
    edges = [tuple(e) for e in g.edges]
    ne = len(edges)
    if ne > 24:
        raise TooLarge(f"{ne} edges exceeds the enumeration limit of 24")
    for u, v in edges:
        if not (0 <= u < nv and 0 <= v < nv):
            raise InvalidParams(f"edge ({u}, {v}) references a missing vertex")
    if nv < 1 or not _connected(nv, edges):
        raise DisconnectedGraph("graph is not connected")

    terms = []

    def grow(idx, chosen, parent):
        if len(chosen) == nv - 1:
            exps = [0] * ne
            for j in chosen:
                exps[j] = 1
            terms.append((tuple(exps), 1.0))
            return
        if idx == ne:
            return
        # pruning: chosen plus undecided edges must still connect everything
        if not _connected(nv, [edges[j] for j in chosen] + edges[idx:]):
            return

        def find(p, a):
            while p[a] != a:
                p[a] = p[p[a]]
                a = p[a]
            return a

        u, v = edges[idx]
        ru, rv = find(parent, u), find(parent, v)
        if ru != rv:  # including this edge keeps a forest
            p2 = list(parent)
            p2[ru] = rv
            grow(idx + 1, chosen + [idx], p2)
        grow(idx + 1, chosen, parent)

    grow(0, [], list(range(nv)))
    if not terms:
        raise DisconnectedGraph("graph has no spanning tree")
    return make_monomial(ne, terms)
