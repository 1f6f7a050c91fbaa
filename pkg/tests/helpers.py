"""Shared test utilities: independent oracles and builder inventories.

The oracles here deliberately avoid the straight-line-program code paths:
monomial expansions are built combinatorially and differentiated term by
term, so they can certify the SLP sweeps.
"""

from itertools import combinations

import numpy as np

from hyposolve import (MonomialPoly, SimpleGraph, compose_esp_with_linear_forms,
                       directional_derivative, esp, esp_monomial,
                       product_of_linear_forms, vamos, vamos_like)
from hyposolve.monomial import differentiate, make_monomial


def rel_err(got, want):
    got = np.asarray(got, dtype=np.float64)
    want = np.asarray(want, dtype=np.float64)
    scale = max(1.0, float(np.max(np.abs(want))) if want.size else 1.0)
    return float(np.max(np.abs(got - want))) / scale if got.size else 0.0


def vamos_like_monomial(m):
    """All square-free quartics except the star/path pair products."""
    excluded = set()
    pair = lambda k: (2 * k - 2, 2 * k - 1)  # 0-based indices of y_k
    for k in range(2, m + 1):
        excluded.add(tuple(sorted(pair(1) + pair(k))))
    for k in range(2, m):
        excluded.add(tuple(sorted(pair(k) + pair(k + 1))))
    terms = []
    for subset in combinations(range(2 * m), 4):
        if subset in excluded:
            continue
        exps = [0] * (2 * m)
        for i in subset:
            exps[i] = 1
        terms.append((tuple(exps), 1.0))
    return make_monomial(2 * m, terms)


def _poly_mul(a, b, m):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def _linear_form_dict(row):
    m = len(row)
    out = {}
    for j, c in enumerate(row):
        if c != 0.0:
            e = [0] * m
            e[j] = 1
            out[tuple(e)] = float(c)
    return out


def linprod_monomial(L):
    """Symbolic expansion of the product of linear forms."""
    L = np.atleast_2d(np.asarray(L, dtype=np.float64))
    m = L.shape[1]
    acc = {tuple([0] * m): 1.0}
    for row in L:
        acc = _poly_mul(acc, _linear_form_dict(row), m)
    return make_monomial(m, list(acc.items()))


def compose_monomial(k, L, e):
    """Expansion of e_k over the normalized linear forms l_i / l_i(e)."""
    L = np.atleast_2d(np.asarray(L, dtype=np.float64))
    ell, m = L.shape
    le = L @ np.asarray(e, dtype=np.float64)
    forms = [_linear_form_dict(L[i] / le[i]) for i in range(ell)]
    acc = {}
    for subset in combinations(range(ell), k):
        prod = {tuple([0] * m): 1.0}
        for i in subset:
            prod = _poly_mul(prod, forms[i], m)
        for key, val in prod.items():
            acc[key] = acc.get(key, 0.0) + val
    return make_monomial(m, list(acc.items()))


def dirderiv_monomial(poly, e):
    """Directional derivative of a monomial polynomial."""
    terms = []
    for j, ej in enumerate(np.asarray(e, dtype=np.float64)):
        if ej == 0.0:
            continue
        dj = differentiate(poly, j)
        terms.extend((tuple(exps), ej * coef)
                     for exps, coef in zip(dj.exps, dj.coefs))
    return make_monomial(poly.num_vars, terms)


def oracle_pairs(max_vars=15):
    """(name, program, monomial oracle) pairs covering every builder."""
    pairs = []
    for n, k in [(3, 2), (5, 3), (8, 4), (10, 6), (12, 6)]:
        pairs.append((f"esp({n},{k})", esp(n, k), esp_monomial(n, k)))
    pairs.append(("vamos", vamos(), vamos_like_monomial(4)))
    for m in (5, 6):
        pairs.append((f"vamos_like({m})", vamos_like(m), vamos_like_monomial(m)))
    rng = np.random.default_rng(7)
    for ell, m in [(1, 3), (3, 4), (5, 5), (6, 6)]:
        L = rng.standard_normal((ell, m))
        pairs.append((f"linprod({ell},{m})", product_of_linear_forms(L),
                      linprod_monomial(L)))
    base_n, base_k = 7, 4
    e = np.ones(base_n)
    pairs.append((f"dirderiv(esp({base_n},{base_k}))",
                  directional_derivative(esp(base_n, base_k), e),
                  dirderiv_monomial(esp_monomial(base_n, base_k), e)))
    L = rng.standard_normal((5, 4))
    e4 = np.ones(4)
    while np.any(np.abs(L @ e4) < 1e-2):
        L = rng.standard_normal((5, 4))
    pairs.append(("compose(2,(5,4))", compose_esp_with_linear_forms(2, L, e4),
                  compose_monomial(2, L, e4)))
    return [(name, prog, poly) for name, prog, poly in pairs
            if prog.num_vars <= max_vars]


def builder_inventory():
    """Representative hyperbolic builder outputs with their directions."""
    rng = np.random.default_rng(11)
    out = [
        ("esp(10,4)", esp(10, 4), np.ones(10)),
        ("esp(12,7)", esp(12, 7), np.ones(12)),
        ("vamos", vamos(), np.ones(8)),
        ("vamos_like(6)", vamos_like(6), np.ones(12)),
        ("dirderiv(esp(8,4))", directional_derivative(esp(8, 4), np.ones(8)),
         np.ones(8)),
    ]
    L = rng.standard_normal((5, 6))
    while np.any(np.abs(L @ np.ones(6)) < 1e-2):
        L = rng.standard_normal((5, 6))
    out.append(("linprod(5,6)", product_of_linear_forms(L), np.ones(6)))
    out.append(("compose(3,(5,6))", compose_esp_with_linear_forms(3, L, np.ones(6)),
                np.ones(6)))
    return out


def random_builder_programs(count, seed=0):
    """Seeded stream of builder programs for finite-difference testing."""
    rng = np.random.default_rng(seed)
    progs = []
    while len(progs) < count:
        kind = rng.integers(0, 4)
        if kind == 0:
            n = int(rng.integers(3, 9))
            k = int(rng.integers(1, n + 1))
            progs.append(esp(n, k))
        elif kind == 1:
            progs.append(vamos_like(int(rng.integers(4, 7))))
        elif kind == 2:
            ell = int(rng.integers(1, 6))
            m = int(rng.integers(2, 6))
            progs.append(product_of_linear_forms(rng.standard_normal((ell, m))))
        else:
            n = int(rng.integers(3, 8))
            k = int(rng.integers(2, n + 1))
            e = rng.standard_normal(n)
            progs.append(directional_derivative(esp(n, k), e))
    return progs


def triangle_graph():
    return SimpleGraph(num_vertices=3, edges=[(0, 1), (0, 2), (1, 2)])


def complete_graph(n):
    return SimpleGraph(num_vertices=n,
                       edges=[(i, j) for i in range(n) for j in range(i + 1, n)])
