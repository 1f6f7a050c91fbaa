"""Explicit monomial-list polynomials.

Exact term-by-term evaluation and differentiation; the independent oracle
used to cross-check every straight-line-program operation at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import MalformedInput
from .slp import ProgramBuilder


@dataclass(eq=False)
class MonomialPoly:
    """Polynomial as an exponent matrix plus coefficient vector.

    ``exps`` is (k, m) nonnegative integers, row j holding the powers of the
    m variables in term j; ``coefs`` is the matching length-k coefficient
    vector.  Construct through :func:`make_monomial` to get normalization
    (duplicate exponent rows merged, zero terms dropped).
    """

    num_vars: int
    exps: np.ndarray
    coefs: np.ndarray

    @property
    def term_count(self):
        return len(self.coefs)

    def to_list(self):
        return [{"exponents": [int(e) for e in row], "coef": float(c)}
                for row, c in zip(self.exps, self.coefs)]

    @staticmethod
    def from_list(items, num_vars=None):
        terms = [(tuple(int(e) for e in it["exponents"]), float(it["coef"]))
                 for it in items]
        if num_vars is None:
            if not terms:
                raise MalformedInput("cannot infer num_vars from an empty term list")
            num_vars = len(terms[0][0])
        return make_monomial(num_vars, terms)


def make_monomial(num_vars, terms):
    """Build a normalized MonomialPoly from ``(exponent_tuple, coef)`` pairs."""
    merged = {}
    for exps, coef in terms:
        exps = tuple(int(e) for e in exps)
        if len(exps) != num_vars:
            raise MalformedInput(f"exponent vector {exps} has wrong length")
        if any(e < 0 for e in exps):
            raise MalformedInput(f"negative exponent in {exps}")
        merged[exps] = merged.get(exps, 0.0) + float(coef)
    kept = [(e, c) for e, c in merged.items() if c != 0.0]
    kept.sort(key=lambda ec: ec[0])
    if kept:
        exps = np.array([e for e, _ in kept], dtype=np.int64)
        coefs = np.array([c for _, c in kept], dtype=np.float64)
    else:
        exps = np.zeros((0, num_vars), dtype=np.int64)
        coefs = np.zeros(0, dtype=np.float64)
    return MonomialPoly(num_vars=num_vars, exps=exps, coefs=coefs)


def esp_monomial(n, k):
    """Elementary symmetric polynomial e_k^n as an explicit monomial list."""
    terms = []
    exp = [0] * n
    for subset in combinations(range(n), k):
        row = list(exp)
        for i in subset:
            row[i] = 1
        terms.append((tuple(row), 1.0))
    return make_monomial(n, terms)


def eval_monomial(poly, x):
    x = np.asarray(x, dtype=np.float64)
    if poly.term_count == 0:
        return 0.0
    return float(np.prod(x[None, :] ** poly.exps, axis=1) @ poly.coefs)


def eval_monomial_many(poly, X):
    """Evaluate at each row of X (B, m)."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if poly.term_count == 0:
        return np.zeros(X.shape[0])
    pw = X[:, None, :] ** poly.exps[None, :, :]
    return np.prod(pw, axis=2) @ poly.coefs


def differentiate(poly, j):
    """Exact partial derivative with respect to variable j (0-based)."""
    mask = poly.exps[:, j] >= 1
    exps = poly.exps[mask].copy()
    coefs = poly.coefs[mask] * exps[:, j]
    exps[:, j] -= 1
    return MonomialPoly(num_vars=poly.num_vars, exps=exps, coefs=coefs)


def gradient_monomial(poly, x):
    return np.array([eval_monomial(differentiate(poly, j), x)
                     for j in range(poly.num_vars)])


def hessian_monomial(poly, x):
    m = poly.num_vars
    h = np.empty((m, m))
    for j in range(m):
        dj = differentiate(poly, j)
        for l in range(j, m):
            h[j, l] = h[l, j] = eval_monomial(differentiate(dj, l), x)
    return h


def mono_to_slp(poly):
    """Sum-of-products straight-line program equivalent to ``poly``.

    Each term becomes a chain of pow/mul nodes with the coefficient folded
    into the last node; terms are accumulated with a chain of adds.  The
    constant term uses the multiplicative-identity slot f0.
    """
    if poly.term_count == 0:
        raise MalformedInput("cannot convert an empty monomial list")
    b = ProgramBuilder(poly.num_vars)
    term_ids = []
    for exps, coef in zip(poly.exps, poly.coefs):
        factors = []
        for j, e in enumerate(exps):
            if e == 1:
                factors.append(b.input(j + 1))
            elif e >= 2:
                factors.append(b.pow(b.input(j + 1), int(e)))
        if not factors:
            term_ids.append(b.mul(0, 0, coef=coef))
            continue
        acc = factors[0]
        for f in factors[1:]:
            acc = b.mul(acc, f)
        if coef != 1.0:
            acc = b.mul(acc, 0, coef=coef)
        term_ids.append(acc)
    acc = term_ids[0]
    for t in term_ids[1:]:
        acc = b.add(acc, t)
    return b.finish(acc)
