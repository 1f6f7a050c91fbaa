"""Hyperbolicity-cone geometry.

Eigenvalues of a point are the roots of the univariate restriction
``t -> p(x - t e)``.  Restrictions are recovered by interpolation at
Chebyshev-spaced samples (exact for degree-d polynomials, well conditioned),
roots come from the colleague-matrix companion of the Chebyshev fit, and the
barrier is ``-ln p`` with derivatives assembled from one shared tape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .autodiff import eval, eval_many, hessian
from .errors import (IllConditioned, InvalidParams, NonRealRoots,
                     OutsideDomain)
from .slp import validate

# Fitted coefficients of a degree-d polynomial carry relative error ~1e-14;
# a root of multiplicity q can then move by ~(1e-14)^(1/q), so realness
# tolerances must widen with the degree or legitimate multiple eigenvalues
# (e.g. at the direction itself) would be rejected.
_COEF_ERR = 1e-14


def _cluster_tol(d):
    return 25.0 * _COEF_ERR ** (1.0 / max(d, 1))


@dataclass
class Spectrum:
    """Eigenvalues in non-increasing order plus the observed imaginary residue."""

    eigenvalues: np.ndarray
    max_imag_residue: float


@dataclass(eq=False)
class HyperbolicCone:
    """A straight-line program together with a hyperbolicity direction.

    Validates that the program is homogeneous with degree >= 1 and that
    p(e) > 0.  The barrier parameter equals the degree.
    """

    def __init__(self, program, e):
        report = validate(program)
        if not report.homogeneous:
            raise InvalidParams("cone polynomial must be homogeneous")
        if report.output_degree < 1:
            raise InvalidParams("cone polynomial must have degree >= 1")
        e = np.asarray(e, dtype=np.float64)
        if e.shape != (program.num_vars,):
            raise InvalidParams(f"direction must have length {program.num_vars}")
        p_e, _ = eval(program, e)
        if not p_e > 0.0:
            raise OutsideDomain(f"p(e) = {p_e} must be positive")
        self.program = program
        self.e = e
        self.d = report.output_degree
        self.p_at_e = p_e

    @property
    def num_vars(self):
        return self.program.num_vars


def _restrict_cheb(cone, x, direction, refit_tol=1e-6, scale=None):
    """Chebyshev interpolation of t -> p(x + t*direction).

    Returns ``(scale, coeffs)`` where the polynomial in u = t/scale has the
    given Chebyshev coefficients.  Sample nodes are scaled by |x|/|direction|
    for conditioning (or by an explicit window half-width); a refit at fresh
    nodes guards against blowup.
    """
    x = np.asarray(x, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)
    d = cone.d
    if scale is None:
        nx, nd = np.linalg.norm(x), np.linalg.norm(direction)
        scale = nx / nd if nx > 0 and nd > 0 else 1.0
    u = _cheb.chebpts1(d + 1)
    pts = x[None, :] + (scale * u)[:, None] * direction[None, :]
    vals = eval_many(cone.program, pts)
    coeffs = _cheb.chebfit(u, vals, d)

    u2 = np.linspace(-1.0, 1.0, max(2 * d + 3, 20))
    pts2 = x[None, :] + (scale * u2)[:, None] * direction[None, :]
    vals2 = eval_many(cone.program, pts2)
    ref = max(1.0, np.max(np.abs(vals)), np.max(np.abs(vals2)))
    resid = np.max(np.abs(_cheb.chebval(u2, coeffs) - vals2)) / ref
    if resid > refit_tol:
        raise IllConditioned(f"restriction refit residual {resid:.2e} exceeds {refit_tol:.0e}")
    return scale, coeffs


def restrict_univariate(cone, x, direction):
    """Power-basis coefficients (ascending, length d+1) of t -> p(x + t*direction)."""
    scale, coeffs = _restrict_cheb(cone, x, direction)
    pow_u = _cheb.cheb2poly(coeffs)
    pow_u = np.concatenate([pow_u, np.zeros(cone.d + 1 - len(pow_u))])
    return pow_u / scale ** np.arange(cone.d + 1)


def _line_roots(cone, x, direction, refit_tol=1e-6, scale=None):
    """Complex roots of the restriction, in t units."""
    scale, coeffs = _restrict_cheb(cone, x, direction, refit_tol=refit_tol,
                                   scale=scale)
    trimmed = _cheb.chebtrim(coeffs, tol=np.max(np.abs(coeffs)) * 1e-13)
    if len(trimmed) <= 1:
        return np.zeros(0, dtype=np.complex128)
    return scale * _cheb.chebroots(trimmed)


def eigenvalues(cone, x, tol_imag=1e-7):
    """Spectrum of ``x``: roots of p(x - t e), sorted non-increasing.

    The imaginary-part tolerance is relative to the largest root magnitude
    and is widened to the multiple-root cluster limit for the cone's degree.

    Raises
    ------
    NonRealRoots
        If the imaginary residue exceeds the tolerance; this certifies that
        realness fails numerically along the line x - t e.
    """
    roots = _line_roots(cone, x, -cone.e)
    if len(roots) != cone.d:
        raise NonRealRoots(f"degree dropped from {cone.d} to {len(roots)} along the line")
    scale = max(1.0, np.max(np.abs(roots)))
    residue = float(np.max(np.abs(roots.imag))) if len(roots) else 0.0
    if residue > max(tol_imag, _cluster_tol(cone.d)) * scale:
        raise NonRealRoots(f"imaginary residue {residue:.2e} at scale {scale:.2e}")
    lam = np.sort(roots.real)[::-1]
    return Spectrum(eigenvalues=lam, max_imag_residue=residue)


def membership(cone, x, tol=1e-9):
    """True iff the smallest eigenvalue of x is >= -tol."""
    spec = eigenvalues(cone, x)
    return bool(spec.eigenvalues[-1] >= -tol)


@dataclass
class HyperbolicityReport:
    """Randomized realness certificate; a necessary-condition check only."""

    passed: bool
    trials: int
    max_residue: float
    tol: float
    worst_line: np.ndarray


def check_hyperbolicity(cone, trials=200, rng_seed=0, tol=1e-7):
    """Sample random lines and report the worst imaginary residue.

    PASS means every sampled restriction had roots with imaginary parts at
    most ``tol`` times the root scale.  Random lines have simple roots
    almost surely, so the strict tolerance applies.
    """
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    worst_line = cone.e
    for _ in range(trials):
        x = rng.standard_normal(cone.num_vars)
        roots = _line_roots(cone, x, -cone.e)
        if len(roots) == 0:
            continue
        scale = max(1.0, np.max(np.abs(roots)))
        residue = np.max(np.abs(roots.imag)) / scale
        if residue > worst:
            worst = float(residue)
            worst_line = x
    return HyperbolicityReport(passed=worst <= tol, trials=trials,
                               max_residue=worst, tol=tol, worst_line=worst_line)


def max_step_to_boundary(cone, z, dz, t_max=None):
    """Largest step with z + t*dz inside the cone; +inf when dz recedes.

    Computes the smallest positive real root of t -> p(z + t*dz).  With
    ``t_max`` the restriction is interpolated on the window [-t_max, t_max]
    only; roots beyond the window are discarded and +inf is returned when
    the window is crossing-free.  Window fits stay well conditioned at high
    degree, where a global fit can span too many orders of magnitude to
    resolve roots.  Nearly real complex pairs are treated as crossings,
    which can only shorten the step (trial points are re-checked anyway).
    The refit guard is looser than for eigenvalues: near the cone boundary
    the evaluation itself cancels heavily and step bounds only need a few
    digits.
    """
    roots = _line_roots(cone, z, dz, refit_tol=1e-4, scale=t_max)
    if len(roots) == 0:
        return np.inf
    re, im = roots.real, np.abs(roots.imag)
    near_real = im <= 1e-4 * np.maximum(1.0, np.abs(re))
    keep = near_real & (re > 0)
    if t_max is not None:
        keep &= re <= t_max
    pos = re[keep]
    return float(np.min(pos)) if len(pos) else np.inf


def barrier(cone, x, check=True):
    """Value, gradient and Hessian of F = -ln p at an interior point.

    All three come from one shared tape: grad F = -grad p / p and
    hess F = (grad p)(grad p)^T / p^2 - hess p / p.  With ``check`` the full
    eigenvalue membership test runs first; pass ``check=False`` on points
    already certified interior (e.g. inside a guarded line search).
    """
    x = np.asarray(x, dtype=np.float64)
    p, tape = eval(cone.program, x)
    if not p > 0.0:
        raise OutsideDomain(f"p(x) = {p} is not positive")
    if check and not membership(cone, x, tol=1e-9 * max(1.0, np.linalg.norm(x))):
        raise OutsideDomain("point has a negative eigenvalue")
    hp, gp = hessian(cone.program, tape=tape, return_grad=True)
    value = -np.log(p)
    grad = -gp / p
    hess = np.outer(gp, gp) / (p * p) - hp / p
    return value, grad, hess
