"""Barrier blocks and their direct sum.

Each block owns a slice of the embedding variable and exposes one uniform
interface: barrier value/gradient/Hessian on its slice, barrier parameter
theta, a canonical strictly feasible point, the largest feasible step along
a homogenized ray, full and quick interiority tests, and its duality-gap
contribution.  The solver works against :class:`DirectSum` only.

Conic blocks (LP, SOC, HB, and DET with a zero constant matrix) exploit the
fact that membership of w = wbar/tau is equivalent to membership of wbar,
so boundary steps reduce to univariate root computations along a straight
ray.  Non-conic blocks (ENTR pairs, DET with an affine shift) fall back to
safeguarded bisection on the true trajectory wbar(alpha)/tau(alpha).
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from . import cone as _cone
from .autodiff import eval as _slp_eval
from .autodiff import eval_many as _slp_eval_many
from .autodiff import gradient as _slp_gradient
from .errors import (InvalidParams, NonRealRoots, OutsideDomain,
                     UnboundedSupport)


def _bisect_max_step(interior, wbar, dwbar, tau, dtau, alpha_cap=8.0):
    """Largest alpha with interior(w(alpha)) along w(a) = (wbar+a*dwbar)/(tau+a*dtau).

    Samples a grid to bracket the first boundary crossing, then bisects.
    Returns alpha_cap when no crossing is found below the cap.
    """
    hi = alpha_cap
    if dtau < 0:  # stay strictly below the tau = 0 pole
        hi = min(hi, -tau / dtau * (1 - 1e-12))

    def ok(a):
        return interior((wbar + a * dwbar) / (tau + a * dtau))

    grid = np.linspace(0.0, hi, 65)[1:]
    bad = None
    for a in grid:
        if not ok(a):
            bad = a
            break
    if bad is None:
        return hi
    lo = 0.0
    for _ in range(60):
        mid = 0.5 * (lo + bad)
        if ok(mid):
            lo = mid
        else:
            bad = mid
    return lo


class LpBlock:
    """Nonnegative orthant slice with barrier -sum(ln w_i)."""

    kind = "LP"

    def __init__(self, dim):
        if dim < 1:
            raise InvalidParams("LP block needs dimension >= 1")
        self.dim = dim
        self.theta = float(dim)

    def interior_point(self):
        return np.ones(self.dim)

    def quick_interior(self, w):
        return bool(np.all(w > 0.0))

    def members(self, w, tol=1e-9):
        return bool(np.all(w >= -tol))

    def barrier(self, w):
        if not self.quick_interior(w):
            raise OutsideDomain("LP slice not strictly positive")
        return -float(np.sum(np.log(w))), -1.0 / w, np.diag(1.0 / w ** 2)

    def grad(self, w):
        if not self.quick_interior(w):
            raise OutsideDomain("LP slice not strictly positive")
        return -1.0 / w

    def max_step(self, wbar, dwbar, tau, dtau, t_max=None):
        neg = dwbar < 0
        if not np.any(neg):
            return np.inf
        return float(np.min(-wbar[neg] / dwbar[neg]))

    def gap_contribution(self, y_norm, b_slice):
        return float(b_slice @ y_norm)


class SocBlock:
    """Second-order cone slice (t, u) with barrier -ln(t^2 - |u|^2)."""

    kind = "SOC"

    def __init__(self, dim):
        if dim < 2:
            raise InvalidParams("SOC block needs dimension >= 2")
        self.dim = dim
        self.theta = 2.0

    def interior_point(self):
        w = np.zeros(self.dim)
        w[0] = 1.0
        return w

    def _residual(self, w):
        return w[0] ** 2 - float(w[1:] @ w[1:])

    def quick_interior(self, w):
        return w[0] > 0.0 and self._residual(w) > 0.0

    def members(self, w, tol=1e-9):
        return bool(w[0] >= -tol and self._residual(w) >= -tol * max(1.0, w[0] ** 2))

    def barrier(self, w):
        q = self._residual(w)
        if not (w[0] > 0.0 and q > 0.0):
            raise OutsideDomain("SOC slice outside the cone")
        gq = np.concatenate(([2.0 * w[0]], -2.0 * w[1:]))
        hq = np.diag(np.concatenate(([2.0], -2.0 * np.ones(self.dim - 1))))
        grad = -gq / q
        hess = np.outer(gq, gq) / (q * q) - hq / q
        return -float(np.log(q)), grad, hess

    def grad(self, w):
        q = self._residual(w)
        if not (w[0] > 0.0 and q > 0.0):
            raise OutsideDomain("SOC slice outside the cone")
        return -np.concatenate(([2.0 * w[0]], -2.0 * w[1:])) / q

    def max_step(self, wbar, dwbar, tau, dtau, t_max=None):
        # roots of (t + a dt)^2 - |u + a du|^2 = c2 a^2 + c1 a + c0, c0 > 0
        c2 = dwbar[0] ** 2 - float(dwbar[1:] @ dwbar[1:])
        c1 = 2.0 * (wbar[0] * dwbar[0] - float(wbar[1:] @ dwbar[1:]))
        c0 = self._residual(wbar)
        roots = np.roots([c2, c1, c0]) if c2 != 0.0 else (
            np.array([-c0 / c1]) if c1 != 0.0 else np.zeros(0))
        pos = [float(r.real) for r in np.atleast_1d(roots)
               if abs(r.imag) <= 1e-12 * max(1.0, abs(r)) and r.real > 0]
        # the t-coordinate itself may cross zero first
        if dwbar[0] < 0:
            pos.append(-wbar[0] / dwbar[0])
        return min(pos) if pos else np.inf

    def gap_contribution(self, y_norm, b_slice):
        return float(b_slice @ y_norm)


class EntrBlock:
    """Pairs (u, t) constrained to the epigraph of u*ln(u).

    Barrier per pair: -ln(t - u ln u) - ln u with parameter 2.  The slice
    is interleaved (u_1, t_1, u_2, t_2, ...).  Not a cone, so boundary
    steps bisect on the true trajectory and the gap contribution is the
    closed-form support function of the shifted epigraph where finite.
    """

    kind = "ENTR"

    def __init__(self, pairs):
        if pairs < 1:
            raise InvalidParams("ENTR block needs at least one pair")
        self.pairs = pairs
        self.dim = 2 * pairs
        self.theta = 2.0 * pairs

    def interior_point(self):
        return np.tile([1.0, 1.0], self.pairs)

    def _split(self, w):
        return w[0::2], w[1::2]

    def quick_interior(self, w):
        u, t = self._split(w)
        return bool(np.all(u > 0.0) and np.all(t - u * np.log(u) > 0.0))

    def members(self, w, tol=1e-9):
        u, t = self._split(w)
        if np.any(u < -tol):
            return False
        us = np.maximum(u, 1e-300)
        return bool(np.all(t - us * np.log(us) >= -tol))

    def barrier(self, w):
        u, t = self._split(w)
        if not self.quick_interior(w):
            raise OutsideDomain("ENTR slice outside the epigraph interior")
        r = t - u * np.log(u)
        lu = np.log(u)
        value = -float(np.sum(np.log(r)) + np.sum(np.log(u)))
        grad = np.empty(self.dim)
        grad[0::2] = (lu + 1.0) / r - 1.0 / u
        grad[1::2] = -1.0 / r
        hess = np.zeros((self.dim, self.dim))
        iu = np.arange(0, self.dim, 2)
        it = iu + 1
        huu = (r / u + (lu + 1.0) ** 2) / r ** 2 + 1.0 / u ** 2
        hut = -(lu + 1.0) / r ** 2
        htt = 1.0 / r ** 2
        hess[iu, iu] = huu
        hess[iu, it] = hut
        hess[it, iu] = hut
        hess[it, it] = htt
        return value, grad, hess

    def grad(self, w):
        return self.barrier(w)[1]

    def max_step(self, wbar, dwbar, tau, dtau, t_max=None):
        cap = 8.0 if t_max is None else float(t_max)
        return _bisect_max_step(self.quick_interior, wbar, dwbar, tau, dtau,
                                alpha_cap=cap)

    def gap_contribution(self, y_norm, b_slice):
        # support of the product of epigraphs at v = -y_norm, plus the shift
        vu, vt = -y_norm[0::2], -y_norm[1::2]
        total = 0.0
        for a, c in zip(vu, vt):
            if c > 0.0 or (c == 0.0 and a > 0.0):
                raise UnboundedSupport("epigraph support is +inf at this dual slice")
            if c < 0.0:
                total += -c * np.exp(a / (-c) - 1.0)
        return float(total + y_norm @ b_slice)


class DetBlock:
    """Determinantal slice: H0 + sum w_i H_i must stay positive definite.

    Barrier -ln det with parameter equal to the matrix size.  Conic exactly
    when H0 = 0; otherwise boundary steps bisect and the gap contribution is
    reported as unbounded (proxy-gap mode).
    """

    kind = "DET"

    def __init__(self, matrices, interior=None):
        mats = [np.asarray(h, dtype=np.float64) for h in matrices]
        if len(mats) < 2:
            raise InvalidParams("DET block needs H0 plus at least one pencil matrix")
        size = mats[0].shape[0]
        for h in mats:
            if h.shape != (size, size) or not np.allclose(h, h.T, atol=1e-12):
                raise InvalidParams("DET matrices must be symmetric and equal-sized")
        if size > 500:
            raise InvalidParams("DET matrices capped at size 500")
        self.h0 = mats[0]
        self.hs = mats[1:]
        self.dim = len(self.hs)
        self.size = size
        self.theta = float(size)
        self.conic = bool(np.all(self.h0 == 0.0))
        if interior is not None:
            self._interior = np.asarray(interior, dtype=np.float64)
        elif self._is_pd(np.zeros(self.dim)):
            self._interior = np.zeros(self.dim)
        else:
            raise InvalidParams("DET block needs an interior point hint")
        if not self._is_pd(self._interior):
            raise InvalidParams("DET interior point is not positive definite")

    def _pencil(self, w):
        mat = self.h0.copy()
        for wi, hi in zip(w, self.hs):
            mat += wi * hi
        return mat

    def _is_pd(self, w):
        try:
            np.linalg.cholesky(self._pencil(w))
            return True
        except np.linalg.LinAlgError:
            return False

    def interior_point(self):
        return self._interior.copy()

    def quick_interior(self, w):
        return self._is_pd(w)

    def members(self, w, tol=1e-9):
        evals = np.linalg.eigvalsh(self._pencil(w))
        return bool(evals[0] >= -tol * max(1.0, abs(evals[-1])))

    def barrier(self, w):
        mat = self._pencil(w)
        try:
            ch = np.linalg.cholesky(mat)
        except np.linalg.LinAlgError:
            raise OutsideDomain("DET pencil is not positive definite")
        value = -2.0 * float(np.sum(np.log(np.diag(ch))))
        # S_i = L^-1 H_i L^-T; grad_i = -tr(S_i), hess_ij = <S_i, S_j>
        s = np.empty((self.dim, self.size, self.size))
        for i, hi in enumerate(self.hs):
            tmp = scipy.linalg.solve_triangular(ch, hi, lower=True)
            s[i] = scipy.linalg.solve_triangular(ch, tmp.T, lower=True).T
        grad = -np.trace(s, axis1=1, axis2=2)
        flat = s.reshape(self.dim, -1)
        hess = flat @ flat.T
        return value, grad, 0.5 * (hess + hess.T)

    def grad(self, w):
        return self.barrier(w)[1]

    def max_step(self, wbar, dwbar, tau, dtau, t_max=None):
        if not self.conic:
            cap = 8.0 if t_max is None else float(t_max)
            return _bisect_max_step(self.quick_interior, wbar, dwbar, tau, dtau,
                                    alpha_cap=cap)
        m0 = self._pencil(wbar)
        dm = self._pencil(dwbar)  # h0 = 0, so this is the pure direction pencil
        ch = np.linalg.cholesky(m0)
        inner = scipy.linalg.solve_triangular(ch, dm, lower=True)
        inner = scipy.linalg.solve_triangular(ch, inner.T, lower=True)
        lam_min = float(np.min(np.linalg.eigvalsh(0.5 * (inner + inner.T))))
        return np.inf if lam_min >= 0.0 else -1.0 / lam_min

    def gap_contribution(self, y_norm, b_slice):
        if not self.conic:
            raise UnboundedSupport("no closed-form support for a shifted DET slice")
        return float(b_slice @ y_norm)


class HbBlock:
    """Hyperbolicity-cone slice backed by a straight-line program barrier."""

    kind = "HB"

    def __init__(self, cone):
        self.cone = cone
        self.dim = cone.num_vars
        self.theta = float(cone.d)

    def interior_point(self):
        return self.cone.e.copy()

    def quick_interior(self, w):
        value, _ = _slp_eval(self.cone.program, w)
        return value > 0.0

    def members(self, w, tol=1e-9):
        # near-boundary spectra cluster at zero, which limits achievable
        # eigenvalue accuracy to the multiple-root radius for this degree;
        # when even that fails (high degree, clustered spectrum) fall back
        # to positivity, which the guarded line search keeps sound
        try:
            spec = _cone.eigenvalues(self.cone, w)
        except (NonRealRoots, _cone.IllConditioned):
            return self.quick_interior(w)
        scale = max(1.0, float(abs(spec.eigenvalues[0])))
        slack = max(tol * max(1.0, float(np.linalg.norm(w))),
                    _cone._cluster_tol(self.cone.d) * scale)
        return bool(spec.eigenvalues[-1] >= -slack)

    def barrier(self, w):
        return _cone.barrier(self.cone, w, check=False)

    def grad(self, w):
        value, tape = _slp_eval(self.cone.program, w)
        if not value > 0.0:
            raise OutsideDomain("HB slice has p(w) <= 0")
        return -_slp_gradient(self.cone.program, tape=tape) / value

    def max_step(self, wbar, dwbar, tau, dtau, t_max=None):
        return _cone.max_step_to_boundary(self.cone, wbar, dwbar, t_max=t_max)

    def gap_contribution(self, y_norm, b_slice):
        return float(b_slice @ y_norm)


class DirectSum:
    """Ordered blocks partitioning the embedding variable."""

    def __init__(self, blocks):
        if not blocks:
            raise InvalidParams("need at least one block")
        self.blocks = list(blocks)
        self.slices = []
        start = 0
        for blk in self.blocks:
            self.slices.append(slice(start, start + blk.dim))
            start += blk.dim
        self.dim = start
        self.theta = float(sum(blk.theta for blk in self.blocks))

    def interior_point(self):
        return np.concatenate([blk.interior_point() for blk in self.blocks])

    def quick_interior(self, w):
        return all(blk.quick_interior(w[sl]) for blk, sl in zip(self.blocks, self.slices))

    def members(self, w, tol=1e-9):
        return all(blk.members(w[sl], tol=tol) for blk, sl in zip(self.blocks, self.slices))

    def barrier(self, w):
        """Summed value, concatenated gradient, list of diagonal Hessian blocks."""
        value = 0.0
        grad = np.empty(self.dim)
        hess_blocks = []
        for idx, (blk, sl) in enumerate(zip(self.blocks, self.slices)):
            try:
                v, g, h = blk.barrier(w[sl])
            except OutsideDomain as exc:
                raise OutsideDomain(f"block {idx} ({blk.kind}): {exc}") from exc
            value += v
            grad[sl] = g
            hess_blocks.append(h)
        return value, grad, hess_blocks

    def grad(self, w):
        return np.concatenate([blk.grad(w[sl])
                               for blk, sl in zip(self.blocks, self.slices)])

    def max_step(self, wbar, dwbar, tau, dtau, t_max=None):
        return min(blk.max_step(wbar[sl], dwbar[sl], tau, dtau, t_max=t_max)
                   for blk, sl in zip(self.blocks, self.slices))

    def segment_interior(self, wbar, dwbar, tau, dtau, alpha, samples=6):
        """Positivity spot-check along the step for the polynomial blocks.

        The exact-arithmetic argument is that the first boundary crossing
        along a ray from an interior point is the first root of p, so p > 0
        on sampled interior points plus the step bound certifies the whole
        segment.  Only HB blocks need it; the other kinds have exact or
        bisected step bounds.
        """
        fracs = np.linspace(0.0, 1.0, samples + 2)[1:-1]
        for blk, sl in zip(self.blocks, self.slices):
            if blk.kind != "HB":
                continue
            pts = ((wbar[sl][None, :] + np.outer(alpha * fracs, dwbar[sl]))
                   / (tau + alpha * fracs * dtau)[:, None])
            vals = _slp_eval_many(blk.cone.program, pts)
            if not np.all(vals > 0.0):
                return False
        return True

    def gap_contribution(self, y_norm, b):
        return sum(blk.gap_contribution(y_norm[sl], b[sl])
                   for blk, sl in zip(self.blocks, self.slices))

    def hess_matvec(self, hess_blocks, v):
        out = np.empty(self.dim)
        for h, sl in zip(hess_blocks, self.slices):
            out[sl] = h @ v[sl]
        return out

    def assemble_normal_matrix(self, hess_blocks, a_mat):
        """A^T H A accumulated block by block (H is block diagonal)."""
        n = a_mat.shape[1]
        normal = np.zeros((n, n))
        for h, sl in zip(hess_blocks, self.slices):
            a_blk = a_mat[sl]
            normal += a_blk.T @ (h @ a_blk)
        return 0.5 * (normal + normal.T)
