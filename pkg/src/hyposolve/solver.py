"""Infeasible-start primal-dual path-following solver in Domain-Driven form.

The iterate is (xbar, tau, y) with xbar = tau * x and the embedded point
z = (A xbar + z0) / tau kept strictly inside the shifted domain.  With
interior start z0, y0 = F'(w0) and y_tau0 = -<y0, z0> - xi*theta, the central
path at parameter mu > 0 is

    (a)  z = (A xbar + z0) / tau interior,  tau > 0
    (b)  A^T y - A^T y0 + (tau - 1) c = 0
    (c)  tau y = mu F'(w),            w = z + b
    (d)  <y, z0> + tau y_tau0 + <A^T y0 + c, xbar> = -xi theta mu

The start (x = 0, tau = 1, y = y0) sits on the path at mu = 1.  Optimality
is approached as mu grows: tau increases with mu, the start perturbation
z0 / tau vanishes, and the duality gap behaves like theta*xi*mu / tau^2.
(On a one-variable box LP the path is solvable in closed form: tau scales
linearly with mu and x converges to the minimizer only as mu -> infinity.)
Predictor steps therefore target an amplified parameter mu / sigma with
centering sigma in (0, 1); corrector steps re-solve for the current mu.

Equation (b) is linear and every computed direction satisfies
A^T dy + dtau c = 0, so the dual linear residual stays at roundoff level.
Equation (d) is linear as well and defines mu at any iterate; corrector
directions (target mu) leave it unchanged while predictor directions
(target mu_t) move mu by exactly alpha*(mu_t - mu).

A Newton step toward target mu_t eliminates dy through the Hessian row,
solves the positive definite normal system A^T F''(w) A twice (for the
constant and the dtau-proportional parts of dxbar), and closes with the
scalar equation (d) for dtau.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (HyposolveError, NonFiniteDirection, NonPositiveMu,
                     SingularNormalMatrix, StepTooSmall, UnboundedSupport)

STATUS_OPTIMAL = "Optimal"
STATUS_INFEASIBLE = "Infeasible"
STATUS_UNBOUNDED = "Unbounded"
STATUS_ITERATION_LIMIT = "IterationLimit"
STATUS_NUMERICAL_FAILURE = "NumericalFailure"

EXIT_CODES = {STATUS_OPTIMAL: 0, STATUS_INFEASIBLE: 2, STATUS_UNBOUNDED: 3,
              STATUS_ITERATION_LIMIT: 4, STATUS_NUMERICAL_FAILURE: 5}


@dataclass
class Settings:
    """Solver parameters; defaults follow the artifact conventions."""

    tol: float = 1e-8
    xi: float = 2.0            # homogenization constant, > 1
    max_iter: int = 200
    eta: float = 0.99          # fraction-to-boundary
    sigma_min: float = 0.1
    sigma_max: float = 0.5
    sigma_init: float = 0.4
    beta: float = 0.25         # centrality threshold on the Newton decrement
    max_correctors: int = 5
    max_backtracks: int = 40
    step_min: float = 1e-12
    tau_infeasible: float = 1e-8
    mu_infeasible: float = 1e-6
    mu_max: float = 1e10

    def __post_init__(self):
        if self.xi <= 1.0:
            raise ValueError("xi must be > 1")
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must be in (0, 1)")
        if not 0.0 < self.sigma_min <= self.sigma_max < 1.0:
            raise ValueError("sigma range must satisfy 0 < min <= max < 1")


@dataclass
class SolverIterate:
    """Solver state; x is materialized as xbar / tau only at reporting time."""

    xbar: np.ndarray
    tau: float
    y: np.ndarray

    @property
    def x(self):
        return self.xbar / self.tau


@dataclass
class Direction:
    dxbar: np.ndarray
    dtau: float
    dy: np.ndarray
    prox: float
    mu_target: float

    def dx(self, iterate):
        return (self.dxbar - self.dtau * iterate.xbar / iterate.tau) / iterate.tau


@dataclass
class SolveResult:
    status: str
    x: np.ndarray
    y: np.ndarray
    objective: float
    gap: float
    primal_feas: float
    dual_feas: float
    iterations: int
    wall_time: float
    message: str = ""
    trajectory: list = field(default_factory=list)

    @property
    def exit_code(self):
        return EXIT_CODES[self.status]

    def to_dict(self):
        return {"status": self.status,
                "x": self.x.tolist(), "y": self.y.tolist(),
                "objective": self.objective, "gap": self.gap,
                "primal_feas": self.primal_feas, "dual_feas": self.dual_feas,
                "iterations": self.iterations, "wall_time": self.wall_time,
                "message": self.message}

    def write_log(self, path):
        if not self.trajectory:
            return
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(self.trajectory[0]))
            writer.writeheader()
            writer.writerows(self.trajectory)


class Solver:
    """One problem plus settings; exposes the path-following primitives."""

    def __init__(self, problem, settings=None):
        problem.validate()
        self.problem = problem
        self.settings = settings or Settings()
        self.blocks = problem.blocks
        self.A = problem.A
        self.c = problem.c
        self.b = problem.b
        self.theta = self.blocks.theta
        self.w0 = self.blocks.interior_point()
        self.z0 = self.w0 - self.b
        self.y0 = self.blocks.grad(self.w0)
        self.ytau0 = -float(self.y0 @ self.z0) - self.settings.xi * self.theta
        self.q = self.A.T @ self.y0 + self.c
        self.norm_b = float(np.linalg.norm(self.b))
        self.norm_c = float(np.linalg.norm(self.c))
        self.norm_z0 = float(np.linalg.norm(self.z0))
        # economy QR of A, used to re-project dy onto A^T dy + dtau c = 0
        # (keeps the linear dual residual at roundoff as tau grows large)
        self._qr_a = scipy.linalg.qr(self.A, mode="economic")

    # --- basic state maps -------------------------------------------------

    def initialize(self):
        """Start at x = 0, tau = 1, y = y0; mu is exactly 1 there."""
        return SolverIterate(xbar=np.zeros(self.problem.num_vars), tau=1.0,
                             y=self.y0.copy())

    def w_of(self, iterate):
        return (self.A @ iterate.xbar + self.z0) / iterate.tau + self.b

    def mu_of(self, iterate):
        """Path parameter from the linear equation (d) at the iterate."""
        val = -(float(iterate.y @ self.z0) + iterate.tau * self.ytau0
                + float(self.q @ iterate.xbar))
        mu = val / (self.settings.xi * self.theta)
        if not np.isfinite(mu) or mu <= 0.0:
            raise NonPositiveMu(f"mu = {mu} at tau = {iterate.tau}")
        return mu

    def merit(self, iterate, mu_t, w=None):
        """Norm of the centrality residual tau*y - mu_t*F'(w)."""
        if w is None:
            w = self.w_of(iterate)
        g = self.blocks.grad(w)
        return float(np.linalg.norm(iterate.tau * iterate.y - mu_t * g))

    # --- Newton directions --------------------------------------------------

    def _solve_normal(self, cho, normal, rhs):
        sol = scipy.linalg.cho_solve(cho, rhs)
        resid = rhs - normal @ sol
        if np.linalg.norm(resid) > 1e-10 * max(1.0, np.linalg.norm(rhs)):
            for _ in range(2):  # iterative refinement
                sol = sol + scipy.linalg.cho_solve(cho, rhs - normal @ sol)
        return sol

    def newton_direction(self, iterate, mu_t):
        """Search direction toward the central point with parameter mu_t."""
        tau, y, xbar = iterate.tau, iterate.y, iterate.xbar
        w = self.w_of(iterate)
        _, g, hess_blocks = self.blocks.barrier(w)
        z_dom = w - self.b

        r2 = mu_t * g - tau * y
        r3 = -(float(y @ self.z0) + tau * self.ytau0 + float(self.q @ xbar)
               + self.settings.xi * self.theta * mu_t)

        normal = self.blocks.assemble_normal_matrix(hess_blocks, self.A)
        try:
            cho = scipy.linalg.cho_factor(normal)
        except scipy.linalg.LinAlgError as exc:
            raise SingularNormalMatrix(str(exc)) from exc

        hz = self.blocks.hess_matvec(hess_blocks, z_dom)
        scale = mu_t / tau
        dxbar0 = (tau / mu_t) * self._solve_normal(cho, normal, -(self.A.T @ r2))
        dxbar1 = (tau / mu_t) * self._solve_normal(
            cho, normal, self.A.T @ y - tau * self.c + scale * (self.A.T @ hz))

        h_adx0 = self.blocks.hess_matvec(hess_blocks, self.A @ dxbar0)
        h_adx1 = self.blocks.hess_matvec(hess_blocks, self.A @ dxbar1)
        dy0 = (r2 + scale * h_adx0) / tau
        dy1 = (-y - scale * hz + scale * h_adx1) / tau

        den = float(dy1 @ self.z0) + self.ytau0 + float(self.q @ dxbar1)
        num = r3 - float(dy0 @ self.z0) - float(self.q @ dxbar0)
        if abs(den) < 1e-300:
            raise NonFiniteDirection("scalar closing equation is degenerate")
        dtau = num / den
        dxbar = dxbar0 + dtau * dxbar1
        dy = dy0 + dtau * dy1

        # the elimination guarantees A^T dy + dtau c = 0 analytically; remove
        # the numerical leftover so equation (b) never drifts
        q_fac, r_fac = self._qr_a
        defect = self.A.T @ dy + dtau * self.c
        dy = dy - q_fac @ scipy.linalg.solve_triangular(r_fac, defect, trans="T")

        if not (np.all(np.isfinite(dxbar)) and np.all(np.isfinite(dy))
                and np.isfinite(dtau)):
            raise NonFiniteDirection("non-finite Newton direction")

        dz = (self.A @ dxbar - dtau * z_dom) / tau
        prox = float(np.sqrt(max(dz @ self.blocks.hess_matvec(hess_blocks, dz), 0.0)))
        return Direction(dxbar=dxbar, dtau=dtau, dy=dy, prox=prox, mu_target=mu_t)

    def corrector_direction(self, iterate):
        return self.newton_direction(iterate, self.mu_of(iterate))

    def predictor_direction(self, iterate, sigma):
        return self.newton_direction(iterate, sigma * self.mu_of(iterate))

    # --- line search and stepping ----------------------------------------------

    def _apply(self, iterate, direction, alpha):
        return SolverIterate(xbar=iterate.xbar + alpha * direction.dxbar,
                             tau=iterate.tau + alpha * direction.dtau,
                             y=iterate.y + alpha * direction.dy)

    def line_search(self, iterate, direction, mode="corrector", mu_t=None):
        """Fraction-to-boundary step with backtracking.

        Starts at min(1, eta * boundary step in z, eta * step keeping
        tau > 0) and halves until the trial point is strictly interior and,
        in corrector mode, the centrality merit does not increase.
        """
        st = self.settings
        # tau-normalized homogenized ray: same step bounds as (wbar, dwbar)
        # with tau' = 1, but evaluations stay at the scale of w itself
        tau = iterate.tau
        wbar = (self.A @ iterate.xbar + self.z0) / tau + self.b
        dwbar = (self.A @ direction.dxbar + direction.dtau * self.b) / tau
        dtau_n = direction.dtau / tau
        t_z = self.blocks.max_step(wbar, dwbar, 1.0, dtau_n, t_max=1.25)
        t_tau = np.inf if direction.dtau >= 0 else -tau / direction.dtau
        alpha = min(1.0, st.eta * t_z, st.eta * t_tau)

        if mu_t is None:
            mu_t = direction.mu_target
        merit0 = self.merit(iterate, mu_t) if mode == "corrector" else None

        for _ in range(st.max_backtracks):
            if alpha < st.step_min:
                break
            trial = self._apply(iterate, direction, alpha)
            if trial.tau <= 0.0:
                alpha *= 0.5
                continue
            w_trial = self.w_of(trial)
            if not self.blocks.quick_interior(w_trial):
                alpha *= 0.5
                continue
            if not self.blocks.segment_interior(wbar, dwbar, 1.0, dtau_n, alpha):
                alpha *= 0.5
                continue
            if mode == "corrector":
                m_trial = self.merit(trial, mu_t, w=w_trial)
                if not np.isfinite(m_trial) or m_trial > merit0 * (1.0 + 1e-9) + 1e-300:
                    alpha *= 0.5
                    continue
            else:
                try:
                    mu_trial = self.mu_of(trial)
                except NonPositiveMu:
                    alpha *= 0.5
                    continue
                if not np.isfinite(self.merit(trial, mu_trial, w=w_trial)):
                    alpha *= 0.5
                    continue
            return alpha
        raise StepTooSmall(f"line search fell below {st.step_min}")

    # --- residuals and status ------------------------------------------------------

    def residuals(self, iterate):
        """(primal_feas, dual_feas, gap) with the artifact's normalizations.

        primal: norm of the vanishing start perturbation z0 / tau;
        dual: residual of the linear equation (b), held at roundoff;
        gap: <c, x> plus the blocks' support contributions at -y/tau, with
        the proxy xi*theta*mu/tau^2 when a block's support is unbounded.
        """
        tau = iterate.tau
        primal = self.norm_z0 / tau / (1.0 + self.norm_b)
        dual_vec = self.A.T @ iterate.y - self.A.T @ self.y0 + (tau - 1.0) * self.c
        dual = float(np.linalg.norm(dual_vec)) / tau / (1.0 + self.norm_c)
        obj = float(self.c @ iterate.xbar) / tau
        y_norm = -iterate.y / tau
        try:
            gap_raw = obj + self.blocks.gap_contribution(y_norm, self.b)
        except UnboundedSupport:
            gap_raw = self.settings.xi * self.theta * self.mu_of(iterate) / tau ** 2
        gap = abs(gap_raw) / (1.0 + abs(obj))
        return primal, dual, gap

    def _status_check(self, iterate, residual_triplet, mu):
        primal, dual, gap = residual_triplet
        st = self.settings
        if max(primal, dual, gap) <= st.tol:
            return STATUS_OPTIMAL
        obj = float(self.c @ iterate.xbar) / iterate.tau
        if obj <= -1.0 / st.tol and primal <= st.tol:
            return STATUS_UNBOUNDED
        # with the objective or the domain blocking it, tau stays bounded and
        # the start perturbation z0/tau cannot vanish no matter how large mu
        # grows; a diverging objective then certifies unboundedness, a
        # bounded one infeasibility
        if mu >= st.mu_max and primal > st.tol:
            return STATUS_UNBOUNDED if obj <= -1.0 / st.tol else STATUS_INFEASIBLE
        if (iterate.tau < st.tau_infeasible and mu > st.mu_infeasible
                and dual <= 1e-6):
            return STATUS_INFEASIBLE
        return None

    # --- main loop ----------------------------------------------------------------

    def solve(self):
        st = self.settings
        start = time.perf_counter()
        iterate = self.initialize()
        sigma = st.sigma_init
        trajectory = []

        def result(status, iterate, res, iters, message=""):
            primal, dual, gap = res
            return SolveResult(
                status=status, x=iterate.x, y=iterate.y.copy(),
                objective=float(self.c @ iterate.x) + self.problem.objective_offset,
                gap=gap, primal_feas=primal, dual_feas=dual, iterations=iters,
                wall_time=time.perf_counter() - start, message=message,
                trajectory=trajectory)

        res = (np.inf, np.inf, np.inf)
        try:
            for it in range(st.max_iter):
                mu = self.mu_of(iterate)
                res = self.residuals(iterate)
                status = self._status_check(iterate, res, mu)
                if status is not None:
                    return result(status, iterate, res, it)

                # predictor: amplify the path parameter to mu / sigma
                pdir = self.newton_direction(iterate, mu / sigma)
                alpha_p = self.line_search(iterate, pdir, mode="predictor")
                iterate = self._apply(iterate, pdir, alpha_p)
                if not self.blocks.members(self.w_of(iterate), tol=1e-7):
                    return result(STATUS_NUMERICAL_FAILURE, iterate, res, it,
                                  "accepted predictor point left the domain")

                # correctors: recenter at the (unchanged) mu of the new point;
                # once the start perturbation is nearly gone the reported gap
                # is dominated by off-path error, so recenter much tighter
                mu_c = self.mu_of(iterate)
                beta_eff = st.beta if res[0] > 100.0 * st.tol else 1e-4
                prox = np.inf
                n_corr = 0
                alpha_c = 0.0
                for _ in range(st.max_correctors):
                    cdir = self.newton_direction(iterate, mu_c)
                    prox = cdir.prox
                    if prox <= beta_eff:
                        break
                    alpha_c = self.line_search(iterate, cdir, mode="corrector",
                                               mu_t=mu_c)
                    iterate = self._apply(iterate, cdir, alpha_c)
                    n_corr += 1
                    if not self.blocks.members(self.w_of(iterate), tol=1e-7):
                        return result(STATUS_NUMERICAL_FAILURE, iterate, res, it,
                                      "accepted corrector point left the domain")

                trajectory.append({
                    "iter": it, "mu": mu_c, "tau": iterate.tau,
                    "primal_feas": res[0], "dual_feas": res[1], "gap": res[2],
                    "sigma": sigma, "step_pred": alpha_p,
                    "correctors": n_corr, "step_corr": alpha_c, "prox": prox})

                # adapt sigma from phase success
                if alpha_p > 0.9 and n_corr <= 2:
                    sigma = max(st.sigma_min, sigma * 0.6)
                elif alpha_p < 0.3 or n_corr >= st.max_correctors:
                    sigma = min(st.sigma_max, sigma * 1.5)

            mu = self.mu_of(iterate)
            res = self.residuals(iterate)
            status = self._status_check(iterate, res, mu) or STATUS_ITERATION_LIMIT
            return result(status, iterate, res, st.max_iter)
        except HyposolveError as exc:
            # the barrier degenerates once the iterate races off along a
            # recession direction; classify from the trajectory before
            # reporting a plain numerical failure
            message = f"{type(exc).__name__}: {exc}"
            primal, obj = np.inf, 0.0
            try:
                primal = self.norm_z0 / iterate.tau / (1.0 + self.norm_b)
                obj = float(self.c @ iterate.xbar) / iterate.tau
                mu = self.mu_of(iterate)
            except HyposolveError:
                mu = 0.0
            if primal > st.tol and obj <= -1.0 / st.tol:
                return result(STATUS_UNBOUNDED, iterate, res, len(trajectory),
                              message)
            if primal > st.tol and mu >= 1e8:
                return result(STATUS_INFEASIBLE, iterate, res, len(trajectory),
                              message)
            return result(STATUS_NUMERICAL_FAILURE, iterate, res,
                          len(trajectory), message)


def solve(problem, settings=None):
    """Solve a Domain-Driven problem; convenience wrapper around Solver."""
    return Solver(problem, settings).solve()
