"""Seeded benchmark-instance generators and the suite runner.

Randomness comes from ``numpy.random.default_rng`` (PCG64); normal variates
use its ``Generator.normal``.  Identical (family, params, seed) triples
regenerate byte-identical problem JSON.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

import numpy as np

from .blocks import DirectSum, EntrBlock, HbBlock, LpBlock, SocBlock
from .builders import esp, compose_esp_with_linear_forms, vamos_like
from .cone import HyperbolicCone
from .errors import InvalidParams
from .monomial import mono_to_slp
from .problem import DomainDrivenProblem
from .solver import STATUS_OPTIMAL, STATUS_UNBOUNDED, Settings, solve

FAMILIES = ("entropy-hb", "projection", "esp-slice", "unbounded-pair",
            "vamos-entropy")


@dataclass
class InstanceSpec:
    """One benchmark family instantiation, repeated over consecutive seeds."""

    family: str
    params: dict
    seed: int = 0
    reps: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParams(f"unknown family {self.family!r}")


@dataclass
class RunRecord:
    instance: str
    family: str
    params: dict
    seed: int
    status: str
    iterations: int
    wall_time: float
    objective: float
    gap: float
    primal_feas: float
    dual_feas: float
    expected_status: str = ""

    @property
    def status_ok(self):
        return not self.expected_status or self.status == self.expected_status


def _entropy_like(hb_block, a_hb, gamma, x_dim, name, expected):
    """min sum(t) s.t. A x + 1 in the HB cone, x >= gamma, (x_i, t_i) in epi."""
    n_rows = a_hb.shape[0]
    lp = LpBlock(x_dim)
    entr = EntrBlock(x_dim)
    m_emb = n_rows + x_dim + 2 * x_dim
    n_dec = 2 * x_dim
    a_mat = np.zeros((m_emb, n_dec))
    a_mat[:n_rows, :x_dim] = a_hb
    a_mat[n_rows:n_rows + x_dim, :x_dim] = np.eye(x_dim)
    for i in range(x_dim):  # pairs interleaved as (u_i, t_i) = (x_i, t_i)
        a_mat[n_rows + x_dim + 2 * i, i] = 1.0
        a_mat[n_rows + x_dim + 2 * i + 1, x_dim + i] = 1.0
    b = np.concatenate([np.ones(n_rows), -gamma * np.ones(x_dim),
                        np.zeros(2 * x_dim)])
    c = np.concatenate([np.zeros(x_dim), np.ones(x_dim)])
    return DomainDrivenProblem(
        c=c, A=a_mat, b=b, blocks=DirectSum([hb_block, lp, entr]),
        name=name, expected_status=expected).validate()


def gen_entropy_hb(n, k, gamma, seed, x_dim=10, entries="01"):
    """Entropy minimization over an elementary-symmetric cone slice.

    ``entries`` selects the A distribution: "01" (i.i.d. {0,1}; default),
    "pm1" (i.i.d. {-1,+1}) or "allneg" (all -1, which makes large-gamma
    instances provably infeasible: the affine image is a negative multiple
    of the all-ones direction for every feasible x).
    """
    if not 1 <= k <= n:
        raise InvalidParams(f"need 1 <= k <= n, got ({n}, {k})")
    rng = np.random.default_rng(seed)
    raw = rng.integers(0, 2, size=(n, x_dim)).astype(np.float64)
    if entries == "01":
        a_hb = raw
    elif entries == "pm1":
        a_hb = 2.0 * raw - 1.0
    elif entries == "allneg":
        a_hb = -np.ones((n, x_dim))
    else:
        raise InvalidParams(f"unknown entries mode {entries!r}")
    expected = ""
    if entries == "allneg" and gamma * x_dim > 1.0:
        expected = "Infeasible"
    elif entries == "01":
        expected = STATUS_OPTIMAL
    hb = HbBlock(HyperbolicCone(esp(n, k), np.ones(n)))
    return _entropy_like(hb, a_hb, gamma, x_dim,
                         name=f"entropy-hb-n{n}-k{k}-g{gamma}-{entries}-s{seed}",
                         expected=expected)


def gen_vamos_entropy(m, gamma, seed, x_dim=10):
    """Entropy minimization over a Vamos-like cone slice."""
    rng = np.random.default_rng(seed)
    a_hb = rng.integers(0, 2, size=(2 * m, x_dim)).astype(np.float64)
    hb = HbBlock(HyperbolicCone(vamos_like(m), np.ones(2 * m)))
    return _entropy_like(hb, a_hb, gamma, x_dim,
                         name=f"vamos-entropy-m{m}-g{gamma}-s{seed}",
                         expected=STATUS_OPTIMAL)


def _projection_poly(params, rng):
    kind = params.get("poly", "esp")
    if kind == "esp":
        n, k = int(params["n"]), int(params["k"])
        return esp(n, k), np.ones(n)
    if kind == "vamos-like":
        m = int(params["m"])
        return vamos_like(m), np.ones(2 * m)
    if kind == "compose":
        n, k, ell = int(params["n"]), int(params["k"]), int(params["ell"])
        L = rng.standard_normal((ell, n))
        e = np.ones(n)
        while np.any(np.abs(L @ e) < 1e-6):
            L = rng.standard_normal((ell, n))
        return compose_esp_with_linear_forms(k, L, e), e
    if kind == "soc":
        from .monomial import make_monomial
        poly = make_monomial(3, [((2, 0, 0), 1.0), ((0, 2, 0), -1.0),
                                 ((0, 0, 2), -1.0)])
        return mono_to_slp(poly), np.array([1.0, 0.0, 0.0])
    raise InvalidParams(f"unknown projection polynomial {kind!r}")


def gen_projection(params, seed):
    """min t s.t. |x - c|_2 <= t, x in the hyperbolicity cone.

    The target c is drawn N(0, 0.5^2) unless params provides "target".
    """
    rng = np.random.default_rng(seed)
    program, e = _projection_poly(params, rng)
    n = program.num_vars
    if "target" in params:
        target = np.asarray(params["target"], dtype=np.float64)
    else:
        target = rng.normal(0.0, 0.5, size=n)
    # decision variables (x, t); SOC slice is (t, x - target)
    soc = SocBlock(n + 1)
    hb = HbBlock(HyperbolicCone(program, e))
    a_mat = np.zeros((n + 1 + n, n + 1))
    a_mat[0, n] = 1.0
    a_mat[1:n + 1, :n] = np.eye(n)
    a_mat[n + 1:, :n] = np.eye(n)
    b = np.concatenate([[0.0], -target, np.zeros(n)])
    c = np.zeros(n + 1)
    c[n] = 1.0
    tag = "-".join(f"{k}{v}" for k, v in sorted(params.items()))
    return DomainDrivenProblem(
        c=c, A=a_mat, b=b, blocks=DirectSum([soc, hb]),
        name=f"projection-{tag}-s{seed}",
        expected_status=STATUS_OPTIMAL).validate()


def gen_esp_slice(n, k, seed):
    """max f(x) over the cone intersected with the hyperplane slice 1 + {1^T x = 0}.

    Substituting x = 1 + B w for a basis B of the hyperplane gives a
    Domain-Driven problem over w; the linear objective f is standard normal.
    """
    if not 1 <= k <= n:
        raise InvalidParams(f"need 1 <= k <= n, got ({n}, {k})")
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(n)
    basis = np.eye(n)[:, :n - 1] - np.ones((n, n - 1)) / n
    hb = HbBlock(HyperbolicCone(esp(n, k), np.ones(n)))
    return DomainDrivenProblem(
        c=-(basis.T @ f), A=basis, b=np.ones(n), blocks=DirectSum([hb]),
        objective_offset=-float(f.sum()),
        name=f"esp-slice-n{n}-k{k}-s{seed}",
        expected_status=STATUS_OPTIMAL).validate()


def gen_unbounded_pair(n, k1, k2, sign, seed=0):
    """min sum(x +/- y) over a direct sum of two elementary-symmetric cones.

    sign "+" has optimal value 0; sign "-" is unbounded along the all-ones
    recession direction of the second cone.
    """
    if not (1 <= k1 <= n and 1 <= k2 <= n):
        raise InvalidParams("need 1 <= k1, k2 <= n")
    if sign not in ("+", "-"):
        raise InvalidParams("sign must be '+' or '-'")
    hb1 = HbBlock(HyperbolicCone(esp(n, k1), np.ones(n)))
    hb2 = HbBlock(HyperbolicCone(esp(n, k2), np.ones(n)))
    sgn = 1.0 if sign == "+" else -1.0
    c = np.concatenate([np.ones(n), sgn * np.ones(n)])
    return DomainDrivenProblem(
        c=c, A=np.eye(2 * n), b=np.zeros(2 * n),
        blocks=DirectSum([hb1, hb2]),
        name=f"unbounded-pair-n{n}-k{k1}-{k2}-{sign}-s{seed}",
        expected_status=STATUS_OPTIMAL if sign == "+" else STATUS_UNBOUNDED,
    ).validate()


def generate(spec_family, params, seed):
    """Dispatch a family name to its generator."""
    if spec_family == "entropy-hb":
        return gen_entropy_hb(int(params["n"]), int(params["k"]),
                              float(params.get("gamma", 0.5)), seed,
                              x_dim=int(params.get("x_dim", 10)),
                              entries=str(params.get("entries", "01")))
    if spec_family == "vamos-entropy":
        return gen_vamos_entropy(int(params["m"]),
                                 float(params.get("gamma", 0.5)), seed,
                                 x_dim=int(params.get("x_dim", 10)))
    if spec_family == "projection":
        return gen_projection(params, seed)
    if spec_family == "esp-slice":
        return gen_esp_slice(int(params["n"]), int(params["k"]), seed)
    if spec_family == "unbounded-pair":
        return gen_unbounded_pair(int(params["n"]), int(params["k1"]),
                                  int(params["k2"]), str(params["sign"]), seed)
    raise InvalidParams(f"unknown family {spec_family!r}")


def run_suite(specs, settings=None):
    """Run every spec over its seeds; returns per-run records.

    Instances are validated and started from the canonical interior point;
    per-instance failures are recorded, not fatal.
    """
    settings = settings or Settings()
    records = []
    for spec in specs:
        for rep in range(spec.reps):
            seed = spec.seed + rep
            problem = generate(spec.family, spec.params, seed)
            result = solve(problem, settings)
            records.append(RunRecord(
                instance=problem.name, family=spec.family, params=spec.params,
                seed=seed, status=result.status, iterations=result.iterations,
                wall_time=result.wall_time, objective=result.objective,
                gap=result.gap, primal_feas=result.primal_feas,
                dual_feas=result.dual_feas,
                expected_status=problem.expected_status))
    return records


def aggregate(records):
    """Mean +/- std of iterations and wall time per (family, params) group."""
    groups = {}
    for rec in records:
        key = (rec.family, tuple(sorted((k, str(v)) for k, v in rec.params.items())))
        groups.setdefault(key, []).append(rec)
    rows = []
    for (family, params), recs in sorted(groups.items()):
        iters = [r.iterations for r in recs]
        times = [r.wall_time for r in recs]
        rows.append({
            "family": family,
            "params": dict((k, v) for k, v in params),
            "runs": len(recs),
            "statuses": ",".join(sorted({r.status for r in recs})),
            "status_ok": all(r.status_ok for r in recs),
            "iter_mean": statistics.mean(iters),
            "iter_std": statistics.stdev(iters) if len(iters) > 1 else 0.0,
            "time_mean": statistics.mean(times),
            "time_std": statistics.stdev(times) if len(times) > 1 else 0.0,
        })
    return rows


def records_to_csv(records, path):
    import csv
    fields = ["instance", "family", "seed", "status", "expected_status",
              "iterations", "wall_time", "objective", "gap", "primal_feas",
              "dual_feas"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for r in records:
            writer.writerow([getattr(r, f) for f in fields])


def aggregate_markdown(rows):
    lines = ["| family | params | runs | statuses | iterations | time (s) |",
             "|---|---|---|---|---|---|"]
    for row in rows:
        params = " ".join(f"{k}={v}" for k, v in sorted(row["params"].items()))
        lines.append(
            f"| {row['family']} | {params} | {row['runs']} | {row['statuses']} "
            f"| {row['iter_mean']:.1f}±{row['iter_std']:.1f} "
            f"| {row['time_mean']:.2f}±{row['time_std']:.2f} |")
    return "\n".join(lines) + "\n"
