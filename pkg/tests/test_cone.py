"""Hyperbolicity-cone geometry: restrictions, spectra, steps, barrier."""

from math import comb

import numpy as np
import pytest

import hyposolve as hs
from hyposolve.cone import _restrict_cheb
from hyposolve.errors import NonRealRoots, OutsideDomain

from helpers import builder_inventory, rel_err


def soc_cone():
    poly = hs.make_monomial(3, [((2, 0, 0), 1.0), ((0, 2, 0), -1.0),
                                ((0, 0, 2), -1.0)])
    return hs.HyperbolicCone(hs.mono_to_slp(poly), np.array([1.0, 0.0, 0.0]))


def interior_points(cone, count, seed):
    """Rejection-sample strictly interior points."""
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < count:
        x = rng.standard_normal(cone.num_vars)
        shift = hs.eigenvalues(cone, x).eigenvalues[-1]
        pts.append(x + (0.2 + max(0.0, -shift) * 1.2) * cone.e)
    return pts


class TestRestrictUnivariate:
    def test_esp_along_direction(self):
        n, k = 8, 3
        cone = hs.HyperbolicCone(hs.esp(n, k), np.ones(n))
        coeffs = hs.restrict_univariate(cone, np.ones(n), -np.ones(n))
        # e_k((1 - t) * ones) = C(n, k) (1 - t)^k
        want = [comb(n, k) * comb(k, j) * (-1.0) ** j for j in range(k + 1)]
        assert rel_err(coeffs, want) <= 1e-10

    def test_soc_restriction(self):
        coeffs = hs.restrict_univariate(soc_cone(), np.array([0.0, 1.0, 0.0]),
                                        np.array([1.0, 0.0, 0.0]))
        assert rel_err(coeffs, [-1.0, 0.0, 1.0]) <= 1e-12

    def test_refit_residual_small(self):
        cone = hs.HyperbolicCone(hs.vamos_like(5), np.ones(10))
        rng = np.random.default_rng(0)
        x = rng.standard_normal(10)
        d = rng.standard_normal(10)
        scale, cheb_coeffs = _restrict_cheb(cone, x, d)
        from numpy.polynomial import chebyshev
        u = rng.uniform(-1.0, 1.0, size=20)
        pts = x[None, :] + (scale * u)[:, None] * d[None, :]
        vals = hs.eval_many(cone.program, pts)
        resid = np.abs(chebyshev.chebval(u, cheb_coeffs) - vals)
        assert resid.max() <= 1e-8 * max(1.0, np.abs(vals).max())


class TestEigenvalues:
    def test_esp_at_direction(self):
        cone = hs.HyperbolicCone(hs.esp(7, 4), np.ones(7))
        lam = hs.eigenvalues(cone, np.ones(7)).eigenvalues
        assert len(lam) == 4
        np.testing.assert_allclose(lam, 1.0, atol=5e-3)

    def test_soc_points(self):
        cone = soc_cone()
        np.testing.assert_allclose(
            hs.eigenvalues(cone, np.array([1.0, 0.0, 0.0])).eigenvalues,
            [1.0, 1.0], atol=1e-7)
        np.testing.assert_allclose(
            hs.eigenvalues(cone, np.array([0.0, 1.0, 0.0])).eigenvalues,
            [1.0, -1.0], atol=1e-10)

    def test_shift_property(self):
        cone = hs.HyperbolicCone(hs.esp(9, 5), np.ones(9))
        rng = np.random.default_rng(1)
        for _ in range(10):
            x = rng.standard_normal(9)
            s = rng.standard_normal()
            lam = hs.eigenvalues(cone, x).eigenvalues
            lam_shift = hs.eigenvalues(cone, x + s * np.ones(9)).eigenvalues
            assert rel_err(lam_shift, lam + s) <= 1e-8

    def test_scaling_property(self):
        cone = hs.HyperbolicCone(hs.vamos(), np.ones(8))
        rng = np.random.default_rng(2)
        for _ in range(10):
            x = rng.standard_normal(8)
            s = rng.uniform(0.5, 3.0)
            lam = hs.eigenvalues(cone, x).eigenvalues
            lam_scaled = hs.eigenvalues(cone, s * x).eigenvalues
            assert rel_err(lam_scaled, s * lam) <= 1e-8

    def test_product_identity(self):
        # p(x) = p(e) * prod(lambda_i(x))
        cone = hs.HyperbolicCone(hs.esp(8, 4), np.ones(8))
        rng = np.random.default_rng(3)
        for _ in range(10):
            x = rng.standard_normal(8)
            lam = hs.eigenvalues(cone, x).eigenvalues
            want = cone.p_at_e * np.prod(lam)
            got = hs.eval(cone.program, x)[0]
            assert abs(got - want) <= 1e-8 * max(1.0, abs(want))

    def test_nonreal_roots_detected(self):
        poly = hs.make_monomial(2, [((2, 0), 1.0), ((0, 2), 1.0)])
        cone = hs.HyperbolicCone(hs.mono_to_slp(poly), np.array([1.0, 0.0]))
        with pytest.raises(NonRealRoots):
            hs.eigenvalues(cone, np.array([0.0, 1.0]))


class TestMembership:
    def test_orthant_inside_esp_cone(self):
        cone = hs.HyperbolicCone(hs.esp(8, 3), np.ones(8))
        rng = np.random.default_rng(4)
        for _ in range(10):
            assert hs.membership(cone, rng.uniform(0.0, 2.0, size=8), tol=1e-9)

    def test_soc_examples(self):
        cone = soc_cone()
        assert not hs.membership(cone, np.array([0.0, 1.0, 0.0]), tol=1e-9)
        assert hs.membership(cone, cone.e, tol=0.0)
        assert hs.eigenvalues(cone, cone.e).eigenvalues[-1] == pytest.approx(1.0, abs=1e-7)


class TestCheckHyperbolicity:
    def test_builders_pass(self):
        for name, prog, e in builder_inventory():
            cone = hs.HyperbolicCone(prog, e)
            report = hs.check_hyperbolicity(cone, trials=200, rng_seed=0)
            assert report.passed, (name, report.max_residue)

    def test_sum_of_squares_fails(self):
        poly = hs.make_monomial(2, [((2, 0), 1.0), ((0, 2), 1.0)])
        cone = hs.HyperbolicCone(hs.mono_to_slp(poly), np.array([1.0, 0.0]))
        report = hs.check_hyperbolicity(cone, trials=200, rng_seed=0)
        assert not report.passed
        assert report.max_residue > 0.1

    def test_spanning_tree_passes(self):
        from helpers import complete_graph
        poly = hs.spanning_tree_poly(complete_graph(4))
        cone = hs.HyperbolicCone(hs.mono_to_slp(poly), np.ones(6))
        assert hs.check_hyperbolicity(cone, trials=200, rng_seed=1).passed


class TestMaxStep:
    def test_soc_step(self):
        cone = soc_cone()
        t = hs.max_step_to_boundary(cone, np.array([1.0, 0.0, 0.0]),
                                    np.array([0.0, 1.0, 0.0]))
        assert t == pytest.approx(1.0, abs=1e-9)

    def test_recession_direction(self):
        cone = soc_cone()
        assert hs.max_step_to_boundary(cone, np.array([1.0, 0.2, 0.0]),
                                       cone.e) == np.inf

    def test_ray_to_origin(self):
        cone = hs.HyperbolicCone(hs.esp(6, 3), np.ones(6))
        z = np.array([1.0, 2.0, 0.5, 1.5, 1.0, 3.0])
        t = hs.max_step_to_boundary(cone, z, -z)
        assert t == pytest.approx(1.0, abs=1e-2)

    def test_boundary_consistency(self):
        cone = hs.HyperbolicCone(hs.esp(7, 3), np.ones(7))
        rng = np.random.default_rng(5)
        checked = 0
        while checked < 10:
            z = rng.uniform(0.3, 2.0, size=7)
            dz = rng.standard_normal(7)
            t = hs.max_step_to_boundary(cone, z, dz)
            if not np.isfinite(t):
                continue
            assert hs.membership(cone, z + 0.999 * t * dz, tol=1e-9)
            assert not hs.membership(cone, z + 1.001 * t * dz, tol=1e-12)
            checked += 1


class TestBarrier:
    def test_soc_values(self):
        value, grad, hess = hs.barrier(soc_cone(), np.array([1.0, 0.0, 0.0]))
        assert value == 0.0
        np.testing.assert_allclose(grad, [-2.0, 0.0, 0.0], atol=1e-14)
        np.testing.assert_allclose(hess, 2.0 * np.eye(3), atol=1e-13)

    def test_log_homogeneity(self):
        for name, prog, e in builder_inventory()[:4]:
            cone = hs.HyperbolicCone(prog, e)
            for x in interior_points(cone, 10, seed=6):
                _, grad, hess = hs.barrier(cone, x)
                assert abs(grad @ x + cone.d) <= 1e-9 * max(1.0, cone.d), name
                assert rel_err(hess @ x, -grad) <= 1e-8, name

    def test_hessian_psd(self):
        cone = hs.HyperbolicCone(hs.esp(8, 4), np.ones(8))
        for x in interior_points(cone, 10, seed=7):
            _, _, hess = hs.barrier(cone, x)
            evals = np.linalg.eigvalsh(hess)
            assert evals[0] >= -1e-8 * max(1.0, evals[-1])

    def test_outside_domain(self):
        cone = soc_cone()
        with pytest.raises(OutsideDomain):
            hs.barrier(cone, np.array([0.0, 1.0, 0.0]))
        # p > 0 but both eigenvalues negative: the opposite cone
        with pytest.raises(OutsideDomain):
            hs.barrier(cone, np.array([-1.0, 0.0, 0.0]))

    def test_invalid_cone_construction(self):
        poly = hs.make_monomial(2, [((2, 0), 1.0), ((0, 2), -1.0)])
        with pytest.raises(OutsideDomain):
            hs.HyperbolicCone(hs.mono_to_slp(poly), np.array([0.0, 1.0]))
