"""Straight-line program core: validation, sweeps, oracle, serialization."""

import numpy as np
import pytest

import hyposolve as hs
from hyposolve.autodiff import gradient_op_count, hessian_rowop_count
from hyposolve.backend import get_kernels
from hyposolve.errors import (MalformedInput, MalformedSlp,
                              NonFiniteIntermediate)

from helpers import oracle_pairs, rel_err


def quadratic_cone_program():
    """The 5-node program for x1^2 - x2^2 - x3^2."""
    b = hs.ProgramBuilder(3)
    n4 = b.mul(1, 1)
    n5 = b.mul(2, 2, coef=-1.0)
    n6 = b.mul(3, 3, coef=-1.0)
    n7 = b.add(n4, n5)
    return b.finish(b.add(n6, n7))


class TestValidate:
    def test_quadratic_program(self):
        rep = hs.validate(quadratic_cone_program())
        assert rep.node_count == 5
        assert rep.output_degree == 2
        assert rep.homogeneous

    def test_identity_program(self):
        prog = hs.SlpProgram(num_vars=1, nodes=[], output=1)
        rep = hs.validate(prog)
        assert rep.output_degree == 1 and rep.homogeneous

    def test_dangling_reference(self):
        prog = hs.SlpProgram(
            num_vars=2,
            nodes=[hs.SlpNode(id=3, op="add", inputs=(1, 10), coef=1.0)],
            output=3)
        with pytest.raises(MalformedSlp):
            hs.validate(prog)

    def test_id_gap_rejected(self):
        prog = hs.SlpProgram(
            num_vars=2,
            nodes=[hs.SlpNode(id=5, op="add", inputs=(1, 2), coef=1.0)],
            output=5)
        with pytest.raises(MalformedSlp):
            hs.validate(prog)

    def test_pow_exponent_must_be_positive_integer(self):
        b = hs.ProgramBuilder(1)
        with pytest.raises(MalformedSlp):
            b.pow(1, 0)
        with pytest.raises(MalformedSlp):
            b.pow(1, 1.5)

    def test_nonfinite_coef(self):
        prog = hs.SlpProgram(
            num_vars=1,
            nodes=[hs.SlpNode(id=2, op="mul", inputs=(1, 1), coef=np.inf)],
            output=2)
        with pytest.raises(MalformedSlp):
            hs.validate(prog)

    def test_heterogeneous_flagged(self):
        b = hs.ProgramBuilder(1)
        sq = b.pow(1, 2)
        prog = b.finish(b.add(sq, 1))
        deg, homog = hs.degree(prog)
        assert deg == 2 and not homog


class TestEval:
    def test_quadratic_values(self):
        prog = quadratic_cone_program()
        assert hs.eval(prog, np.array([1.0, 0.0, 0.0]))[0] == 1.0
        assert hs.eval(prog, np.array([1.0, 2.0, 3.0]))[0] == -12.0

    def test_esp_value(self):
        assert hs.eval(hs.esp(3, 2), np.ones(3))[0] == 3.0

    def test_eval_many_matches_eval(self):
        prog = hs.esp(6, 3)
        rng = np.random.default_rng(0)
        X = rng.standard_normal((40, 6))
        vals = hs.eval_many(prog, X)
        singles = [hs.eval(prog, x)[0] for x in X]
        np.testing.assert_allclose(vals, singles, rtol=1e-13)

    def test_overflow_raises(self):
        b = hs.ProgramBuilder(1)
        acc = b.pow(1, 50)
        for _ in range(8):
            acc = b.mul(acc, acc)
        prog = b.finish(acc)
        with np.errstate(over="ignore"), pytest.raises(NonFiniteIntermediate):
            hs.eval(prog, np.array([1e30]))


class TestDerivatives:
    def test_quadratic_gradient(self):
        g = hs.gradient(quadratic_cone_program(), np.array([1.0, 2.0, 3.0]))
        np.testing.assert_allclose(g, [2.0, -4.0, -6.0], rtol=1e-14)

    def test_esp_gradient(self):
        g = hs.gradient(hs.esp(3, 2), np.array([1.0, 2.0, 3.0]))
        np.testing.assert_allclose(g, [5.0, 4.0, 3.0], rtol=1e-14)

    def test_quadratic_hessian_constant(self):
        rng = np.random.default_rng(1)
        want = np.diag([2.0, -2.0, -2.0])
        for _ in range(5):
            h = hs.hessian(quadratic_cone_program(), rng.standard_normal(3))
            np.testing.assert_allclose(h, want, atol=1e-13)

    def test_esp32_hessian(self):
        h = hs.hessian(hs.esp(3, 2), np.array([0.3, -1.2, 2.0]))
        np.testing.assert_allclose(h, np.ones((3, 3)) - np.eye(3), atol=1e-14)

    def test_hessian_bitwise_symmetric(self):
        rng = np.random.default_rng(2)
        for _, prog, _ in oracle_pairs(max_vars=10)[:4]:
            h = hs.hessian(prog, rng.standard_normal(prog.num_vars))
            assert np.array_equal(h, h.T)

    def test_tape_reuse(self):
        prog = hs.esp(7, 3)
        x = np.random.default_rng(3).standard_normal(7)
        _, tape = hs.eval(prog, x)
        np.testing.assert_array_equal(hs.gradient(prog, tape=tape),
                                      hs.gradient(prog, x))
        np.testing.assert_array_equal(hs.hessian(prog, tape=tape),
                                      hs.hessian(prog, x))

    def test_finite_differences(self):
        rng = np.random.default_rng(4)
        prog = hs.vamos_like(4)
        x = rng.standard_normal(8)
        g = hs.gradient(prog, x)
        h = 1e-6
        fd = np.array([(hs.eval(prog, x + h * e)[0] - hs.eval(prog, x - h * e)[0])
                       / (2 * h) for e in np.eye(8)])
        assert rel_err(g, fd) <= 1e-6

    def test_euler_identity(self):
        rng = np.random.default_rng(5)
        for _, prog, _ in oracle_pairs(max_vars=12)[:6]:
            deg, homog = hs.degree(prog)
            assert homog
            x = rng.standard_normal(prog.num_vars)
            val, tape = hs.eval(prog, x)
            g = hs.gradient(prog, tape=tape)
            assert abs(g @ x - deg * val) <= 1e-9 * max(1.0, abs(val))


class TestMonomialOracle:
    def test_eval_examples(self):
        poly = hs.make_monomial(3, [((2, 0, 0), 1.0), ((0, 2, 0), -1.0),
                                    ((0, 0, 2), -1.0)])
        x = np.array([1.0, 2.0, 3.0])
        assert hs.eval_monomial(poly, x) == -12.0
        np.testing.assert_allclose(hs.gradient_monomial(poly, x),
                                   [2.0, -4.0, -6.0])
        assert hs.eval_monomial(hs.esp_monomial(4, 2), np.ones(4)) == 6.0

    def test_oracle_agreement(self):
        rng = np.random.default_rng(6)
        for name, prog, poly in oracle_pairs(max_vars=12):
            X = rng.standard_normal((20, prog.num_vars))
            want = [hs.eval_monomial(poly, x) for x in X]
            got = hs.eval_many(prog, X)
            assert rel_err(got, want) <= 1e-10, name

    def test_negative_exponent_rejected(self):
        with pytest.raises(MalformedInput):
            hs.make_monomial(2, [((1, -1), 1.0)])


class TestMonoToSlp:
    def test_single_term(self):
        poly = hs.make_monomial(2, [((1, 1), 1.0)])
        prog = hs.mono_to_slp(poly)
        assert sum(1 for n in prog.nodes if n.op == "mul") == 1
        assert hs.eval(prog, np.array([3.0, 4.0]))[0] == 12.0

    def test_quadratic_matches_program(self):
        poly = hs.make_monomial(3, [((2, 0, 0), 1.0), ((0, 2, 0), -1.0),
                                    ((0, 0, 2), -1.0)])
        prog = hs.mono_to_slp(poly)
        rng = np.random.default_rng(7)
        X = rng.standard_normal((100, 3))
        want = hs.eval_many(quadratic_cone_program(), X)
        assert rel_err(hs.eval_many(prog, X), want) <= 1e-12

    def test_esp_via_monomials(self):
        prog = hs.mono_to_slp(hs.esp_monomial(10, 3))
        rng = np.random.default_rng(8)
        X = rng.standard_normal((50, 10))
        assert rel_err(hs.eval_many(prog, X), hs.eval_many(hs.esp(10, 3), X)) <= 1e-12

    def test_empty_rejected(self):
        with pytest.raises(MalformedInput):
            hs.mono_to_slp(hs.make_monomial(2, []))


class TestSerialization:
    def test_round_trip(self):
        prog = quadratic_cone_program()
        clone = hs.SlpProgram.from_json(prog.to_json())
        assert clone.to_dict() == prog.to_dict()
        x = np.array([0.5, -1.0, 2.0])
        assert hs.eval(clone, x)[0] == hs.eval(prog, x)[0]

    def test_json_fields(self):
        data = quadratic_cone_program().to_dict()
        assert set(data) == {"num_vars", "nodes", "output"}
        assert set(data["nodes"][0]) == {"id", "op", "in", "coef"}


class TestOpCounts:
    def test_gradient_ops_linear_in_n(self):
        for _, prog, _ in oracle_pairs():
            assert gradient_op_count(prog) <= 6 * prog.node_count

    def test_hessian_rowops_linear_in_n(self):
        for _, prog, _ in oracle_pairs():
            assert hessian_rowop_count(prog) <= 6 * prog.node_count


class TestBackendParity:
    def test_compiled_matches_pure(self):
        try:
            compiled = get_kernels("compiled")
        except ImportError:
            pytest.skip("compiled kernels not built")
        pure = get_kernels("pure")
        rng = np.random.default_rng(9)
        for _, prog, _ in oracle_pairs(max_vars=10)[:5]:
            ops, ia, ib, coef = prog.arrays
            m = prog.num_vars
            x = rng.standard_normal(m)
            t1 = compiled.forward(ops, ia, ib, coef, m, x)
            t2 = pure.forward(ops, ia, ib, coef, m, x)
            np.testing.assert_allclose(t1, t2, rtol=1e-13, atol=1e-13)
            g1 = compiled.reverse_grad(ops, ia, ib, coef, m, t1, prog.output)
            g2 = pure.reverse_grad(ops, ia, ib, coef, m, t2, prog.output)
            np.testing.assert_allclose(g1, g2, rtol=1e-12, atol=1e-12)
            h1, d1 = compiled.hessian_sweep(ops, ia, ib, coef, m, t1, prog.output)
            h2, d2 = pure.hessian_sweep(ops, ia, ib, coef, m, t2, prog.output)
            np.testing.assert_allclose(h1, h2, rtol=1e-12, atol=1e-12)
            np.testing.assert_allclose(d1, d2, rtol=1e-12, atol=1e-12)
