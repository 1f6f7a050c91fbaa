"""Hyperbolic programming over straight-line programs.

Polynomials enter as straight-line programs (or monomial lists, or
determinantal pencils), get differentiated by reverse-mode and batched
reverse-over-forward sweeps, and feed the log barrier of their
hyperbolicity cones into an infeasible-start primal-dual interior-point
solver in Domain-Driven form.
"""

from .autodiff import (EvalTape, eval, eval_many, gradient,
                       gradient_op_count, hessian, hessian_rowop_count)
from .backend import BACKEND
from .blocks import (DetBlock, DirectSum, EntrBlock, HbBlock, LpBlock,
                     SocBlock)
from .builders import (SimpleGraph, compose_esp_with_linear_forms,
                       directional_derivative, esp, product_of_linear_forms,
                       spanning_tree_poly, vamos, vamos_like)
from .cone import (HyperbolicCone, Spectrum, barrier, check_hyperbolicity,
                   eigenvalues, max_step_to_boundary, membership,
                   restrict_univariate)
from .monomial import (MonomialPoly, esp_monomial, eval_monomial,
                       gradient_monomial, hessian_monomial, make_monomial,
                       mono_to_slp)
from .problem import (DomainDrivenProblem, load_problem, problem_from_dict,
                      problem_to_dict, save_problem)
from .slp import ProgramBuilder, SlpNode, SlpProgram, degree, validate
from .solver import Settings, SolveResult, Solver, SolverIterate, solve

__version__ = "1.0.0"

__all__ = [
    "BACKEND", "DetBlock", "DirectSum", "DomainDrivenProblem", "EntrBlock",
    "EvalTape", "HbBlock", "HyperbolicCone", "LpBlock", "MonomialPoly",
    "ProgramBuilder", "Settings", "SimpleGraph", "SlpNode", "SlpProgram",
    "SocBlock", "SolveResult", "Solver", "SolverIterate", "Spectrum",
    "barrier", "check_hyperbolicity", "compose_esp_with_linear_forms",
    "degree", "directional_derivative", "eigenvalues", "esp", "esp_monomial",
    "eval", "eval_many", "eval_monomial", "gradient", "gradient_monomial",
    "gradient_op_count", "hessian", "hessian_monomial", "hessian_rowop_count",
    "load_problem", "make_monomial", "max_step_to_boundary", "membership",
    "mono_to_slp", "problem_from_dict", "problem_to_dict",
    "product_of_linear_forms", "restrict_univariate", "save_problem", "solve",
    "spanning_tree_poly", "validate", "vamos", "vamos_like",
]
