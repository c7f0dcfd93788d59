"""Exact solver toolkit for sine-addition-type functional equations on groups and monoids."""

from .algebra import ZOO, abelianization, make_carrier, word_ball
from .classify import BranchResult, Independent, build_probe, classify, coefficients_in_span
from .equations import EQUATIONS, EquationContext, SolutionTuple, VerificationReport, build_context, verify
from .families import BranchParams, construct, fixture_suite, get_branch, list_branches
from .funcspace import Additive, Multiplicative, enumerate_characters, phi_solve
from .oracle import SweepConfig, solve_y_side, sweep
from .scalar import exact, parse_scalar, zeta

__version__ = "0.1.0"

__all__ = [
    "ZOO", "abelianization", "make_carrier", "word_ball",
    "BranchResult", "Independent", "build_probe", "classify", "coefficients_in_span",
    "EQUATIONS", "EquationContext", "SolutionTuple", "VerificationReport", "build_context", "verify",
    "BranchParams", "construct", "fixture_suite", "get_branch", "list_branches",
    "Additive", "Multiplicative", "enumerate_characters", "phi_solve",
    "SweepConfig", "solve_y_side", "sweep",
    "exact", "parse_scalar", "zeta",
]
