"""Exact decision procedures for convex and higher-order convex orders
between signed measures on an interval."""

from .catalog import FamilySpec, comparability_matrix, eval_conditions, make_family, quadrature
from .measure import Interval, SignedMeasure, h_function, load_measure, mixture
from .numeric import Polynomial, parse_scalar, sqrt
from .oracle import ConeCombination, Kernel, Monomial, integrate, oracle_order, sample_convex
from .ordering import OrderVerdict, Status, Witness, build_h_ladder, decide_order, sign_changes

__all__ = [
    "ConeCombination",
    "FamilySpec",
    "Interval",
    "Kernel",
    "Monomial",
    "OrderVerdict",
    "Polynomial",
    "SignedMeasure",
    "Status",
    "Witness",
    "build_h_ladder",
    "comparability_matrix",
    "decide_order",
    "eval_conditions",
    "h_function",
    "integrate",
    "load_measure",
    "make_family",
    "mixture",
    "oracle_order",
    "parse_scalar",
    "quadrature",
    "sample_convex",
    "sign_changes",
    "sqrt",
]
