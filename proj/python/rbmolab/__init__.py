"""Finite metric measure spaces: doubling diagnostics, RBMO norms, John-Nirenberg checks."""

from ._rbmo import (
    Ball,
    Space,
    bmo_norm,
    canonical_ball_count,
    diagnostics,
    differentiation_check,
    fit_power_law_constant,
    make_function,
    maximal_function,
    solve_rbmo,
    verify_jn,
    verify_lambda,
    weak_type_check,
)

__all__ = [
    "Ball",
    "Space",
    "bmo_norm",
    "canonical_ball_count",
    "diagnostics",
    "differentiation_check",
    "fit_power_law_constant",
    "make_function",
    "maximal_function",
    "solve_rbmo",
    "verify_jn",
    "verify_lambda",
    "weak_type_check",
]
