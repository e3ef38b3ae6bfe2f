"""Continuation of invariant-subspace bases along contours in the complex plane."""

from ._core import (
    KatoError,
    NumericalError,
    Problem,
    UsageError,
    continue_basis,
    convergence_study,
    make_problem,
    problem_ids,
    run_cli,
    scheme_info,
    schemes,
    steps_to_tolerance,
    verify,
)

__all__ = [
    "KatoError",
    "NumericalError",
    "Problem",
    "UsageError",
    "continue_basis",
    "convergence_study",
    "make_problem",
    "problem_ids",
    "run_cli",
    "scheme_info",
    "schemes",
    "steps_to_tolerance",
    "verify",
]
