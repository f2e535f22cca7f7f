"""Python bindings for the tocsp process-algebra workbench."""

from ._tocsp import (
    BudgetExceeded,
    InstanceTooLarge,
    InvalidTerm,
    ParseError,
    Process,
    Session,
    distinguishing_formula,
    eq_recursion_free,
    hnf,
    initials_eq,
    minimize,
    reactive_bisim,
    run_cli,
    sat,
    strong_bisim,
    x_bisim,
)

__all__ = [
    "BudgetExceeded",
    "InstanceTooLarge",
    "InvalidTerm",
    "ParseError",
    "Process",
    "Session",
    "distinguishing_formula",
    "eq_recursion_free",
    "hnf",
    "initials_eq",
    "minimize",
    "reactive_bisim",
    "run_cli",
    "sat",
    "strong_bisim",
    "x_bisim",
]
