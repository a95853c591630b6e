"""Locally accessible information bounds for bipartite ensembles."""

from ._core import (
    Ensemble,
    Error,
    InputError,
    bounds,
    build_ensemble,
    cli,
    concurrence,
    eof_from_concurrence,
    holevo_chi,
    negativity,
    ree,
    run_suite,
    simulate,
    suite_names,
)

__all__ = [
    "Ensemble",
    "Error",
    "InputError",
    "bounds",
    "build_ensemble",
    "cli",
    "concurrence",
    "eof_from_concurrence",
    "holevo_chi",
    "negativity",
    "ree",
    "run_suite",
    "simulate",
    "suite_names",
]
