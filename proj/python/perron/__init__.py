"""Python front end for the perron asymptotic-integration library."""

import json as _json

from ._core import (
    ACCEPTANCE_COUNT,
    ConfigError,
    DivergenceError,
    Error,
    Expr,
    ParseError,
    PreconditionError,
    __version__,
    analyze,
    complete_bell,
    eval_bell,
    find_roots,
    nonlinear_remainder,
    run_check,
    solve,
    spectral_data,
)
from . import _core


def formula(config_text, kind="refined_remainder"):
    """Asymptotic formula report as a dict (same layout as the CLI JSON)."""
    return _json.loads(_core.formula_json(config_text, kind))


def example5():
    """Report of the worked fifth-order example."""
    return _json.loads(_core.example5_json())


__all__ = [
    "ACCEPTANCE_COUNT",
    "ConfigError",
    "DivergenceError",
    "Error",
    "Expr",
    "ParseError",
    "PreconditionError",
    "analyze",
    "complete_bell",
    "eval_bell",
    "example5",
    "find_roots",
    "formula",
    "nonlinear_remainder",
    "run_check",
    "solve",
    "spectral_data",
]
