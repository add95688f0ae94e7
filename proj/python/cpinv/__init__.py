"""Crossed-product invariants of sphere-product diffeomorphisms."""

import json

from ._cpinv import (
    DegreeEstimationError,
    InvariantViolation,
    __version__,
    birkhoff_averages,
    cokernel,
    compare,
    estimate_degree,
    invariants,
    orbit_coverage,
    smith_normal_form,
)
from ._cpinv import run as _run


def run(*args):
    """Run a CLI subcommand. Returns (exit_code, report dict or None, text, error)."""
    code, report, text, error = _run([str(a) for a in args])
    return code, (json.loads(report) if report else None), text, error


__all__ = [
    "DegreeEstimationError",
    "InvariantViolation",
    "__version__",
    "birkhoff_averages",
    "cokernel",
    "compare",
    "estimate_degree",
    "invariants",
    "orbit_coverage",
    "run",
    "smith_normal_form",
]
