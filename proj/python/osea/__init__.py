"""Python bindings for the osea MILP toolkit."""

import json

from ._osea import (
    Instance,
    InputError,
    NotApplicableError,
    classify,
    compute_gap,
    generate,
    is_feasible,
    parse_mps,
    read_mps,
    solve_mip,
    write_mps,
)
from ._osea import _run_osea_json


def run_osea(instance, total_seconds=None, total_nodes=None, incumbent_seconds=None,
             incumbent_nodes=None, n_max=50):
    """Runs the heuristic and returns the report as a dict."""
    return json.loads(
        _run_osea_json(instance, total_seconds, total_nodes, incumbent_seconds,
                       incumbent_nodes, n_max))


__all__ = [
    "Instance",
    "InputError",
    "NotApplicableError",
    "classify",
    "compute_gap",
    "generate",
    "is_feasible",
    "parse_mps",
    "read_mps",
    "run_osea",
    "solve_mip",
    "write_mps",
]
