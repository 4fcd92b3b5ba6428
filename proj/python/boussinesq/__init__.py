"""Steady Boussinesq FEM solver.

Thin wrapper over the compiled ``_core`` module; see ``solve``, ``sweep`` and
``mms_study``.
"""

from ._core import (
    FRONTIER_CSV_HEADER,
    RUNS_CSV_HEADER,
    ConfigError,
    CsvError,
    LinearSolveError,
    MeshError,
    __version__,
    cli,
    estimate_order,
    linear_solver,
    mesh_stats,
    methods,
    mms_study,
    read_frontier_csv,
    read_runs_csv,
    solve,
    sweep,
)

__all__ = [
    "FRONTIER_CSV_HEADER",
    "RUNS_CSV_HEADER",
    "ConfigError",
    "CsvError",
    "LinearSolveError",
    "MeshError",
    "__version__",
    "cli",
    "estimate_order",
    "linear_solver",
    "mesh_stats",
    "methods",
    "mms_study",
    "read_frontier_csv",
    "read_runs_csv",
    "solve",
    "sweep",
]
