"""Finite-volume Euler solver and convergence harness."""

from .convergence import (ConvergenceRow, ConvergenceTable, error_norms, observed_order,
                          run_convergence, simulate)
from .grid import GridSpec
from .scheme import (RHO_FLOOR, VARIABLES, GasLaw, advance, exact_conserved, init_from_exact,
                     max_stable_dt)
from .vtk import snapshot_fields, write_structured_points

__all__ = ["ConvergenceRow", "ConvergenceTable", "GasLaw", "GridSpec", "RHO_FLOOR", "VARIABLES",
           "advance", "error_norms", "exact_conserved", "init_from_exact", "max_stable_dt",
           "observed_order", "run_convergence", "simulate", "snapshot_fields",
           "write_structured_points"]
