"""Exact solution families, time coefficients and their diagnostics."""

from .families import (ABCFlow, CompressibleIsothermal, CompressiblePoly, FAMILIES,
                       FieldJet, FluidState, IncompressibleA, IncompressibleB,
                       Pressureless, SolutionFamily, evaluate, evaluate_jet,
                       family_from_dict)
from .timefunc import TimeFunction, eval_time_function, mass_ode_solve

__all__ = [
    "ABCFlow", "CompressibleIsothermal", "CompressiblePoly", "FAMILIES", "FieldJet",
    "FluidState", "IncompressibleA", "IncompressibleB", "Pressureless",
    "SolutionFamily", "TimeFunction", "eval_time_function", "evaluate",
    "evaluate_jet", "family_from_dict", "mass_ode_solve",
]
