"""Exact rational polynomial algebra used to prove residual identities."""

from .build import (BCoefficients, SymbolicFamily, SymbolicResidual, build_symbolic,
                    solve_b_coefficients, symbolic_primitive_residual, symbolic_residual,
                    symbolic_verify)
from .poly import MultiPoly, T, X, Y, Z, poly_arith, poly_diff

__all__ = [
    "BCoefficients", "MultiPoly", "SymbolicFamily", "SymbolicResidual", "T", "X", "Y", "Z",
    "build_symbolic", "poly_arith", "poly_diff", "solve_b_coefficients",
    "symbolic_primitive_residual", "symbolic_residual", "symbolic_verify",
]
