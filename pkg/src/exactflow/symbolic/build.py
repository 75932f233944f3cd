"""Exact polynomial forms of the verifiable families and their residuals."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from ..errors import NoSolutionError, UnsupportedSymbolicError
from ..fields.families import (CompressibleIsothermal, CompressiblePoly, IncompressibleA,
                               IncompressibleB)
from .poly import COORDS, T, MultiPoly, X, Y, Z

S_ROWS = ((0, 1, -1), (-1, 0, 1), (1, -1, 0))
M_ROWS = ((0, 1, 1), (1, 0, 1), (1, 1, 0))
_Q_DIFF = X * X + Y * Y + Z * Z - (X * Y + Y * Z + X * Z)
_Q_SUM = -(X * X + Y * Y + Z * Z + X * Y + Y * Z + X * Z)


@dataclass(frozen=True)
class SymbolicFamily:
    """Velocity and potential of a family as polynomials in (x, y, z, t).

    ``gamma`` is ``None`` for incompressible families. For ``gamma == 1``
    the potential is ``K ln rho`` and ``K`` enters the mass equation.
    """

    u: tuple
    phi: MultiPoly
    gamma: Fraction | None
    K: Fraction | None
    tag: str

    @property
    def incompressible(self) -> bool:
        return self.gamma is None


@dataclass(frozen=True)
class SymbolicResidual:
    continuity: MultiPoly
    momentum: tuple

    def all_zero(self) -> bool:
        return self.continuity.is_zero() and all(m.is_zero() for m in self.momentum)

    def to_dict(self) -> dict:
        return {"continuity": str(self.continuity),
                "momentum": [str(m) for m in self.momentum]}


def _tpoly(tf) -> MultiPoly:
    return MultiPoly.in_t(tf.poly_coefficients())


def _matvec(rows, scale, vec):
    return tuple(sum((vec[j].scale(scale * r[j]) for j in range(3) if r[j]), MultiPoly.zero())
                 for r in rows)


def _linear_velocity(C, a_polys, rows):
    Bx = _matvec(rows, C, COORDS)
    return tuple(a + b for a, b in zip(a_polys, Bx))


def build_symbolic(family) -> SymbolicFamily:
    """Exact ``(u, phi)`` for a family whose time functions are polynomial."""
    if isinstance(family, (CompressiblePoly, CompressibleIsothermal)):
        C = family.C
        a = _tpoly(family.a_function())
        b = _tpoly(family.b_function())
        u = _linear_velocity(C, (a, a, a), S_ROWS)
        phi = _Q_DIFF.scale(C * C) - a.diff("t") * (X + Y + Z) + b
        if isinstance(family, CompressiblePoly):
            return SymbolicFamily(u, phi, family.gamma, family.K, family.tag)
        if family.exponent == "printed":
            phi = phi.scale(family.K)
        return SymbolicFamily(u, phi, Fraction(1), family.K, family.tag)
    if isinstance(family, (IncompressibleA, IncompressibleB)):
        C = family.C
        a = tuple(_tpoly(tf) for tf in family.a)
        if isinstance(family, IncompressibleA):
            rows, quad = S_ROWS, _Q_DIFF
            coupling = S_ROWS if family.pressure == "corrected" else M_ROWS
        else:
            rows, quad, coupling = M_ROWS, _Q_SUM, M_ROWS
        u = _linear_velocity(C, a, rows)
        Ga = _matvec(coupling, C, a)
        phi = quad.scale(C * C) + _tpoly(family.b)
        for xi, ai, gi in zip(COORDS, a, Ga):
            phi = phi - (ai.diff("t") + gi) * xi
        return SymbolicFamily(u, phi, None, None, family.tag)
    raise UnsupportedSymbolicError(f"{family.tag} has no polynomial representation")


def _div(u):
    return u[0].diff("x") + u[1].diff("y") + u[2].diff("z")


def _directional(u, p):
    return u[0] * p.diff("x") + u[1] * p.diff("y") + u[2] * p.diff("z")


def symbolic_residual(sf: SymbolicFamily) -> SymbolicResidual:
    """Momentum u_t + (u.grad)u + grad(phi) and the potential-form mass equation."""
    momentum = tuple(ui.diff("t") + _directional(sf.u, ui) + sf.phi.diff(v)
                     for ui, v in zip(sf.u, "xyz"))
    div = _div(sf.u)
    if sf.incompressible:
        return SymbolicResidual(div, momentum)
    transport = sf.phi.diff("t") + _directional(sf.u, sf.phi)
    if sf.gamma == 1:
        continuity = transport + div.scale(sf.K)
    else:
        continuity = transport + (sf.phi * div).scale(sf.gamma - 1)
    return SymbolicResidual(continuity, momentum)


def symbolic_primitive_residual(family: CompressiblePoly) -> SymbolicResidual:
    """Residual of rho_t + div(rho u) and rho(u_t + (u.grad)u) + grad(K rho^gamma).

    Needs 1/(gamma-1) to be an integer n, so that rho = (c phi)^n and
    P = K (c phi)^(n+1) are polynomials (valid wherever phi > 0).
    """
    n = 1 / (family.gamma - 1)
    if n.denominator != 1:
        raise UnsupportedSymbolicError("1/(gamma-1) must be an integer")
    sf = build_symbolic(family)
    base = sf.phi.scale((family.gamma - 1) / (family.K * family.gamma))
    rho = base ** int(n)
    P = (base ** (int(n) + 1)).scale(family.K)
    flux = [rho * ui for ui in sf.u]
    continuity = rho.diff("t") + flux[0].diff("x") + flux[1].diff("y") + flux[2].diff("z")
    momentum = tuple(rho * (ui.diff("t") + _directional(sf.u, ui)) + P.diff(v)
                     for ui, v in zip(sf.u, "xyz"))
    return SymbolicResidual(continuity, momentum)


def symbolic_verify(family) -> SymbolicResidual:
    return symbolic_residual(build_symbolic(family))


# -- recovering b(t) ---------------------------------------------------------


@dataclass(frozen=True)
class BCoefficients:
    """Coefficients of b(t) in increasing degree; ``free`` lists undetermined ones (set to 0)."""

    coefficients: tuple
    free: tuple

    def filled(self, **values) -> tuple:
        """Coefficients with free slots replaced, e.g. ``filled(c0=Fraction(3))``."""
        out = list(self.coefficients)
        for key, v in values.items():
            k = int(key.lstrip("c"))
            if k not in self.free:
                raise ValueError(f"coefficient {k} is determined, not free")
            out[k] = Fraction(v)
        return tuple(out)


def _solve_linear(columns, rhs):
    """Row-reduce ``sum_k beta_k columns[k] = rhs`` over monomial rows.

    Returns ``(beta, free, inconsistent_rows)``.
    """
    monos = sorted(set(rhs.terms).union(*(c.terms for c in columns)))
    ncol = len(columns)
    rows = [[c.coefficient(m) for c in columns] + [rhs.coefficient(m)] for m in monos]
    pivots, r = [], 0
    for col in range(ncol):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        monos[r], monos[piv] = monos[piv], monos[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    bad = {monos[i]: rows[i][-1] for i in range(r, len(rows)) if rows[i][-1] != 0}
    beta = [Fraction(0)] * ncol
    for i, col in enumerate(pivots):
        beta[col] = rows[i][-1]
    free = tuple(c for c in range(ncol) if c not in pivots)
    return beta, free, bad


def solve_b_coefficients(sf: SymbolicFamily, degree: int = 2) -> BCoefficients:
    """Find b(t) of degree <= ``degree`` that kills the mass-equation residual.

    ``sf`` should carry the potential with b = 0. The residual is affine in
    the unknown coefficients, so each basis monomial t^k gives one column.
    Raises :class:`NoSolutionError` with the uncancellable monomials when
    no such b exists.
    """
    base = symbolic_residual(sf).continuity
    columns = []
    for k in range(degree + 1):
        trial = replace(sf, phi=sf.phi + T ** k)
        columns.append(symbolic_residual(trial).continuity - base)
    beta, free, bad = _solve_linear(columns, -base)
    if bad:
        # monomials no column touches are the clearest witnesses
        untouched = {m: c for m, c in base.terms.items()
                     if all(col.coefficient(m) == 0 for col in columns)}
        raise NoSolutionError("continuity residual cannot be cancelled by any b(t)",
                              untouched or bad)
    return BCoefficients(tuple(beta), free)
