"""First-order Rusanov finite volumes for isentropic Euler, with SSP-RK2 in time.

Conserved variables per cell are ``(rho, rho u_x, rho u_y, rho u_z)`` with
pressure ``P = K rho^gamma``. Ghost cells hold the exact solution at each
stage time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ParameterError, PositivityError, SetupError, StepError
from ..fields.families import COMPRESSIBLE
from .grid import GridSpec

RHO_FLOOR = 1e-6
# relative slack on the CFL bound so that dt computed from the bound itself passes
CFL_SLACK = 1e-12

VARIABLES = ("rho", "mx", "my", "mz")


@dataclass(frozen=True)
class GasLaw:
    gamma: float
    K: float

    @classmethod
    def of(cls, family) -> "GasLaw":
        if getattr(family, "regime", None) != COMPRESSIBLE or not float(family.K) > 0:
            raise ParameterError(f"{family.tag} is not a compressible gamma-law family")
        return cls(float(family.gamma), float(family.K))

    def pressure(self, rho):
        return self.K * rho ** self.gamma

    def sound_speed(self, rho):
        return np.sqrt(self.gamma * self.K * rho ** (self.gamma - 1.0))


def exact_conserved(family, grid: GridSpec, t: float, ghosts: bool = True) -> np.ndarray:
    """Exact conserved state sampled at cell centers."""
    x = grid.centers(ghosts)
    state = family.evaluate(float(t), x)
    rho = np.broadcast_to(state.rho, x.shape[:-1])
    return np.concatenate([rho[..., None], rho[..., None] * state.u], axis=-1)


def init_from_exact(family, grid: GridSpec, t0: float = 0.0, rho_floor: float = RHO_FLOOR
                    ) -> np.ndarray:
    """Interior state of shape ``grid.shape + (4,)`` from the exact solution at ``t0``.

    Ghost cells are checked too, since the first step reads them.
    """
    GasLaw.of(family)
    full = exact_conserved(family, grid, t0)
    bad = np.argwhere(~(full[..., 0] >= rho_floor))
    if bad.size:
        cell = tuple(int(i) - 1 for i in bad[0])
        raise SetupError(f"density below floor {rho_floor:g} at cell {cell} "
                         f"(ghost cells have index -1 or n) at t={t0:g}")
    return np.ascontiguousarray(full[1:-1, 1:-1, 1:-1])


def max_stable_dt(state: np.ndarray, grid: GridSpec, law: GasLaw, cfl: float = 1.0) -> float:
    """``cfl / max_cells sum_d (|u_d| + c_s) / dx_d``."""
    rho = state[..., 0]
    c = law.sound_speed(rho)
    rate = sum((np.abs(state[..., 1 + d] / rho) + c) / grid.dx[d] for d in range(3))
    return cfl / float(np.max(rate))


def _physical_flux(U, law, axis):
    rho = U[..., 0]
    un = U[..., 1 + axis] / rho
    F = U * un[..., None]
    F[..., 1 + axis] += law.pressure(rho)
    return F, np.abs(un) + law.sound_speed(rho)


def _face_fluxes(padded, law, axis):
    """Rusanov fluxes through every face normal to ``axis`` bordering an interior cell."""
    inner = [slice(1, -1)] * 3
    inner[axis] = slice(None)
    U = padded[tuple(inner)]
    F, speed = _physical_flux(U, law, axis)
    lo = [slice(None)] * 3
    hi = [slice(None)] * 3
    lo[axis] = slice(None, -1)
    hi[axis] = slice(1, None)
    lo, hi = tuple(lo), tuple(hi)
    alpha = np.maximum(speed[lo], speed[hi])[..., None]
    return 0.5 * (F[lo] + F[hi]) - 0.5 * alpha * (U[hi] - U[lo])


def _slab(axis, side):
    """Index of the ghost face slab on one side of ``axis`` (edges and corners excluded)."""
    idx = [slice(1, -1)] * 3
    idx[axis] = 0 if side == 0 else -1
    return tuple(idx)


@lru_cache(maxsize=8)
def _slab_centers(grid: GridSpec):
    x = grid.centers(ghosts=True)
    return tuple(np.ascontiguousarray(x[_slab(axis, side)])
                 for axis in range(3) for side in (0, 1))


def _padded(state, family, grid, t, rho_floor):
    """Interior state framed by exact ghost slabs; unused edge and corner cells are NaN."""
    padded = np.full(tuple(n + 2 for n in grid.shape) + (4,), np.nan)
    padded[1:-1, 1:-1, 1:-1] = state
    slabs = [(axis, side) for axis in range(3) for side in (0, 1)]
    for (axis, side), x in zip(slabs, _slab_centers(grid)):
        st = family.evaluate(float(t), x)
        rho = np.broadcast_to(st.rho, x.shape[:-1])
        if not np.all(rho >= rho_floor):
            raise PositivityError(f"exact boundary data drops below the density floor at t={t:g}")
        padded[_slab(axis, side)] = np.concatenate([rho[..., None], rho[..., None] * st.u], axis=-1)
    return padded


def _rhs(padded, grid, law):
    """Semi-discrete update and net boundary inflow rate of each conserved variable."""
    dU = np.zeros(grid.shape + (4,))
    inflow = np.zeros(4)
    for axis in range(3):
        flux = _face_fluxes(padded, law, axis)
        first = [slice(None)] * 3
        last = [slice(None)] * 3
        first[axis], last[axis] = slice(None, -1), slice(1, None)
        dU -= (flux[tuple(last)] - flux[tuple(first)]) / grid.dx[axis]
        face_area = grid.cell_volume / grid.dx[axis]
        lo_face = np.take(flux, 0, axis=axis)
        hi_face = np.take(flux, -1, axis=axis)
        inflow += face_area * (lo_face.sum(axis=(0, 1)) - hi_face.sum(axis=(0, 1)))
    return dU, inflow


def _check(state, rho_floor, t):
    if not np.all(np.isfinite(state)):
        raise StepError(f"non-finite state after the step ending at t={t:g}")
    if not np.all(state[..., 0] >= rho_floor):
        idx = tuple(int(i) for i in np.argwhere(~(state[..., 0] >= rho_floor))[0])
        raise PositivityError(f"density below floor {rho_floor:g} at cell {idx}, t={t:g}")


def advance(state: np.ndarray, grid: GridSpec, family, t: float, dt: float,
            cfl: float = 1.0, rho_floor: float = RHO_FLOOR, return_boundary_flux: bool = False):
    """One SSP-RK2 (Heun) step from ``t`` to ``t + dt``.

    Parameters
    ----------
    state : ndarray, shape ``grid.shape + (4,)``
        Interior conserved state; it is not modified.
    family
        Compressible family supplying the exact ghost values.
    cfl : float
        Stability factor; ``dt`` above :func:`max_stable_dt` raises :class:`StepError`.
    return_boundary_flux : bool
        Also return the net inflow of each conserved variable over the step,
        ``dt * (I_1 + I_2) / 2`` from the two stage inflow rates. With it the
        interior totals change by exactly this amount up to roundoff.
    """
    law = GasLaw.of(family)
    if state.shape != grid.shape + (4,):
        raise ParameterError(f"state shape {state.shape} does not match grid {grid.shape}")
    if not dt > 0:
        raise StepError("time step must be positive")
    bound = max_stable_dt(state, grid, law, cfl)
    if dt > bound * (1.0 + CFL_SLACK):
        raise StepError(f"dt={dt:g} exceeds the CFL bound {bound:g} (cfl={cfl:g})")
    L1, in1 = _rhs(_padded(state, family, grid, t, rho_floor), grid, law)
    stage = state + dt * L1
    _check(stage, rho_floor, t + dt)
    L2, in2 = _rhs(_padded(stage, family, grid, t + dt, rho_floor), grid, law)
    new = 0.5 * state + 0.5 * (stage + dt * L2)
    _check(new, rho_floor, t + dt)
    if return_boundary_flux:
        return new, 0.5 * dt * (in1 + in2)
    return new
