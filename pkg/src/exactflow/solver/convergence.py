"""Method-of-exact-solutions convergence runs."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError
from .grid import GridSpec
from .scheme import RHO_FLOOR, VARIABLES, GasLaw, advance, exact_conserved, init_from_exact, \
    max_stable_dt

NORMS = ("L1", "L2", "Linf")


def error_norms(numeric: np.ndarray, exact: np.ndarray, cell_volume: float) -> dict:
    """Per-variable discrete norms ``{norm: {variable: value}}``."""
    e = numeric - exact
    out = {"L1": {}, "L2": {}, "Linf": {}}
    for k, name in enumerate(VARIABLES):
        ek = e[..., k]
        out["L1"][name] = float(cell_volume * np.sum(np.abs(ek)))
        out["L2"][name] = float(math.sqrt(cell_volume * np.sum(ek * ek)))
        out["Linf"][name] = float(np.max(np.abs(ek)))
    return out


@dataclass(frozen=True)
class ConvergenceRow:
    grid: GridSpec
    steps: int
    errors: dict
    wall_time: float

    @property
    def h(self) -> float:
        return self.grid.h

    def combined(self, norm: str) -> float:
        """Max over conserved variables."""
        return max(self.errors[norm].values())


def observed_order(coarse: float, fine: float) -> float | None:
    if coarse > 0 and fine > 0:
        return math.log2(coarse / fine)
    return None


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple
    t_final: float
    cfl: float
    family: dict = field(default_factory=dict)

    def orders(self, norm: str = "L1") -> list:
        """Observed orders between consecutive rows; ``None`` where the grids are not 2x refinements."""
        out = []
        for c, f in zip(self.rows, self.rows[1:]):
            ok = f.grid.is_refinement_of(c.grid)
            out.append(observed_order(c.combined(norm), f.combined(norm)) if ok else None)
        return out

    def strictly_decreasing(self, norm: str = "L1") -> bool:
        e = [r.combined(norm) for r in self.rows]
        return all(b < a for a, b in zip(e, e[1:]))

    def to_dict(self, include_timing: bool = False) -> dict:
        rows = []
        for r in self.rows:
            row = {"shape": list(r.grid.shape), "h": r.h, "steps": r.steps, "errors": r.errors,
                   **{f"{n}_max": r.combined(n) for n in NORMS}}
            if include_timing:
                row["wall_time"] = r.wall_time
            rows.append(row)
        return {"family": self.family, "t_final": self.t_final, "cfl": self.cfl, "rows": rows,
                "orders": {n: self.orders(n) for n in NORMS}}

    def to_csv(self, include_timing: bool = False) -> str:
        header = ["nx", "ny", "nz", "h", "steps"]
        header += [f"{n}_{v}" for n in NORMS for v in VARIABLES]
        header += [f"order_{n}" for n in NORMS]
        if include_timing:
            header.append("wall_time")
        orders = {n: [None] + self.orders(n) for n in NORMS}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for i, r in enumerate(self.rows):
            line = [*r.grid.shape, repr(r.h), r.steps]
            line += [repr(r.errors[n][v]) for n in NORMS for v in VARIABLES]
            line += ["" if orders[n][i] is None else repr(orders[n][i]) for n in NORMS]
            if include_timing:
                line.append(f"{r.wall_time:.3f}")
            w.writerow(line)
        return buf.getvalue()


def simulate(family, grid: GridSpec, t0: float, t_final: float, cfl: float,
             rho_floor: float = RHO_FLOOR):
    """Integrate from ``t0`` to ``t_final``; returns ``(state, steps)``."""
    law = GasLaw.of(family)
    state = init_from_exact(family, grid, t0, rho_floor)
    t, steps = float(t0), 0
    while t < t_final:
        dt = min(max_stable_dt(state, grid, law, cfl), t_final - t)
        state = advance(state, grid, family, t, dt, cfl=cfl, rho_floor=rho_floor)
        # land exactly on t_final despite accumulated rounding
        t = t_final if t + dt >= t_final else t + dt
        steps += 1
    return state, steps


def run_convergence(family, grids, t_final: float, cfl: float = 0.45, t0: float = 0.0,
                    rho_floor: float = RHO_FLOOR, progress=None) -> ConvergenceTable:
    """Run every grid to ``t_final`` and tabulate errors against the exact solution.

    Rows come out ordered by decreasing ``h`` whatever the input order.
    ``progress``, if given, is called with each finished row.
    """
    if not 0 < cfl <= 1:
        raise ParameterError("cfl must lie in (0, 1]")
    if t_final < t0:
        raise ParameterError("t_final precedes t0")
    grids = sorted(grids, key=lambda g: -g.h)
    if not grids:
        raise ParameterError("need at least one grid")
    rows = []
    for grid in grids:
        start = time.perf_counter()
        state, steps = simulate(family, grid, t0, t_final, cfl, rho_floor)
        exact = exact_conserved(family, grid, t_final, ghosts=False)
        row = ConvergenceRow(grid, steps, error_norms(state, exact, grid.cell_volume),
                             time.perf_counter() - start)
        rows.append(row)
        if progress is not None:
            progress(row)
    return ConvergenceTable(tuple(rows), float(t_final), float(cfl), family.to_dict())
