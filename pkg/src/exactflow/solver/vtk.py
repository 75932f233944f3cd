"""Legacy-ASCII structured-points volume files."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .grid import GridSpec


def write_structured_points(path, grid: GridSpec, fields: dict, title: str = "exactflow") -> Path:
    """Write cell-centered scalars ``{name: array of grid.shape}`` as point data.

    Points sit at cell centers, so the origin is the first center and the
    spacing is the cell size. x varies fastest in the data blocks.
    """
    path = Path(path)
    nx, ny, nz = grid.shape
    origin = [lo + 0.5 * d for lo, d in zip(grid.lo, grid.dx)]
    lines = ["# vtk DataFile Version 3.0", title.replace("\n", " ")[:255], "ASCII",
             "DATASET STRUCTURED_POINTS", f"DIMENSIONS {nx} {ny} {nz}",
             "ORIGIN " + " ".join(repr(v) for v in origin),
             "SPACING " + " ".join(repr(v) for v in grid.dx),
             f"POINT_DATA {nx * ny * nz}"]
    for name, values in fields.items():
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError(f"field {name!r} has shape {values.shape}, expected {grid.shape}")
        lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default"]
        lines += [repr(float(v)) for v in values.transpose(2, 1, 0).ravel()]
    path.write_text("\n".join(lines) + "\n")
    return path


def snapshot_fields(state: np.ndarray) -> dict:
    """Density and velocity components of a conserved state."""
    rho = state[..., 0]
    return {"rho": rho, "ux": state[..., 1] / rho, "uy": state[..., 2] / rho,
            "uz": state[..., 3] / rho}
