"""Uniform Cartesian grids with one ghost layer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError

GHOST = 1


@dataclass(frozen=True)
class GridSpec:
    """``shape`` cells spanning the box ``[lo, hi]`` per axis.

    Examples
    --------
    >>> g = GridSpec.cube(16, -1.0, 1.0)
    >>> g.dx
    (0.125, 0.125, 0.125)
    """

    shape: tuple
    lo: tuple = (-1.0, -1.0, -1.0)
    hi: tuple = (1.0, 1.0, 1.0)

    def __post_init__(self):
        shape = tuple(int(n) for n in self.shape)
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(shape) != 3 or len(lo) != 3 or len(hi) != 3:
            raise ParameterError("grids are three-dimensional")
        if any(n < 4 for n in shape):
            raise ParameterError(f"need at least 4 cells per axis, got {shape}")
        if any(not (h > l) for l, h in zip(lo, hi)):
            raise ParameterError("box upper bounds must exceed lower bounds")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, n: int, lo: float = -1.0, hi: float = 1.0) -> "GridSpec":
        return cls((n, n, n), (lo,) * 3, (hi,) * 3)

    @property
    def dx(self) -> tuple:
        return tuple((h - l) / n for l, h, n in zip(self.lo, self.hi, self.shape))

    @property
    def h(self) -> float:
        """Largest cell size, the refinement parameter."""
        return max(self.dx)

    @property
    def cell_volume(self) -> float:
        dx, dy, dz = self.dx
        return dx * dy * dz

    def axis_centers(self, axis: int, ghosts: bool = True) -> np.ndarray:
        g = GHOST if ghosts else 0
        idx = np.arange(-g, self.shape[axis] + g)
        return self.lo[axis] + (idx + 0.5) * self.dx[axis]

    def centers(self, ghosts: bool = True) -> np.ndarray:
        """Cell-center coordinates, shape ``(nx, ny, nz, 3)`` plus ghosts if asked."""
        axes = [self.axis_centers(d, ghosts) for d in range(3)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def refined(self) -> "GridSpec":
        return GridSpec(tuple(2 * n for n in self.shape), self.lo, self.hi)

    def is_refinement_of(self, coarse: "GridSpec") -> bool:
        return (self.lo == coarse.lo and self.hi == coarse.hi
                and all(f == 2 * c for f, c in zip(self.shape, coarse.shape)))

    def to_dict(self) -> dict:
        return {"shape": list(self.shape), "lo": list(self.lo), "hi": list(self.hi)}
