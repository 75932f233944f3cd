"""Mass and kinetic energy in balls, used to exhibit their divergence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, ParameterError


@dataclass(frozen=True)
class BallIntegrals:
    radii: np.ndarray
    mass: np.ndarray
    kinetic_energy: np.ndarray

    def mass_exponent(self) -> float:
        return growth_exponent(self.radii, self.mass)

    def energy_exponent(self) -> float:
        return growth_exponent(self.radii, self.kinetic_energy)


def growth_exponent(radii, values) -> float:
    """Least-squares slope of log(values) against log(radii)."""
    slope, _ = np.polyfit(np.log(radii), np.log(values), 1)
    return float(slope)


def ball_grid(R, shells=64, polar=32, azimuthal=64):
    """Midpoint nodes and weights on [0,R] x [0,pi] x [0,2pi] in spherical coordinates."""
    dr, dth, dph = R / shells, np.pi / polar, 2 * np.pi / azimuthal
    r = (np.arange(shells) + 0.5) * dr
    th = (np.arange(polar) + 0.5) * dth
    ph = (np.arange(azimuthal) + 0.5) * dph
    rr, tt, pp = np.meshgrid(r, th, ph, indexing="ij")
    sin_t = np.sin(tt)
    pts = np.stack([rr * sin_t * np.cos(pp), rr * sin_t * np.sin(pp), rr * np.cos(tt)],
                   axis=-1).reshape(-1, 3)
    w = (rr ** 2 * sin_t * dr * dth * dph).ravel()
    return pts, w


def integrate_diagnostics(family, t, radii, shells=64, polar=32, azimuthal=64):
    """Integrate rho and |u|^2/2 over origin-centred balls of the given radii."""
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size == 0 or np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise ParameterError("radii must be positive and strictly increasing")
    mass, energy = [], []
    for R in radii:
        pts, w = ball_grid(R, shells, polar, azimuthal)
        state = family.evaluate(t, pts)
        ke = 0.5 * np.sum(state.u ** 2, axis=-1)
        if not (np.all(np.isfinite(state.rho)) and np.all(np.isfinite(ke))):
            raise DomainError("non-finite integrand inside the ball")
        mass.append(float(np.dot(np.broadcast_to(state.rho, w.shape), w)))
        energy.append(float(np.dot(ke, w)))
    return BallIntegrals(radii, np.array(mass), np.array(energy))
