"""Shape of the vacuum boundary of the rotational compressible density."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .families import CompressibleIsothermal, Q_DIFF, _RotationalCompressible

ELLIPTIC_CYLINDER = "elliptic-cylinder-like"
PARABOLOID = "paraboloid-like"
HALF_SPACE = "half-space"
EMPTY = "empty"
ALL_SPACE = "all-space"


@dataclass(frozen=True)
class QuadricClassification:
    eigenvalues: np.ndarray       # descending
    eigenvectors: np.ndarray      # columns, orthonormal
    null_axis: np.ndarray | None  # unit vector with positive component sum
    boundary_kind: str
    radius: float | None = None   # cylinder radius when the boundary is one


def classify_support(family: _RotationalCompressible, t=0.0) -> QuadricClassification:
    """Eigen-structure of C^2 q(x) and the kind of surface {phi = 0} at time t.

    Along the null axis n = (1,1,1)/sqrt(3) the density potential reduces to
    ``1.5 C^2 |w|^2 - sqrt(3) a'(t) s + b(t)`` for ``x = s n + w``.
    """
    C2 = float(family.C) ** 2
    matrix = C2 * Q_DIFF
    vals, vecs = np.linalg.eigh(matrix)
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    vals = np.where(np.abs(vals) < 1e-14 * max(1.0, C2), 0.0, vals)

    null_axis = None
    if C2 > 0:
        null_axis = vecs[:, -1] * np.sign(vecs[:, -1].sum())
    _, da, _ = family.a_function().evaluate(t)
    b, _, _ = family.b_function().evaluate(t)
    da, b = float(da), float(b)

    radius = None
    if isinstance(family, CompressibleIsothermal):
        kind = ALL_SPACE
    elif C2 > 0 and da != 0.0:
        kind = PARABOLOID
    elif C2 > 0:
        if b > 0:
            kind = ALL_SPACE
        else:
            kind = ELLIPTIC_CYLINDER
            radius = float(np.sqrt(max(-b, 0.0) / (1.5 * C2))) + 0.0
    elif da != 0.0:
        kind = HALF_SPACE
    else:
        kind = ALL_SPACE if b > 0 else EMPTY
    return QuadricClassification(vals, vecs, null_axis, kind, radius)
