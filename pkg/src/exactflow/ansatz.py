"""Reduction of the linear velocity ansatz u = a(t) + B(t) x.

Substituting the ansatz into u_t + (u.grad)u + grad(phi) = 0 with a
quadratic potential phi = x^T Q x + L.x + b splits momentum into a linear
part (Bdot + B^2 + 2Q) x and a constant part a' + B a + L. A gradient
pressure exists only if M = Bdot + B^2 is symmetric.

Everything here works on numpy arrays of either float64 or ``object`` dtype
holding ``Fraction`` values; rational inputs stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._rational import rational_str
from .fields.families import IncompressibleA, IncompressibleB, _RotationalCompressible
from .fields.timefunc import TimeFunction

S_PATTERN = np.array([[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
M_PATTERN = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]])

FLOAT_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class LinearAnsatz:
    a: tuple  # three TimeFunctions
    B: tuple  # 3 x 3 nested tuples of TimeFunctions

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "B", tuple(tuple(row) for row in self.B))
        if len(self.a) != 3 or len(self.B) != 3 or any(len(r) != 3 for r in self.B):
            raise ValueError("ansatz needs a 3-vector a and a 3x3 matrix B")

    @classmethod
    def constant(cls, B, a=(0, 0, 0)) -> "LinearAnsatz":
        const = TimeFunction.constant
        return cls(tuple(const(v) for v in a),
                   tuple(tuple(const(v) for v in row) for row in np.asarray(B, dtype=object)))

    def evaluate(self, t, order=2):
        """``(a, a', a'')`` and ``(B, B', B'')`` at ``t`` as arrays."""
        av = [tf.evaluate(t) for tf in self.a]
        Bv = [[tf.evaluate(t) for tf in row] for row in self.B]
        dtype = object if _exact(t) else float
        a = tuple(np.array([v[k] for v in av], dtype=dtype) for k in range(order + 1))
        B = tuple(np.array([[v[k] for v in row] for row in Bv], dtype=dtype)
                  for k in range(order + 1))
        return a, B


def _exact(t):
    return isinstance(t, (int, Fraction)) and not isinstance(t, bool)


def _sym(M):
    return (M + M.T) / 2


def _skew(M):
    return (M - M.T) / 2


@dataclass(frozen=True)
class MomentumReduction:
    Q: np.ndarray
    L: np.ndarray
    obstruction: np.ndarray

    def admits_gradient(self) -> bool:
        if self.obstruction.dtype == object:
            return all(v == 0 for v in self.obstruction.flat)
        return bool(np.max(np.abs(self.obstruction)) <= FLOAT_ZERO_TOL)

    def to_dict(self) -> dict:
        return {"Q": _matrix_json(self.Q), "L": _vector_json(self.L),
                "obstruction": _matrix_json(self.obstruction),
                "admits_gradient": self.admits_gradient()}


def reduce_momentum(ans: LinearAnsatz, t) -> MomentumReduction:
    """Q = -sym(M)/2, L = -(a' + B a), obstruction = skew(M), M = B' + B^2."""
    (a, da, _), (B, dB, _) = ans.evaluate(t)
    M = dB + B @ B
    return MomentumReduction(Q=-_sym(M) / 2, L=-(da + B @ a), obstruction=_skew(M))


@dataclass(frozen=True)
class QuadraticPotential:
    """phi = x^T Q x + L.x + b(t), with the time rates of Q and L at one instant."""

    Q: np.ndarray
    L: np.ndarray
    b: TimeFunction
    Q_rate: np.ndarray
    L_rate: np.ndarray


def induced_potential(ans: LinearAnsatz, b: TimeFunction, t) -> QuadraticPotential:
    """Potential pinned down by momentum balance, with its rates differentiated in closed form."""
    (a, da, dda), (B, dB, ddB) = ans.evaluate(t)
    red = reduce_momentum(ans, t)
    dM = ddB + dB @ B + B @ dB
    return QuadraticPotential(Q=red.Q, L=red.L, b=b, Q_rate=-_sym(dM) / 2,
                              L_rate=-(dda + dB @ a + B @ da))


@dataclass(frozen=True)
class ContinuityCoefficients:
    """Monomial coefficients of the mass residual; all vanish for an exact solution."""

    constant: object
    linear: np.ndarray
    quadratic: np.ndarray  # symmetric 3x3; the residual's x^T G x part
    trace_only: bool = False

    def vanishes(self, tol=FLOAT_ZERO_TOL) -> bool:
        vals = [self.constant, *np.asarray(self.linear).flat, *np.asarray(self.quadratic).flat]
        return all(v == 0 if isinstance(v, (Fraction, int)) else abs(v) <= tol for v in vals)

    def to_dict(self) -> dict:
        return {"constant": _scalar_json(self.constant), "linear": _vector_json(self.linear),
                "quadratic": _matrix_json(self.quadratic)}


def reduce_continuity(ans: LinearAnsatz, pot: QuadraticPotential | None, gamma, t
                      ) -> ContinuityCoefficients:
    """Coefficients of phi_t + u.grad(phi) + (gamma-1) phi tr(B).

    ``gamma=None`` means incompressible: only tr(B) is returned, as the
    constant coefficient. For ``gamma == 1`` the phi term drops out; the
    isothermal mass equation then carries ``K tr(B)``, which vanishes for
    every trace-free B.
    """
    (a, _, _), (B, _, _) = ans.evaluate(t)
    tr = np.trace(B)
    zero3 = np.zeros(3, dtype=B.dtype)
    if gamma is None:
        return ContinuityCoefficients(tr, zero3, np.zeros((3, 3), dtype=B.dtype), True)
    b, db, _ = pot.b.evaluate(t)
    g1 = gamma - 1 if B.dtype == object else float(gamma) - 1
    Q, L = pot.Q, pot.L
    constant = db + a @ L + g1 * b * tr
    linear = pot.L_rate + 2 * Q @ a + B.T @ L + g1 * tr * L
    quadratic = pot.Q_rate + B.T @ Q + Q @ B + g1 * tr * Q
    return ContinuityCoefficients(constant, linear, quadratic)


# -- family round trips ---------------------------------------------------------


def _scaled_pattern(C, pattern):
    return tuple(tuple(TimeFunction.constant(C * int(v)) for v in row) for row in pattern)


def ansatz_of(family) -> LinearAnsatz:
    """The (a, B) ansatz behind a linear-velocity family."""
    if isinstance(family, _RotationalCompressible):
        a = family.a_function()
        return LinearAnsatz((a, a, a), _scaled_pattern(family.C, S_PATTERN))
    if isinstance(family, IncompressibleA):
        return LinearAnsatz(family.a, _scaled_pattern(family.C, S_PATTERN))
    if isinstance(family, IncompressibleB):
        return LinearAnsatz(family.a, _scaled_pattern(family.C, M_PATTERN))
    raise ValueError(f"{family.tag} is not a linear-velocity family")


@dataclass(frozen=True)
class FamilyMatch:
    tag: str
    C: Fraction
    a: tuple

    def to_dict(self) -> dict:
        return {"tag": self.tag, "C": rational_str(self.C), "a": [tf.to_dict() for tf in self.a]}


def _constant_value(tf):
    if not tf.is_polynomial:
        return None
    coeffs = tf.poly_coefficients()
    if len(coeffs) > 1:
        return None
    return coeffs[0] if coeffs else Fraction(0)


def match_family(ans: LinearAnsatz, candidates=("IncompressibleA", "IncompressibleB")
                 ) -> FamilyMatch | None:
    """Recognise B = C S (or zero) and B = C M; ``None`` when B fits neither."""
    vals = [[_constant_value(tf) for tf in row] for row in ans.B]
    if any(v is None for row in vals for v in row):
        return None
    B = np.array(vals, dtype=object)
    for tag, pattern in (("IncompressibleA", S_PATTERN), ("IncompressibleB", M_PATTERN)):
        if tag not in candidates:
            continue
        C = B[0, 1]
        if all(B[i, j] == C * int(pattern[i, j]) for i in range(3) for j in range(3)):
            return FamilyMatch(tag, Fraction(C), ans.a)
    return None


def _scalar_json(v):
    return rational_str(v) if isinstance(v, (Fraction, int)) else float(v) + 0.0


def _vector_json(v):
    return [_scalar_json(x) for x in np.asarray(v).flat]


def _matrix_json(m):
    return [[_scalar_json(x) for x in row] for row in np.asarray(m)]
