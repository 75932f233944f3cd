"""Closed grammar of scalar time coefficients a(t), b(t), a_i(t)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .._rational import as_rational, rational_str
from ..errors import DomainError, ParameterError, UnsupportedSymbolicError

POLYNOMIAL = "polynomial"
RATIONAL_POLE = "rational-pole"
POWER_RAMP = "power-ramp"
CONSTANT = "constant"
KINDS = (POLYNOMIAL, RATIONAL_POLE, POWER_RAMP, CONSTANT)


def _is_exact(t) -> bool:
    return isinstance(t, (int, Fraction)) and not isinstance(t, bool)


@dataclass(frozen=True)
class TimeFunction:
    """A time coefficient with closed-form first and second derivatives.

    Kinds:

    * ``polynomial``: ``sum(c_k t^k)``, smooth for all t.
    * ``rational-pole``: ``alpha / (T - t)^p`` with ``p > 0``.
    * ``power-ramp``: ``alpha * (T - t)^q`` with ``0 < q < 1``; the value stays
      bounded at ``T`` but the derivative diverges.
    * ``constant``: ``c``.

    Pole kinds are only defined for ``t < T``.
    """

    kind: str
    coefficients: tuple = ()
    amplitude: Fraction = Fraction(0)
    pole: Fraction | None = None
    exponent: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown time-function kind {self.kind!r}")
        if self.kind in (RATIONAL_POLE, POWER_RAMP):
            if self.pole is None:
                raise ParameterError(f"{self.kind} needs a pole time")
            if self.kind == RATIONAL_POLE and not self.exponent > 0:
                raise ParameterError("rational-pole power must be positive")
            if self.kind == POWER_RAMP and not 0 < self.exponent < 1:
                raise ParameterError("power-ramp exponent must lie in (0, 1)")
        if self.kind == CONSTANT and len(self.coefficients) != 1:
            raise ParameterError("constant takes exactly one value")

    # -- constructors -------------------------------------------------------

    @classmethod
    def polynomial(cls, *coefficients) -> "TimeFunction":
        """``polynomial(c0, c1, c2)`` is ``c0 + c1 t + c2 t^2``."""
        coeffs = [as_rational(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return cls(POLYNOMIAL, tuple(coeffs))

    @classmethod
    def rational_pole(cls, amplitude, pole, power=1) -> "TimeFunction":
        return cls(RATIONAL_POLE, amplitude=as_rational(amplitude),
                   pole=as_rational(pole), exponent=as_rational(power))

    @classmethod
    def power_ramp(cls, amplitude, pole, exponent) -> "TimeFunction":
        return cls(POWER_RAMP, amplitude=as_rational(amplitude),
                   pole=as_rational(pole), exponent=as_rational(exponent))

    @classmethod
    def constant(cls, value) -> "TimeFunction":
        return cls(CONSTANT, (as_rational(value),))

    # -- queries ------------------------------------------------------------

    @property
    def singular_time(self) -> Fraction | None:
        """Pole time for pole kinds, ``None`` for globally smooth kinds."""
        return self.pole if self.kind in (RATIONAL_POLE, POWER_RAMP) else None

    @property
    def is_polynomial(self) -> bool:
        return self.kind in (POLYNOMIAL, CONSTANT)

    def poly_coefficients(self) -> tuple[Fraction, ...]:
        if self.kind == CONSTANT:
            return self.coefficients if self.coefficients[0] != 0 else ()
        if self.kind == POLYNOMIAL:
            return self.coefficients
        raise UnsupportedSymbolicError(
            f"{self.kind} time function has no polynomial form")

    def check_domain(self, t) -> None:
        T = self.singular_time
        if T is None:
            return
        if _is_exact(t):
            bad = t >= T
        else:
            bad = bool(np.any(np.asarray(t, dtype=float) >= float(T)))
        if bad:
            raise DomainError(f"{self.kind} is undefined for t >= {T}")

    # -- evaluation ---------------------------------------------------------

    def __call__(self, t):
        return self.evaluate(t)[0]

    def evaluate(self, t):
        """Return ``(value, first derivative, second derivative)`` at ``t``.

        Rational ``t`` with polynomial (or integer-power pole) kinds stays
        exact; anything else is evaluated in float64.
        """
        exact = _is_exact(t)
        if not exact:
            t = np.asarray(t, dtype=float)
            if not np.all(np.isfinite(t)):
                raise DomainError("non-finite time")
        self.check_domain(t)
        conv = (lambda q: q) if exact else float

        if self.kind in (POLYNOMIAL, CONSTANT):
            coeffs = [conv(c) for c in self.poly_coefficients()]
            zero = Fraction(0) if exact else np.zeros_like(t)
            v, d1, d2 = zero, zero, zero
            for c in reversed(coeffs):
                d2 = d2 * t + 2 * d1
                d1 = d1 * t + v
                v = v * t + c
            return v, d1, d2

        alpha, T = conv(self.amplitude), conv(self.pole)
        tau = T - t
        if self.kind == RATIONAL_POLE:
            p = self.exponent
            if exact and p.denominator == 1:
                p = int(p)
            else:
                p = float(p)
                if exact:
                    tau, alpha = float(tau), float(alpha)
            v = alpha * tau ** (-p)
            d1 = alpha * p * tau ** (-p - 1)
            d2 = alpha * p * (p + 1) * tau ** (-p - 2)
            return v, d1, d2

        q = float(self.exponent)
        tau, alpha = np.asarray(tau, dtype=float), float(alpha)
        v = alpha * tau ** q
        with np.errstate(divide="ignore"):
            d1 = -alpha * q * tau ** (q - 1)
            d2 = alpha * q * (q - 1) * tau ** (q - 2)
        return v, d1, d2

    # -- algebra on polynomial kinds ----------------------------------------

    def derivative(self) -> "TimeFunction":
        coeffs = self.poly_coefficients()
        return TimeFunction.polynomial(*[k * c for k, c in enumerate(coeffs)][1:])

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind == POLYNOMIAL:
            return {"kind": POLYNOMIAL,
                    "coefficients": [rational_str(c) for c in self.coefficients]}
        if self.kind == CONSTANT:
            return {"kind": CONSTANT, "value": rational_str(self.coefficients[0])}
        key = "power" if self.kind == RATIONAL_POLE else "exponent"
        return {"kind": self.kind, "amplitude": rational_str(self.amplitude),
                "pole": rational_str(self.pole), key: rational_str(self.exponent)}

    @classmethod
    def from_dict(cls, d: dict) -> "TimeFunction":
        kind = d.get("kind")
        if kind == POLYNOMIAL:
            return cls.polynomial(*d.get("coefficients", []))
        if kind == CONSTANT:
            return cls.constant(d["value"])
        if kind == RATIONAL_POLE:
            return cls.rational_pole(d["amplitude"], d["pole"], d.get("power", 1))
        if kind == POWER_RAMP:
            return cls.power_ramp(d["amplitude"], d["pole"], d["exponent"])
        raise ParameterError(f"unknown time-function kind {kind!r}")


def eval_time_function(tf: TimeFunction, t):
    """Value and first two derivatives of ``tf`` at ``t``."""
    return tf.evaluate(t)


def mass_ode_solve(c0, c1, c2) -> TimeFunction:
    """The b(t) that balances the potential-form mass equation for a = c0 + c1 t.

    Integrating b' = 3 a' a gives ``c2 + 3 c0 c1 t + (3/2) c1^2 t^2``.
    """
    c0, c1, c2 = as_rational(c0), as_rational(c1), as_rational(c2)
    return TimeFunction.polynomial(c2, 3 * c0 * c1, Fraction(3, 2) * c1 * c1)


ZERO = TimeFunction.polynomial()
