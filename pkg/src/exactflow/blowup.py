"""Global existence versus finite-time blowup, read off the time-function grammar."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._rational import rational_str
from .fields.families import (ABCFlow, IncompressibleA, IncompressibleB, Pressureless,
                              _RotationalCompressible)
from .fields.timefunc import POWER_RAMP, RATIONAL_POLE, TimeFunction

GLOBAL = "global"
FINITE_TIME = "finite-time-blowup"
UNDEFINED_AT_START = "undefined-at-start"

VALUE_DIVERGENCE = "value-divergence"
DERIVATIVE_DIVERGENCE = "derivative-divergence"
DENSITY_COLLAPSE = "density-collapse"


@dataclass(frozen=True)
class BlowupVerdict:
    status: str
    T: Fraction | None = None
    mechanism: str | None = None
    source: str | None = None  # which coefficient triggers the verdict

    def __post_init__(self):
        if self.status == FINITE_TIME and (self.T is None or self.T <= 0 or not self.mechanism):
            raise ValueError("finite-time verdicts need T > 0 and a mechanism")

    def to_dict(self) -> dict:
        return {"status": self.status,
                "T": None if self.T is None else rational_str(self.T),
                "mechanism": self.mechanism, "source": self.source}


def _singularity(tf: TimeFunction):
    """``(T, mechanism)`` of a pole kind with nonzero amplitude, else ``None``."""
    if tf.kind == RATIONAL_POLE and tf.amplitude != 0:
        return tf.pole, VALUE_DIVERGENCE
    if tf.kind == POWER_RAMP and tf.amplitude != 0:
        return tf.pole, DERIVATIVE_DIVERGENCE
    return None


def _earliest(named):
    hits = [(T, mech, name) for name, tf in named if (s := _singularity(tf)) for T, mech in [s]]
    if not hits:
        return BlowupVerdict(GLOBAL)
    # ties keep declaration order, so a_1 wins over a_2 at the same T
    T, mech, name = min(hits, key=lambda h: h[0])
    if T <= 0:
        return BlowupVerdict(UNDEFINED_AT_START, T, mech, name)
    return BlowupVerdict(FINITE_TIME, T, mech, name)


def classify(family) -> BlowupVerdict:
    """Blowup verdict for any configured family.

    Incompressible families scan ``a_1, a_2, a_3`` and then ``b``; a pole in
    ``b`` makes the pressure diverge even though the velocity stays smooth.
    """
    if isinstance(family, (_RotationalCompressible, ABCFlow)):
        return BlowupVerdict(GLOBAL)
    if isinstance(family, (IncompressibleA, IncompressibleB)):
        named = [(f"a{i + 1}", tf) for i, tf in enumerate(family.a)] + [("b", family.b)]
        return _earliest(named)
    if isinstance(family, Pressureless):
        T = family.collapse_time()
        if T is None:
            return BlowupVerdict(GLOBAL)
        i = min((i for i in range(3) if family.a1[i] < 0),
                key=lambda i: -family.a0[i] / family.a1[i])
        return BlowupVerdict(FINITE_TIME, Fraction(T), DENSITY_COLLAPSE, f"a{i + 1}")
    raise TypeError(f"cannot classify {type(family).__name__}")
