import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from exactflow.blowup import BlowupVerdict, classify
from exactflow.fields import (ABCFlow, CompressibleIsothermal, CompressiblePoly, IncompressibleA,
                              IncompressibleB, Pressureless, TimeFunction)

from conftest import random_family

ZERO = TimeFunction.constant(0)


def test_theorem_one_global():
    rng = random.Random(0)
    for _ in range(50):
        assert classify(random_family("CompressiblePoly", rng)).status == "global"
        assert classify(random_family("CompressibleIsothermal", rng)).status == "global"
    assert classify(ABCFlow()).status == "global"


def test_rational_pole_value_divergence():
    v = classify(IncompressibleA(a=(TimeFunction.rational_pole(1, 2, 1), ZERO, ZERO), b=ZERO))
    assert (v.status, v.T, v.mechanism) == ("finite-time-blowup", 2, "value-divergence")


def test_power_ramp_derivative_divergence():
    v = classify(IncompressibleA(a=(TimeFunction.power_ramp(1, 1, Fraction(1, 2)), ZERO, ZERO),
                                 b=ZERO))
    assert (v.status, v.T, v.mechanism) == ("finite-time-blowup", 1, "derivative-divergence")


def test_pressureless_collapse():
    v = classify(Pressureless(a0=(1, 1, 1), a1=(-1, 0, 0)))
    assert (v.status, v.T, v.mechanism) == ("finite-time-blowup", 1, "density-collapse")
    assert classify(Pressureless(a0=(1, 1, 1), a1=(1, 0, 2))).status == "global"


def test_earliest_singularity_wins():
    a = (TimeFunction.power_ramp(1, 5, Fraction(1, 3)), TimeFunction.rational_pole(2, 3),
         TimeFunction.polynomial(1, 1))
    v = classify(IncompressibleB(a=a, b=ZERO))
    assert (v.T, v.mechanism, v.source) == (3, "value-divergence", "a2")
    v = classify(Pressureless(a0=(2, 1, 3), a1=(-1, -2, -1)))
    assert (v.T, v.source) == (Fraction(1, 2), "a2")


def test_pressure_pole_counts():
    v = classify(IncompressibleA(b=TimeFunction.rational_pole(1, 4)))
    assert (v.status, v.T, v.source) == ("finite-time-blowup", 4, "b")


def test_pole_at_or_before_start():
    v = classify(IncompressibleA(a=(TimeFunction.rational_pole(1, 0), ZERO, ZERO)))
    assert v.status == "undefined-at-start"
    v = classify(IncompressibleA(a=(TimeFunction.rational_pole(1, -2), ZERO, ZERO)))
    assert v.status == "undefined-at-start"


def test_zero_amplitude_pole_is_harmless():
    assert classify(IncompressibleA(a=(TimeFunction.rational_pole(0, 1), ZERO, ZERO))).status \
        == "global"


@given(st.lists(st.fractions(-5, 5, max_denominator=6), min_size=1, max_size=5))
def test_polynomials_never_blow_up(coeffs):
    tf = TimeFunction.polynomial(*coeffs)
    assert classify(IncompressibleA(a=(tf, tf, tf), b=tf)).status == "global"


@pytest.mark.parametrize("p", [Fraction(1), Fraction(1, 2), Fraction(3)])
def test_velocity_grows_without_bound(p):
    T = Fraction(2)
    fam = IncompressibleA(a=(TimeFunction.rational_pole(1, T, p), ZERO, ZERO))
    assert classify(fam).T == T
    speeds = [float(np.linalg.norm(fam.evaluate(float(T) - 10.0 ** -k, [0, 0, 0]).u))
              for k in range(1, 8)]
    assert all(b > a for a, b in zip(speeds, speeds[1:]))
    assert speeds[-1] > 1e3 ** float(p) - 1


def test_power_ramp_velocity_bounded():
    fam = IncompressibleA(a=(TimeFunction.power_ramp(1, 1, Fraction(1, 2)), ZERO, ZERO))
    speeds = [float(np.linalg.norm(fam.evaluate(1 - 10.0 ** -k, [0, 0, 0]).u)) for k in range(8)]
    assert max(speeds) <= 1.0


def test_verdict_invariant():
    with pytest.raises(ValueError):
        BlowupVerdict("finite-time-blowup", Fraction(0), "value-divergence")
    with pytest.raises(ValueError):
        BlowupVerdict("finite-time-blowup", Fraction(1), None)
    assert classify(CompressiblePoly()).to_dict() == {"status": "global", "T": None,
                                                       "mechanism": None, "source": None}


def test_unknown_object():
    with pytest.raises(TypeError):
        classify(object())


def test_isothermal_with_any_parameters():
    assert classify(CompressibleIsothermal(K=3, C=-2, c0=1, c1=5)).status == "global"
