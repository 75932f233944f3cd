"""Shared family builders and hypothesis settings."""

import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from exactflow.fields import (ABCFlow, CompressibleIsothermal, CompressiblePoly, IncompressibleA,
                              IncompressibleB, Pressureless, TimeFunction)

settings.register_profile("exactflow", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exactflow")


def rational(rng: random.Random, lo=-5, hi=5, max_den=6) -> Fraction:
    """Uniform-ish rational in [lo, hi] with a small denominator."""
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def poly_tf(rng, degree=2):
    return TimeFunction.polynomial(*(rational(rng) for _ in range(degree + 1)))


def random_family(tag: str, rng: random.Random):
    """A random member of a verifiable family with rational parameters."""
    if tag == "CompressiblePoly":
        return CompressiblePoly(gamma=rng.choice([Fraction(3, 2), Fraction(2), Fraction(3)]),
                                K=rng.choice([1, 2]), C=rational(rng), c0=rational(rng),
                                c1=rational(rng), c2=rational(rng))
    if tag == "CompressibleIsothermal":
        return CompressibleIsothermal(K=rng.choice([1, 2]) * Fraction(rng.randint(1, 3), 2),
                                      C=rational(rng), c0=rational(rng), c1=rational(rng),
                                      c2=rational(rng))
    if tag == "IncompressibleA":
        return IncompressibleA(C=rational(rng), a=tuple(poly_tf(rng) for _ in range(3)),
                               b=poly_tf(rng))
    if tag == "IncompressibleB":
        return IncompressibleB(C=rational(rng), a=tuple(poly_tf(rng) for _ in range(3)),
                               b=poly_tf(rng))
    raise KeyError(tag)


SYMBOLIC_TAGS = ("CompressiblePoly", "CompressibleIsothermal", "IncompressibleA",
                 "IncompressibleB")


def reference_families():
    """One representative per family, all valid on t in [0, 2]."""
    half = Fraction(1, 2)
    tf = TimeFunction.polynomial
    return {
        "CompressiblePoly": CompressiblePoly(gamma=2, K=1, C=1, c0=1, c1=half, c2=20),
        "CompressiblePoly_gamma_3_2": CompressiblePoly(gamma=Fraction(3, 2), K=2, C=half,
                                                       c0=0, c1=Fraction(1, 4), c2=20),
        "CompressibleIsothermal": CompressibleIsothermal(K=2, C=1, c0=1, c1=half, c2=1),
        "IncompressibleA": IncompressibleA(C=2, a=(tf(1, 2, 3), tf(0, 1), tf(-1, 0, 1)), b=tf(1)),
        "IncompressibleA_pole": IncompressibleA(
            C=1, a=(TimeFunction.rational_pole(1, 3, 2), TimeFunction.power_ramp(2, 4, half),
                    tf(1)), b=tf(0, 1)),
        "IncompressibleB": IncompressibleB(C=1, a=(tf(1, 1), tf(2), tf(0, 0, 1)), b=tf(0)),
        "ABCFlow": ABCFlow(A=1, B=1, C=1),
        "Pressureless": Pressureless(a0=(1, 2, 1), a1=(half, 1, 2), d=(0, 1, -1),
                                     profile="gaussian"),
    }


@pytest.fixture(params=sorted(reference_families()))
def any_family(request):
    return reference_families()[request.param]


_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
