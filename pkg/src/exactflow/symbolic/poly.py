"""Sparse multivariate polynomials in (x, y, z, t) over the rationals."""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType

from .._rational import as_rational

VARIABLES = ("x", "y", "z", "t")
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_UNIT = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def _grlex_key(mono):
    # descending total degree, then descending exponents with x > y > z > t
    return (-sum(mono), tuple(-e for e in mono))


class MultiPoly:
    """Immutable polynomial stored as ``{(i, j, k, l): coefficient}``.

    Zero coefficients are never stored, so equal polynomials have equal maps
    and the zero polynomial has an empty map.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != 4 or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial exponents {mono}")
            c = as_rational(coeff)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self._terms = clean

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p._terms = terms
        return p

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls._raw({})

    @classmethod
    def const(cls, c) -> "MultiPoly":
        c = as_rational(c)
        return cls._raw({(0, 0, 0, 0): c} if c else {})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls._raw({_UNIT[_INDEX[name]]: Fraction(1)})

    @classmethod
    def in_t(cls, coefficients) -> "MultiPoly":
        """Univariate polynomial ``sum(c_k t^k)``."""
        return cls({(0, 0, 0, k): c for k, c in enumerate(coefficients)})

    # -- access ---------------------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, mono) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def monomials(self):
        return sorted(self._terms, key=_grlex_key)

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, r) -> "MultiPoly":
        r = as_rational(r)
        if not r:
            return MultiPoly.zero()
        return MultiPoly._raw({m: c * r for m, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MultiPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result, base = MultiPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, var: str) -> "MultiPoly":
        i = _INDEX[var]
        out = {}
        for mono, c in self._terms.items():
            e = mono[i]
            if e:
                m = list(mono)
                m[i] = e - 1
                out[tuple(m)] = c * e
        return MultiPoly._raw(out)

    def evaluate(self, x=0, y=0, z=0, t=0):
        """Exact for rational arguments; float arguments give a float."""
        vals = (x, y, z, t)
        total = 0
        for mono, c in self._terms.items():
            term = c
            for v, e in zip(vals, mono):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    # -- comparison and printing ------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        try:
            return self._terms == MultiPoly.const(other)._terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for mono in self.monomials():
            c = self._terms[mono]
            factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(VARIABLES, mono) if e]
            mag = abs(c)
            cstr = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if factors:
                body = "*".join(factors if mag == 1 else [cstr] + factors)
            else:
                body = cstr
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self})"


X, Y, Z, T = (MultiPoly.var(v) for v in VARIABLES)
COORDS = (X, Y, Z)


def poly_arith(a: MultiPoly, b, op: str) -> MultiPoly:
    """``op`` is one of ``add``, ``sub``, ``mul`` or ``scale`` (b a rational)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown operation {op!r}")


def poly_diff(p: MultiPoly, var: str) -> MultiPoly:
    return p.diff(var)
