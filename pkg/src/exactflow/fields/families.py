"""Exact solution families as evaluable fields with closed-form jets.

Every family maps a time ``t`` (scalar or array of shape ``(...)``) and points
``x`` of shape ``(..., 3)`` to a :class:`FluidState` or :class:`FieldJet`
whose arrays carry the same leading shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import ClassVar

import numpy as np

from .._rational import as_rational, rational_str
from ..errors import DomainError, InputError, ParameterError, VacuumError
from .timefunc import TimeFunction, mass_ode_solve

# velocity-gradient patterns: rotational (antisymmetric) and sum-form (symmetric)
S_FORM = np.array([[0.0, 1.0, -1.0], [-1.0, 0.0, 1.0], [1.0, -1.0, 0.0]])
M_FORM = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
# quadratic forms with x^T Q x = x^2+y^2+z^2-(xy+yz+xz) and -(x^2+...+xy+yz+xz)
Q_DIFF = np.array([[1.0, -0.5, -0.5], [-0.5, 1.0, -0.5], [-0.5, -0.5, 1.0]])
Q_SUM = -np.array([[1.0, 0.5, 0.5], [0.5, 1.0, 0.5], [0.5, 0.5, 1.0]])
ONES = np.ones(3)

COMPRESSIBLE = "compressible"
INCOMPRESSIBLE = "incompressible"
PRESSURELESS = "pressureless"


@dataclass(frozen=True)
class FluidState:
    rho: np.ndarray
    u: np.ndarray
    phi: np.ndarray
    P: np.ndarray


@dataclass(frozen=True)
class FieldJet:
    """Field values plus every derivative a residual needs.

    ``grad_u[..., i, j]`` is ``d u_i / d x_j``.
    """

    rho: np.ndarray
    u: np.ndarray
    phi: np.ndarray
    P: np.ndarray
    grad_rho: np.ndarray
    grad_u: np.ndarray
    u_t: np.ndarray
    phi_t: np.ndarray
    grad_phi: np.ndarray
    lap_u: np.ndarray
    rho_t: np.ndarray

    @property
    def state(self) -> FluidState:
        return FluidState(self.rho, self.u, self.phi, self.P)

    @property
    def div_u(self) -> np.ndarray:
        return np.trace(self.grad_u, axis1=-2, axis2=-1)

    @property
    def vorticity(self) -> np.ndarray:
        g = self.grad_u
        return np.stack([g[..., 2, 1] - g[..., 1, 2],
                         g[..., 0, 2] - g[..., 2, 0],
                         g[..., 1, 0] - g[..., 0, 1]], axis=-1)

    def slots(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _points(t, x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (3,):
        raise InputError(f"points must have trailing dimension 3, got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InputError("non-finite coordinates")
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise InputError("non-finite time")
    t = np.broadcast_to(t, x.shape[:-1])
    return t, x


def _quad(x, Q):
    return np.einsum("...i,ij,...j->...", x, Q, x)


def _vec3(values) -> np.ndarray:
    return np.stack(np.broadcast_arrays(*values), axis=-1)


class SolutionFamily:
    """Shared evaluate/jet plumbing; concrete families fill in the hooks."""

    tag: ClassVar[str] = ""
    regime: ClassVar[str] = ""
    linear_velocity: ClassVar[bool] = True
    rotational: ClassVar[bool] = True

    def time_functions(self) -> dict[str, TimeFunction]:
        return {}

    def domain_end(self):
        """Earliest time at which some coefficient is undefined, or ``None``."""
        times = [tf.singular_time for tf in self.time_functions().values()
                 if tf.singular_time is not None]
        return min(times) if times else None

    def evaluate(self, t, x) -> FluidState:
        t, x = _points(t, x)
        return self._fields(t, x, jet=False)

    def evaluate_jet(self, t, x) -> FieldJet:
        t, x = _points(t, x)
        return self._fields(t, x, jet=True)

    def _fields(self, t, x, jet):
        raise NotImplementedError

    def to_dict(self) -> dict:
        out = {"tag": self.tag}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, TimeFunction):
                v = v.to_dict()
            elif isinstance(v, tuple) and v and isinstance(v[0], TimeFunction):
                v = [tf.to_dict() for tf in v]
            elif isinstance(v, tuple):
                v = [rational_str(q) for q in v]
            elif isinstance(v, Fraction):
                v = rational_str(v)
            elif v is None:
                continue
            out[f.name] = v
        return out


# -- linear-velocity families ----------------------------------------------


class _LinearVelocity(SolutionFamily):
    """u = a(t) + B x with potential phi = x^T Q x + L(t).x + b(t)."""

    def _velocity_matrix(self) -> np.ndarray:
        raise NotImplementedError

    def _potential_matrix(self) -> np.ndarray:
        raise NotImplementedError

    def _linear_coupling(self) -> np.ndarray:
        """Matrix G in L = -(a' + G a)."""
        return self._velocity_matrix()

    def _translation(self, t):
        """Per-axis (a, a', a'') arrays of shape (..., 3)."""
        raise NotImplementedError

    def _bfun(self) -> TimeFunction:
        raise NotImplementedError

    def _potential(self, t, x):
        B = self._velocity_matrix()
        G = self._linear_coupling()
        Q = self._potential_matrix()
        a, da, dda = self._translation(t)
        b, db, _ = self._bfun().evaluate(t)
        u = a + x @ B.T
        L = -(da + a @ G.T)
        L_t = -(dda + da @ G.T)
        phi = _quad(x, Q) + np.sum(L * x, axis=-1) + b
        grad_phi = 2.0 * x @ Q + L
        phi_t = np.sum(L_t * x, axis=-1) + db
        u_t = np.broadcast_to(da, u.shape)
        return u, B, u_t, phi, grad_phi, phi_t


class _RotationalCompressible(_LinearVelocity):
    regime = COMPRESSIBLE

    def a_function(self) -> TimeFunction:
        return self.a if self.a is not None else TimeFunction.polynomial(self.c0, self.c1)

    def b_function(self) -> TimeFunction:
        return self.b if self.b is not None else mass_ode_solve(self.c0, self.c1, self.c2)

    def time_functions(self):
        return {"a": self.a_function(), "b": self.b_function()}

    def _velocity_matrix(self):
        return float(self.C) * S_FORM

    def _potential_matrix(self):
        return float(self.C) ** 2 * Q_DIFF

    def _translation(self, t):
        a, da, dda = self.a_function().evaluate(t)
        return (np.multiply.outer(a, ONES), np.multiply.outer(da, ONES),
                np.multiply.outer(dda, ONES))

    def _bfun(self):
        return self.b_function()


@dataclass(frozen=True)
class CompressiblePoly(_RotationalCompressible):
    """Rotational compressible solution for gamma > 1.

    ``a`` and ``b`` default to ``c0 + c1 t`` and the balancing b(t); passing
    explicit time functions builds deliberately perturbed variants.
    """

    gamma: Fraction = Fraction(2)
    K: Fraction = Fraction(1)
    C: Fraction = Fraction(1)
    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)
    a: TimeFunction | None = None
    b: TimeFunction | None = None

    tag: ClassVar[str] = "CompressiblePoly"

    def __post_init__(self):
        for name in ("gamma", "K", "C", "c0", "c1", "c2"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if not self.gamma > 1:
            raise ParameterError("CompressiblePoly requires gamma > 1")
        if not self.K > 0:
            raise ParameterError("K must be positive")

    def _fields(self, t, x, jet):
        g, K = float(self.gamma), float(self.K)
        n = 1.0 / (g - 1.0)
        u, B, u_t, poly, grad_phi, phi_t = self._potential(t, x)
        phi = np.maximum(poly, 0.0)
        rho = ((g - 1.0) / (K * g) * phi) ** n
        P = K * rho ** g
        if not jet:
            return FluidState(rho, u, phi, P)
        if np.any(rho <= 0.0):
            raise VacuumError("jet requested on the vacuum set")
        dlog = n / phi
        return FieldJet(
            rho=rho, u=u, phi=phi, P=P,
            grad_rho=(rho * dlog)[..., None] * grad_phi,
            grad_u=np.broadcast_to(B, u.shape + (3,)),
            u_t=u_t, phi_t=phi_t, grad_phi=grad_phi,
            lap_u=np.zeros_like(u), rho_t=rho * dlog * phi_t)


@dataclass(frozen=True)
class CompressibleIsothermal(_RotationalCompressible):
    """Rotational compressible solution for gamma = 1.

    ``ln rho = (1/K)[C^2 q(x) - a'(x+y+z) + b]``. With
    ``exponent="printed"`` the 1/K factor is dropped, which only balances
    momentum for K = 1.
    """

    K: Fraction = Fraction(1)
    C: Fraction = Fraction(1)
    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)
    a: TimeFunction | None = None
    b: TimeFunction | None = None
    exponent: str = "corrected"

    tag: ClassVar[str] = "CompressibleIsothermal"
    gamma: ClassVar[Fraction] = Fraction(1)

    def __post_init__(self):
        for name in ("K", "C", "c0", "c1", "c2"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if not self.K > 0:
            raise ParameterError("K must be positive")
        if self.exponent not in ("corrected", "printed"):
            raise ParameterError("exponent must be 'corrected' or 'printed'")

    def _fields(self, t, x, jet):
        K = float(self.K)
        scale = 1.0 if self.exponent == "corrected" else K
        u, B, u_t, poly, grad_poly, poly_t = self._potential(t, x)
        phi = scale * poly
        rho = np.exp(phi / K)
        P = K * rho
        if not jet:
            return FluidState(rho, u, phi, P)
        if np.any(rho <= 0.0):
            raise VacuumError("density underflowed to zero")
        grad_phi = scale * grad_poly
        phi_t = scale * poly_t
        return FieldJet(
            rho=rho, u=u, phi=phi, P=P,
            grad_rho=(rho / K)[..., None] * grad_phi,
            grad_u=np.broadcast_to(B, u.shape + (3,)),
            u_t=u_t, phi_t=phi_t, grad_phi=grad_phi,
            lap_u=np.zeros_like(u), rho_t=rho / K * phi_t)


class _Incompressible(_LinearVelocity):
    regime = INCOMPRESSIBLE

    def time_functions(self):
        return {"a1": self.a[0], "a2": self.a[1], "a3": self.a[2], "b": self.b}

    def _translation(self, t):
        parts = [tf.evaluate(t) for tf in self.a]
        return tuple(_vec3([p[k] for p in parts]) for k in range(3))

    def _bfun(self):
        return self.b

    def _check(self):
        object.__setattr__(self, "C", as_rational(self.C))
        object.__setattr__(self, "rho0", as_rational(self.rho0))
        if len(self.a) != 3:
            raise ParameterError("need three translation functions a1, a2, a3")
        object.__setattr__(self, "a", tuple(self.a))
        if not self.rho0 > 0:
            raise ParameterError("reference density must be positive")

    def _fields(self, t, x, jet):
        u, B, u_t, phi, grad_phi, phi_t = self._potential(t, x)
        rho0 = float(self.rho0)
        rho = np.full(u.shape[:-1], rho0)
        P = rho0 * phi
        if not jet:
            return FluidState(rho, u, phi, P)
        return FieldJet(
            rho=rho, u=u, phi=phi, P=P,
            grad_rho=np.zeros_like(u),
            grad_u=np.broadcast_to(B, u.shape + (3,)),
            u_t=u_t, phi_t=phi_t, grad_phi=grad_phi,
            lap_u=np.zeros_like(u), rho_t=np.zeros_like(rho))


def _zero_triple():
    return (TimeFunction.polynomial(),) * 3


@dataclass(frozen=True)
class IncompressibleA(_Incompressible):
    """u = a_i(t) + C(y-z, -x+z, x-y) with its balancing pressure.

    The default pressure uses linear coefficients ``-(a_i' + (C S a)_i)``.
    ``pressure="printed"`` uses ``-(a_i' + C(a_j + a_k))`` instead, which
    leaves a momentum residual unless ``a`` vanishes.
    """

    C: Fraction = Fraction(1)
    a: tuple = field(default_factory=_zero_triple)
    b: TimeFunction = field(default_factory=TimeFunction.polynomial)
    rho0: Fraction = Fraction(1)
    pressure: str = "corrected"

    tag: ClassVar[str] = "IncompressibleA"

    def __post_init__(self):
        self._check()
        if self.pressure not in ("corrected", "printed"):
            raise ParameterError("pressure must be 'corrected' or 'printed'")

    def _velocity_matrix(self):
        return float(self.C) * S_FORM

    def _linear_coupling(self):
        form = S_FORM if self.pressure == "corrected" else M_FORM
        return float(self.C) * form

    def _potential_matrix(self):
        return float(self.C) ** 2 * Q_DIFF


@dataclass(frozen=True)
class IncompressibleB(_Incompressible):
    """u = a_i(t) + C(y+z, x+z, x+y); curl-free despite the family name."""

    C: Fraction = Fraction(1)
    a: tuple = field(default_factory=_zero_triple)
    b: TimeFunction = field(default_factory=TimeFunction.polynomial)
    rho0: Fraction = Fraction(1)

    tag: ClassVar[str] = "IncompressibleB"
    rotational: ClassVar[bool] = False

    def __post_init__(self):
        self._check()

    def _velocity_matrix(self):
        return float(self.C) * M_FORM

    def _potential_matrix(self):
        return float(self.C) ** 2 * Q_SUM


# -- ABC flow ----------------------------------------------------------------


@dataclass(frozen=True)
class ABCFlow(SolutionFamily):
    """Steady Arnold-Beltrami-Childress flow with Bernoulli pressure.

    Since curl u = u, (u.grad)u = grad(|u|^2/2) and phi = p0 - |u|^2/2
    balances the steady momentum equation for any amplitudes.
    """

    A: Fraction = Fraction(1)
    B: Fraction = Fraction(1)
    C: Fraction = Fraction(1)
    rho0: Fraction = Fraction(1)
    p0: Fraction = Fraction(0)

    tag: ClassVar[str] = "ABCFlow"
    regime: ClassVar[str] = INCOMPRESSIBLE
    linear_velocity: ClassVar[bool] = False

    def __post_init__(self):
        for name in ("A", "B", "C", "rho0", "p0"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if not self.rho0 > 0:
            raise ParameterError("reference density must be positive")

    def _fields(self, t, x, jet):
        A, B, C = float(self.A), float(self.B), float(self.C)
        X, Y, Z = x[..., 0], x[..., 1], x[..., 2]
        sx, cx, sy, cy, sz, cz = (np.sin(X), np.cos(X), np.sin(Y), np.cos(Y),
                                  np.sin(Z), np.cos(Z))
        u = np.stack([A * sz + C * cy, B * sx + A * cz, C * sy + B * cx], axis=-1)
        phi = float(self.p0) - 0.5 * np.sum(u * u, axis=-1)
        rho0 = float(self.rho0)
        rho = np.full(phi.shape, rho0)
        P = rho0 * phi
        if not jet:
            return FluidState(rho, u, phi, P)
        zero = np.zeros_like(X)
        grad_u = np.stack([
            np.stack([zero, -C * sy, A * cz], axis=-1),
            np.stack([B * cx, zero, -A * sz], axis=-1),
            np.stack([-B * sx, C * cy, zero], axis=-1),
        ], axis=-2)
        grad_phi = -np.einsum("...i,...ij->...j", u, grad_u)
        return FieldJet(
            rho=rho, u=u, phi=phi, P=P,
            grad_rho=np.zeros_like(u), grad_u=grad_u,
            u_t=np.zeros_like(u), phi_t=np.zeros_like(phi), grad_phi=grad_phi,
            lap_u=-u, rho_t=np.zeros_like(rho))


# -- pressureless expansion/collapse -----------------------------------------


PROFILES = ("gaussian", "compact-bump", "constant")


def _profile(name, s):
    """Profile value and gradient at scaled coordinates ``s`` (..., 3)."""
    r2 = np.sum(s * s, axis=-1)
    if name == "gaussian":
        f = np.exp(-r2)
        return f, -2.0 * s * f[..., None]
    if name == "compact-bump":
        inside = r2 < 1.0
        w = np.where(inside, 1.0 - r2, 0.0)
        return w * w, -4.0 * s * w[..., None]
    return np.ones_like(r2), np.zeros_like(s)


def _triple(v):
    out = tuple(as_rational(q) for q in v)
    if len(out) != 3:
        raise ParameterError("expected three per-axis values")
    return out


@dataclass(frozen=True)
class Pressureless(SolutionFamily):
    """K = 0 flow with rho = f(s)/prod(a_i), s_i = (x_i+d_i)/a_i, a_i = a_i0 + a_i1 t."""

    a0: tuple = (Fraction(1),) * 3
    a1: tuple = (Fraction(0),) * 3
    d: tuple = (Fraction(0),) * 3
    profile: str = "gaussian"

    tag: ClassVar[str] = "Pressureless"
    regime: ClassVar[str] = PRESSURELESS
    rotational: ClassVar[bool] = False

    def __post_init__(self):
        for name in ("a0", "a1", "d"):
            object.__setattr__(self, name, _triple(getattr(self, name)))
        if not all(q > 0 for q in self.a0):
            raise ParameterError("Pressureless requires a_i0 > 0")
        if self.profile not in PROFILES:
            raise ParameterError(f"profile must be one of {PROFILES}")

    def collapse_time(self) -> Fraction | None:
        times = [-a / b for a, b in zip(self.a0, self.a1) if b < 0]
        return min(times) if times else None

    def domain_end(self):
        return self.collapse_time()

    def _fields(self, t, x, jet):
        a0 = np.array([float(q) for q in self.a0])
        a1 = np.array([float(q) for q in self.a1])
        d = np.array([float(q) for q in self.d])
        a = a0 + np.multiply.outer(t, a1)
        if np.any(a <= 0.0):
            raise DomainError("scale factor a_i(t) reached zero")
        xi = x + d
        s = xi / a
        rate = a1 / a
        vol = np.prod(a, axis=-1)
        f, df = _profile(self.profile, s)
        rho = f / vol
        u = rate * xi
        zero = np.zeros_like(rho)
        if not jet:
            return FluidState(rho, u, zero, zero)
        grad_u = rate[..., :, None] * np.eye(3)
        grad_rho = df / a / vol[..., None]
        # ds_j/dt = -s_j a_j'/a_j
        rho_t = (np.sum(df * (-s * rate), axis=-1) - f * np.sum(rate, axis=-1)) / vol
        return FieldJet(
            rho=rho, u=u, phi=zero, P=zero, grad_rho=grad_rho, grad_u=grad_u,
            u_t=-rate * rate * xi, phi_t=zero, grad_phi=np.zeros_like(u),
            lap_u=np.zeros_like(u), rho_t=rho_t)


FAMILIES = {cls.tag: cls for cls in (CompressiblePoly, CompressibleIsothermal,
                                     IncompressibleA, IncompressibleB, ABCFlow,
                                     Pressureless)}


def evaluate(family: SolutionFamily, t, x) -> FluidState:
    """Closed-form field values of ``family`` at ``(t, x)``."""
    return family.evaluate(t, x)


def evaluate_jet(family: SolutionFamily, t, x) -> FieldJet:
    """Field values plus closed-form derivatives.

    Raises :class:`VacuumError` for compressible families when any point has
    zero density.
    """
    return family.evaluate_jet(t, x)


def family_from_dict(d: dict) -> SolutionFamily:
    d = dict(d)
    tag = d.pop("tag", None)
    if tag not in FAMILIES:
        raise ParameterError(f"unknown family tag {tag!r}")
    cls = FAMILIES[tag]
    kwargs = {}
    for key, value in d.items():
        if key in ("a", "b") and isinstance(value, dict):
            value = TimeFunction.from_dict(value)
        elif key == "a" and isinstance(value, list):
            value = tuple(TimeFunction.from_dict(v) for v in value)
        elif key in ("a0", "a1", "d"):
            value = tuple(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for {tag}: {exc}") from None


def perturbed(family, **changes):
    """Copy of a frozen family with some parameters replaced."""
    return replace(family, **changes)
