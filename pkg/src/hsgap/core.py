"""Domain types shared by every module.

All types are frozen dataclasses; callables stored in them (gap law, focal
schedule, f(t)) are pure functions of time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Mapping

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, PreconditionError, TopologyError


class Family(str, Enum):
    CIRCLE = "circle"
    CONFOCAL_ELLIPSE = "confocal_ellipse"
    VARIABLE_FOCUS_ELLIPSE = "variable_focus_ellipse"
    CASSINI = "cassini"

    @property
    def is_ellipse(self) -> bool:
        return self in (Family.CONFOCAL_ELLIPSE, Family.VARIABLE_FOCUS_ELLIPSE)


class Region(Enum):
    """Fluid regions.  ``INTERIOR`` is Omega_2 (j=2), ``EXTERIOR`` is Omega_1 (j=1)."""

    EXTERIOR = 1
    INTERIOR = 2

    @property
    def index(self) -> int:
        return self.value

    @classmethod
    def from_index(cls, j) -> "Region":
        if isinstance(j, Region):
            return j
        if j == 1:
            return cls.EXTERIOR
        if j == 2:
            return cls.INTERIOR
        raise PreconditionError(f"region index must be 1 (exterior) or 2 (interior), got {j!r}")


class SingularityKind(Enum):
    GENERAL_POSITION = "general_position"
    STATIONARY_RECIPROCAL = "stationary_reciprocal"


# ---------------------------------------------------------------------------
# schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GapSchedule:
    """Gap width h(t) and its rate.

    ``spec`` holds the serializable description the schedule was built from.
    """

    h: Callable[[float], float]
    h_dot: Callable[[float], float]
    h0: float
    spec: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def linear(cls, h0: float, rate: float) -> "GapSchedule":
        h0 = float(h0)
        rate = float(rate)
        if not h0 > 0.0:
            raise DomainError(f"h0 must be positive, got {h0}")
        return cls(
            h=lambda t: h0 + rate * t,
            h_dot=lambda t: rate,
            h0=h0,
            spec={"kind": "linear", "rate": rate},
        )

    @classmethod
    def table(cls, samples) -> "GapSchedule":
        """Cubic-spline gap law through ``(t, h)`` samples; the first sample must be t=0."""
        arr = np.asarray(samples, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
            raise DomainError("table samples must be a list of at least two [t, h] pairs")
        if arr[0, 0] != 0.0:
            raise DomainError("table samples must start at t = 0")
        if np.any(np.diff(arr[:, 0]) <= 0.0):
            raise DomainError("table sample times must be strictly increasing")
        if np.any(arr[:, 1] <= 0.0):
            raise DomainError("table gap widths must be positive")
        spline = CubicSpline(arr[:, 0], arr[:, 1], bc_type="not-a-knot" if len(arr) > 3 else "natural")
        deriv = spline.derivative()
        return cls(
            h=lambda t: float(spline(t)),
            h_dot=lambda t: float(deriv(t)),
            h0=float(arr[0, 1]),
            spec={"kind": "table", "samples": [[float(t), float(h)] for t, h in arr]},
        )

    def width(self, t: float) -> float:
        """h(t), raising :class:`DomainError` when the gap has closed."""
        h = self.h(t)
        if not h > 0.0:
            raise DomainError(f"gap width h({t}) = {h} is not positive")
        return h

    def ratio(self, t: float) -> float:
        """h_dot(t) / h(t)."""
        return self.h_dot(t) / self.width(t)


@dataclass(frozen=True)
class FocalSchedule:
    """Prescribed d^2(t) for the variable-focus ellipse."""

    value: Callable[[float], float]
    rate: Callable[[float], float]
    spec: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def exponential(cls, d0_sq: float, lam: float) -> "FocalSchedule":
        d0_sq = float(d0_sq)
        lam = float(lam)
        return cls(
            value=lambda t: d0_sq * math.exp(lam * t),
            rate=lambda t: lam * d0_sq * math.exp(lam * t),
            spec={"kind": "exp", "lambda": lam},
        )


@dataclass(frozen=True)
class PressureOffset:
    """The spatially constant pressure f(t); zero unless configured."""

    value: Callable[[float], float] = lambda t: 0.0
    spec: Mapping[str, Any] = field(default_factory=lambda: {"kind": "zero"}, compare=False)

    @classmethod
    def zero(cls) -> "PressureOffset":
        return cls()

    @classmethod
    def constant(cls, c: float) -> "PressureOffset":
        c = float(c)
        return cls(value=lambda t: c, spec={"kind": "constant", "value": c})

    def __call__(self, t: float) -> float:
        return self.value(t)


# ---------------------------------------------------------------------------
# fluids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FluidPair:
    """Viscosities and how the mobilities k_j are obtained.

    ``mode="derived"`` gives k_j = h(t)^2 / (12 nu_j); ``mode="constant"`` uses
    the fixed ``k1``, ``k2``.
    """

    nu1: float
    nu2: float
    mode: str = "derived"
    k1: float | None = None
    k2: float | None = None

    def __post_init__(self):
        if not (self.nu1 > 0.0 and self.nu2 > 0.0):
            raise DomainError("viscosities must be positive")
        if self.mode not in ("derived", "constant"):
            raise DomainError(f"unknown mobility mode {self.mode!r}")
        if self.mode == "constant":
            if self.k1 is None or self.k2 is None or not (self.k1 > 0.0 and self.k2 > 0.0):
                raise DomainError("constant mobility mode needs positive k1 and k2")

    @classmethod
    def constant(cls, k1: float, k2: float, nu1: float = 1.0, nu2: float = 1.0) -> "FluidPair":
        return cls(nu1=nu1, nu2=nu2, mode="constant", k1=float(k1), k2=float(k2))

    def viscosity(self, j) -> float:
        return self.nu1 if Region.from_index(j) is Region.EXTERIOR else self.nu2


def mobility(fluids: FluidPair, gap: GapSchedule, j, t: float) -> float:
    """Mobility k_j(t) of fluid j (1 = exterior, 2 = interior)."""
    region = Region.from_index(j)
    if fluids.mode == "constant":
        return fluids.k1 if region is Region.EXTERIOR else fluids.k2
    h = gap.width(t)
    return h * h / (12.0 * fluids.viscosity(region))


# ---------------------------------------------------------------------------
# interface state
# ---------------------------------------------------------------------------

_REL = 1e-12


@dataclass(frozen=True)
class InterfaceState:
    """Shape parameters of Gamma(t) and their time derivatives.

    ``b`` equals ``a`` and ``d`` is zero for circles.  For ellipses ``d`` is
    the half focal distance; for Cassini ovals ``d`` is unused (0).
    """

    family: Family
    a: float
    b: float
    d: float = 0.0
    a_dot: float = 0.0
    b_dot: float = 0.0
    d2_dot: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        a, b, d = self.a, self.b, self.d
        if not (math.isfinite(a) and a > 0.0):
            raise DomainError(f"semi-axis a must be positive, got {a}")
        if fam is Family.CIRCLE:
            return
        if not (math.isfinite(b) and b > 0.0):
            raise DomainError(f"b must be positive, got {b}")
        if fam.is_ellipse:
            if not a > b:
                raise DomainError(f"ellipse needs a > b > 0, got a={a}, b={b}")
            if abs(d * d - (a * a - b * b)) > _REL * a * a + 1e-300:
                raise DomainError("ellipse focal parameter violates d^2 = a^2 - b^2")
            if fam is Family.CONFOCAL_ELLIPSE and self.d2_dot != 0.0:
                raise DomainError("confocal ellipse must have zero rate of d^2")
        elif fam is Family.CASSINI:
            if not a > b:
                raise TopologyError(f"Cassini oval with a={a} <= b={b} is not a single curve", t=self.t)
            if self.b_dot != 0.0:
                raise DomainError("Cassini family requires b_dot = 0")

    @property
    def d2(self) -> float:
        return self.d * self.d

    @property
    def scale(self) -> float:
        """A characteristic length of the interface."""
        if self.family is Family.CASSINI:
            return math.sqrt(self.a * self.a + self.b * self.b)
        return self.a

    @classmethod
    def circle(cls, a, a_dot=0.0, t=0.0):
        return cls(Family.CIRCLE, a, a, 0.0, a_dot, a_dot, 0.0, t)

    @classmethod
    def ellipse(cls, a, b, *, confocal, a_dot=0.0, b_dot=0.0, d2_dot=0.0, t=0.0):
        fam = Family.CONFOCAL_ELLIPSE if confocal else Family.VARIABLE_FOCUS_ELLIPSE
        return cls(fam, a, b, math.sqrt(max(a * a - b * b, 0.0)), a_dot, b_dot, d2_dot, t)

    @classmethod
    def cassini(cls, a, b, a_dot=0.0, t=0.0):
        return cls(Family.CASSINI, a, b, 0.0, a_dot, 0.0, 0.0, t)


# ---------------------------------------------------------------------------
# singularities and distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Singularity:
    location: complex
    kind: SingularityKind | None
    xi_at: complex
    z_a_dot: complex
    c0: complex
    cut_angles: tuple
    region: Region
    inert: bool = False
    note: str = ""


@dataclass(frozen=True)
class Segment:
    p: complex
    q: complex

    @property
    def length(self) -> float:
        return abs(self.q - self.p)

    def point(self, s):
        return self.p + (self.q - self.p) * (np.asarray(s) / self.length)

    @property
    def direction(self) -> complex:
        return (self.q - self.p) / self.length


@dataclass(frozen=True)
class RayPair:
    """Two rays ``start1 + s*direction`` and ``start2 - s*direction``, s >= 0.

    The second ray is the mirror image of the first, which is how symmetric
    exterior cuts come out of the Cassini family.
    """

    start1: complex
    start2: complex
    direction: complex

    def point(self, s, which: int = 1):
        s = np.asarray(s)
        if which == 1:
            return self.start1 + self.direction * s
        return self.start2 - self.direction * s


@dataclass(frozen=True)
class Distribution:
    """Sink/source density on a cut.

    ``density(s)`` is the jump of the normal derivative of p_j across the
    support at arclength ``s`` from the start point, so that
    ``Laplacian p_j = (1/k_j) h'/h + density * delta_support``.  The density
    of each ray in a :class:`RayPair` is the same function of ``s``.
    """

    region: Region
    support: Segment | RayPair
    density: Callable
    label: str = ""

    def integrate(self, weight: Callable | None = None, tol: float = 1e-12, upper: float | None = None):
        """Integral of ``weight(point) * density`` over the support.

        ``tol`` is relative to the L1 norm of the integrand.  Inverse
        square-root endpoint singularities are removed by substitution:
        s = L (1 + sin theta) / 2 on segments and s = u^2 on rays.  Ray
        supports need a finite ``upper`` arclength.
        """
        from .specfun import quad_adaptive

        if isinstance(self.support, Segment):
            L = self.support.length
            seg = self.support

            def integrand(theta):
                s = 0.5 * L * (1.0 + math.sin(theta))
                val = self.density(s) * 0.5 * L * math.cos(theta)
                if weight is not None:
                    val *= weight(complex(seg.point(s)))
                return val

            pieces = [(integrand, -0.5 * math.pi, 0.5 * math.pi)]
        else:
            if upper is None:
                raise PreconditionError("ray supports have infinite length; pass a finite 'upper'")
            pieces = []
            for which in (1, 2):
                def integrand(u, which=which):
                    s = u * u
                    val = 2.0 * u * self.density(s)
                    if weight is not None:
                        val *= weight(complex(self.support.point(s, which)))
                    return val

                pieces.append((integrand, 0.0, math.sqrt(float(upper))))
        total = 0.0
        for f, lo, hi in pieces:
            nodes, wts = np.polynomial.legendre.leggauss(64)
            mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
            norm = half * sum(w * abs(f(mid + half * x)) for x, w in zip(nodes, wts))
            total += quad_adaptive(f, lo, hi, tol * max(norm, 1e-300))
        return total

    def flux(self, tol: float = 1e-12) -> float:
        return self.integrate(None, tol)


# ---------------------------------------------------------------------------
# scenario
# ---------------------------------------------------------------------------

DEFAULT_TOLERANCES = {
    "schwarz": 1e-10,
    "boundary": 1e-6,
    "poisson_exact": 1e-8,
    "poisson_ratio": 0.2,
    "volume": 1e-10,
    "volume_ode": 1e-8,
    "density_jump": 1e-4,
    "moments": 1e-4,
    "cut_direction": 1e-3,
    "ode": 1e-12,
}

DEFAULT_SAMPLES = {
    "boundary": 64,
    "schwarz": 256,
    "poisson_grid": 41,
    "density": 9,
    "figure": 512,
}


@dataclass(frozen=True)
class Scenario:
    """A complete problem: initial shape, gap law, fluids and numerics."""

    family: Family
    a0: float
    b0: float
    gap: GapSchedule
    fluids: FluidPair
    d2_schedule: FocalSchedule | None = None
    f_of_t: PressureOffset = field(default_factory=PressureOffset)
    tolerances: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    samples: Mapping[str, int] = field(default_factory=lambda: dict(DEFAULT_SAMPLES))
    name: str = ""

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        has_sched = self.d2_schedule is not None
        if has_sched != (fam is Family.VARIABLE_FOCUS_ELLIPSE):
            raise PreconditionError("d2_schedule is required for, and only for, the variable-focus ellipse")
        if has_sched:
            d0_sq = self.a0 ** 2 - self.b0 ** 2
            if abs(self.d2_schedule.value(0.0) - d0_sq) > _REL * self.a0 ** 2:
                raise PreconditionError("d2_schedule(0) must equal a0^2 - b0^2")
        tol = dict(DEFAULT_TOLERANCES)
        tol.update(self.tolerances)
        object.__setattr__(self, "tolerances", tol)
        smp = dict(DEFAULT_SAMPLES)
        smp.update(self.samples)
        object.__setattr__(self, "samples", smp)
        self.state0  # validates the initial shape

    @property
    def h0(self) -> float:
        return self.gap.h0

    @property
    def state0(self) -> InterfaceState:
        """Initial geometry (rates are filled in by ``solutions.evolve``)."""
        fam = self.family
        if fam is Family.CIRCLE:
            return InterfaceState.circle(self.a0)
        if fam.is_ellipse:
            return InterfaceState.ellipse(self.a0, self.b0, confocal=fam is Family.CONFOCAL_ELLIPSE)
        return InterfaceState.cassini(self.a0, self.b0)

    def mobility(self, j, t: float) -> float:
        return mobility(self.fluids, self.gap, j, t)
