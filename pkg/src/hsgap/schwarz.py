"""Schwarz functions of the three interface families.

For each family this module evaluates S(z, t) together with dS/dz and dS/dt,
the implicit level function g(x, y, t) of the curve (g < 0 inside), the normal
velocity of the interface, and the singularity inventory with cut directions.

Branch cuts
-----------
* ellipse: the focal segment [-d, d];
* Cassini oval: the segment [-b, b] and the two rays from +-i q to +-i inf,
  q = sqrt(a^4 - b^4) / b.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .core import Family, InterfaceState, Region, Singularity, SingularityKind
from .errors import (
    CutError,
    IndeterminateDirectionError,
    PreconditionError,
    SingularPointError,
)
from .specfun import sqrt_branch, sqrt_segment

__all__ = [
    "SchwarzEval",
    "NormalVelocity",
    "schwarz_eval",
    "level_function",
    "in_region",
    "on_cut",
    "normal_velocity",
    "normal_velocity_detail",
    "singularities",
    "cut_direction",
    "cassini_q",
]

_TWO_PI = 2.0 * math.pi
# relative distance below which a point counts as sitting on a cut or branch point
_CUT_EPS = 1e-13


@dataclass(frozen=True)
class SchwarzEval:
    s: complex
    s_z: complex
    s_t: complex


def cassini_q(state: InterfaceState) -> float:
    """Height q of the exterior branch points +-i q of the Cassini Schwarz function."""
    a, b = state.a, state.b
    return math.sqrt(a ** 4 - b ** 4) / b


def _branch_points(state):
    fam = state.family
    if fam is Family.CIRCLE:
        return [0j]
    if fam.is_ellipse:
        return [complex(state.d), complex(-state.d)] if state.d > 0.0 else []
    q = cassini_q(state)
    return [complex(state.b), complex(-state.b), 1j * q, -1j * q]


def on_cut(state: InterfaceState, z: complex) -> bool:
    """True when ``z`` lies on one of the family's branch cuts (branch points excluded)."""
    z = complex(z)
    fam = state.family
    tol = _CUT_EPS * state.scale
    if fam is Family.CIRCLE:
        return False
    if fam.is_ellipse:
        return state.d > 0.0 and abs(z.imag) <= tol and abs(z.real) < state.d - tol
    q = cassini_q(state)
    if abs(z.imag) <= tol and abs(z.real) < state.b - tol:
        return True
    return abs(z.real) <= tol and abs(z.imag) > q + tol


def _check_point(state, z):
    tol = _CUT_EPS * state.scale
    for zp in _branch_points(state):
        if abs(z - zp) <= tol:
            raise SingularPointError(f"z = {z} is a singular point of the Schwarz function")
    if on_cut(state, z):
        raise CutError(f"z = {z} lies on a branch cut; request a one-sided limit instead")


def _cassini_numerator(b, q, z):
    # b * sqrt(z^2 + q^2) with cuts on the vertical rays beyond +-i q
    return b * sqrt_branch(z - 1j * q, 0.5 * math.pi) * sqrt_branch(z + 1j * q, -0.5 * math.pi)


def schwarz_eval(state: InterfaceState, z: complex) -> SchwarzEval:
    """S, dS/dz and dS/dt at ``z`` for the given state (rates taken from ``state``).

    Raises
    ------
    CutError
        ``z`` lies on a branch cut.
    SingularPointError
        ``z`` is a branch point or the circle's pole.
    """
    z = complex(z)
    _check_point(state, z)
    fam = state.family
    a, b = state.a, state.b
    if fam is Family.CIRCLE:
        s = a * a / z
        return SchwarzEval(s, -s / z, 2.0 * a * state.a_dot / z)
    if fam.is_ellipse:
        D = state.d2
        A = a * a + b * b
        ab = a * b
        r = sqrt_segment(z, -state.d, state.d)
        s = (A * z - 2.0 * ab * r) / D
        s_z = (A - 2.0 * ab * z / r) / D
        A_t = 2.0 * (a * state.a_dot + b * state.b_dot)
        ab_t = state.a_dot * b + a * state.b_dot
        D_t = state.d2_dot
        s_t = (A_t * z - 2.0 * ab_t * r + ab * D_t / r) / D - s * D_t / D
        return SchwarzEval(s, s_z, s_t)
    q = cassini_q(state)
    N = _cassini_numerator(b, q, z)
    R = sqrt_segment(z, -b, b)
    s = N / R
    s_z = s * (b * b * z / (N * N) - z / (R * R))
    s_t = 2.0 * a ** 3 * state.a_dot / (N * R)
    return SchwarzEval(s, s_z, s_t)


def level_function(state: InterfaceState, x, y):
    """Implicit curve function ``(g, g_x, g_y, g_t)``; g < 0 inside, g = 0 on the interface.

    Works on scalars or arrays.
    """
    a, b = state.a, state.b
    fam = state.family
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if fam is Family.CIRCLE:
        g = x * x + y * y - a * a
        return g, 2.0 * x, 2.0 * y, np.full_like(g, -2.0 * a * state.a_dot)
    if fam.is_ellipse:
        g = x * x / (a * a) + y * y / (b * b) - 1.0
        g_t = -2.0 * x * x * state.a_dot / a ** 3 - 2.0 * y * y * state.b_dot / b ** 3
        return g, 2.0 * x / (a * a), 2.0 * y / (b * b), g_t
    r2 = x * x + y * y
    b2 = b * b
    g = r2 * r2 - 2.0 * b2 * (x * x - y * y) + b2 * b2 - a ** 4
    return g, 4.0 * x * (r2 - b2), 4.0 * y * (r2 + b2), np.full_like(g, -4.0 * a ** 3 * state.a_dot)


def in_region(state: InterfaceState, z, region) -> bool:
    """Whether ``z`` lies in the closure of ``region`` (interior Omega_2 or exterior Omega_1)."""
    z = complex(z)
    g = float(level_function(state, z.real, z.imag)[0])
    # relative slack so boundary points belong to both closures
    scale = {Family.CIRCLE: state.a ** 2, Family.CASSINI: state.a ** 4}.get(state.family, 1.0)
    slack = 1e-9 * scale
    if Region.from_index(region) is Region.INTERIOR:
        return g <= slack
    return g >= -slack


@dataclass(frozen=True)
class NormalVelocity:
    """Normal velocity from the Schwarz function and its geometric cross-check."""

    value: float
    imag_residue: float
    geometric: float
    normal: complex


def normal_velocity_detail(state: InterfaceState, z: complex, tol: float = 1e-9) -> NormalVelocity:
    """Outward normal velocity at a boundary point, with diagnostics.

    The Schwarz form is v_n = -i S_t / sqrt(4 S_z).  On the interface
    S_z = conj(tau)^2 for the unit tangent tau = i n, so the root is fixed as the
    one equal to -i conj(n), with n the outward normal taken from the level
    function.  Then v_n = Re(S_t n) / 2 and the geometric value -g_t / |grad g|
    is reported alongside.
    """
    z = complex(z)
    ev = schwarz_eval(state, z)
    if abs(ev.s - z.conjugate()) > tol * max(1.0, state.scale):
        raise PreconditionError(f"z = {z} is not on the interface (|S - conj z| = {abs(ev.s - z.conjugate()):.3g})")
    _, gx, gy, gt = level_function(state, z.real, z.imag)
    grad = complex(float(gx), float(gy))
    if grad == 0:
        raise PreconditionError("level-function gradient vanishes; normal undefined")
    n = grad / abs(grad)
    root = -1j * n.conjugate()
    # keep whichever root of S_z is closer to the geometric choice
    sq = cmath.sqrt(ev.s_z)
    if abs(sq - root) > abs(sq + root):
        sq = -sq
    vn = -1j * ev.s_t / (2.0 * sq)
    return NormalVelocity(vn.real, vn.imag, float(-gt) / abs(grad), n)


def normal_velocity(state: InterfaceState, z: complex, tol: float = 1e-9) -> float:
    """Outward normal velocity of the interface at boundary point ``z``.

    Raises :class:`PreconditionError` when ``z`` is off the interface.
    """
    return normal_velocity_detail(state, z, tol).value


# ---------------------------------------------------------------------------
# singularities
# ---------------------------------------------------------------------------

def _arg(w):
    return cmath.phase(complex(w))


def cut_direction(s: Singularity, fluids=None, t=None) -> list:
    """Directions of the cut leaving a singular point, as angles in [0, 2 pi).

    General position: phi = pi - 2 (arg xi + arg z_a_dot).  Stationary
    reciprocal point: phi = pi - 2 arg C0.  Inert or informational entries give
    an empty list.  The mobilities do not enter; ``fluids`` and ``t`` are
    accepted for interface symmetry.
    """
    if s.inert or s.kind is None:
        return []
    if s.kind is SingularityKind.GENERAL_POSITION:
        if s.z_a_dot == 0 or s.xi_at == 0:
            raise IndeterminateDirectionError(f"singular point {s.location} has a vanishing local coefficient")
        phi = math.pi - 2.0 * (_arg(s.xi_at) + _arg(s.z_a_dot))
    else:
        if s.c0 == 0:
            raise IndeterminateDirectionError(f"C0 vanishes at {s.location}; cut direction indeterminate")
        phi = math.pi - 2.0 * _arg(s.c0)
    phi = math.fmod(phi, _TWO_PI)
    if phi < 0.0:
        phi += _TWO_PI
    if _TWO_PI - phi < 1e-12:
        phi = 0.0
    return [phi]


def _with_angles(s: Singularity) -> Singularity:
    return replace(s, cut_angles=tuple(cut_direction(s)))


def singularities(state: InterfaceState, gap=None, t: float | None = None) -> list:
    """Singular points of the Schwarz function with local data and cut angles.

    ``gap`` supplies h'/h for the reciprocal coefficient C0 of the Cassini
    family; it may be omitted for the other families.
    """
    t = state.t if t is None else t
    fam = state.family
    a, b = state.a, state.b
    if fam is Family.CIRCLE:
        return [Singularity(0j, None, complex(a * a), 0j, 0j, (), Region.INTERIOR, False, "simple pole")]
    if fam.is_ellipse:
        d = state.d
        if d == 0.0:
            return []
        coef = -2.0 * a * b / state.d2
        d_dot = state.d2_dot / (2.0 * d)
        inert = fam is Family.CONFOCAL_ELLIPSE or state.d2_dot == 0.0
        out = []
        for sign in (1.0, -1.0):
            za = sign * d
            # S ~ xi(z) sqrt(z - za) with xi = coef * sqrt(z + za)
            xi = coef * cmath.sqrt(2.0 * za)
            out.append(_with_angles(Singularity(
                complex(za), SingularityKind.GENERAL_POSITION, xi, complex(sign * d_dot), 0j, (),
                Region.INTERIOR, inert, "no strength: d^2 is constant" if inert else "",
            )))
        return out
    if gap is None:
        raise PreconditionError("Cassini singularities need the gap schedule for C0")
    ratio = gap.ratio(t)
    q = cassini_q(state)
    c = b * q
    out = []
    for sign in (1.0, -1.0):
        za = 1j * sign * q
        # S = [b sqrt(z + za) / sqrt(z^2 - b^2)] * sqrt(z - za)
        xi = b * cmath.sqrt(2.0 * za) / sqrt_segment(za, -b, b)
        za_dot = 1j * sign * 2.0 * a ** 3 * state.a_dot / (b * c)
        out.append(_with_angles(Singularity(
            za, SingularityKind.GENERAL_POSITION, xi, za_dot, 0j, (), Region.EXTERIOR,
        )))
    for sign in (1.0, -1.0):
        za = sign * b
        # S = xi_r(z) / sqrt(z - za), xi_r = sqrt(b^2 z^2 + c^2) / sqrt(z + za)
        root = cmath.sqrt(2.0 * za)
        xi_r = a * a / root
        xi_r_dot = 2.0 * a * state.a_dot / root
        c0 = xi_r_dot + ratio * xi_r
        out.append(_with_angles(Singularity(
            complex(za), SingularityKind.STATIONARY_RECIPROCAL, xi_r, 0j, c0, (), Region.INTERIOR,
        )))
    return out
