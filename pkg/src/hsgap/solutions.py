"""Closed-form evolutions, pressures, complex potentials and sink densities.

Every family shares one representation of the pressure,

    p_j = P / k_j + f(t),    P = Re G(z) + c(t) + (h'/h) |z|^2 / 4,

with G' = -(S_t + (h'/h) S) / 2.  P vanishes on the interface, so continuity
of pressure holds for any pair of mobilities, and the normal velocity is
v_n = -dP/dn.  The complex potential is W_j = (G + c) / k_j + f, whose real
part is the reduced pressure p~_j = p_j - (h'/h)|z|^2 / (4 k_j).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .core import (
    Distribution,
    Family,
    InterfaceState,
    RayPair,
    Region,
    Scenario,
    Segment,
)
from .errors import (
    AccuracyError,
    BranchError,
    CutError,
    DomainError,
    PreconditionError,
    SingularPointError,
    TopologyError,
)
from .schwarz import cassini_q, in_region, level_function, on_cut, schwarz_eval, _branch_points
from .specfun import ellip_complete, ode_solve, quad_adaptive, root_find, sqrt_segment

__all__ = [
    "PressureSample",
    "AlphaTriple",
    "evolve",
    "boundary_sample",
    "area",
    "shoelace_area",
    "cassini_area",
    "reduced_pressure",
    "pressure",
    "pressure_field",
    "complex_potential",
    "alpha_triple",
    "cassini_coefficients",
    "distributions",
]


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

def cassini_area(a: float, b: float) -> float:
    """Area 2 a^2 E(b^2/a^2) enclosed by the Cassini oval; 2 b^2 for the lemniscate a = b."""
    if a == b:
        return 2.0 * b * b
    return 2.0 * a * a * ellip_complete(b * b / (a * a))[1]


def area(state: InterfaceState) -> float:
    """Area enclosed by the interface."""
    fam = state.family
    if fam is Family.CIRCLE:
        return math.pi * state.a ** 2
    if fam.is_ellipse:
        return math.pi * state.a * state.b
    return cassini_area(state.a, state.b)


def boundary_sample(state: InterfaceState, n: int) -> np.ndarray:
    """``n`` points on the interface at equally spaced parameter angles, starting at theta = 0.

    Ellipses use the parametric angle, Cassini ovals the polar angle with
    r^2 = b^2 cos 2t + sqrt(b^4 cos^2 2t + a^4 - b^4).
    """
    n = int(n)
    if n < 4:
        raise PreconditionError(f"need at least 4 boundary points, got {n}")
    theta = 2.0 * np.pi * np.arange(n) / n
    a, b = state.a, state.b
    fam = state.family
    if fam is Family.CIRCLE:
        return a * np.exp(1j * theta)
    if fam.is_ellipse:
        return a * np.cos(theta) + 1j * b * np.sin(theta)
    c2 = a ** 4 - b ** 4
    cos2 = np.cos(2.0 * theta)
    r2 = b * b * cos2 + np.sqrt(b ** 4 * cos2 * cos2 + c2)
    return np.sqrt(r2) * np.exp(1j * theta)


def _shoelace(z):
    x, y = z.real, z.imag
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def shoelace_area(state: InterfaceState, n: int = 4096, extrapolate: bool = True) -> float:
    """Polygon area of ``boundary_sample(state, n)``.

    The polygon error is O(n^-2); with ``extrapolate`` the n and n/2 results
    are Richardson-combined, which removes that term.
    """
    fine = _shoelace(boundary_sample(state, n))
    if not extrapolate:
        return fine
    coarse = _shoelace(boundary_sample(state, n // 2))
    return (4.0 * fine - coarse) / 3.0


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------

def _ellipse_axes(m, D):
    """Semi-axes with a b = m and a^2 - b^2 = D."""
    a2 = 0.5 * (D + math.sqrt(D * D + 4.0 * m * m))
    return math.sqrt(a2), m / math.sqrt(a2)


def _cassini_rate(a, b, ratio):
    K, E = ellip_complete(b * b / (a * a))
    return -ratio * a * E / (2.0 * K)


def _cassini_root(scenario, A_target, t):
    b = scenario.b0
    if not A_target > 2.0 * b * b:
        raise TopologyError(f"Cassini oval pinches off (a <= b) before t = {t}", t=t)
    lo = max(b, math.sqrt(A_target / math.pi))
    hi = math.sqrt(A_target / 2.0)
    return root_find(lambda a: cassini_area(a, b) - A_target, lo, hi, tol=1e-15)


def _cassini_ode(scenario, t, tol):
    b = scenario.b0
    gap = scenario.gap

    def rhs(s, y):
        a = float(y)
        if not a > b:
            raise TopologyError(f"Cassini oval pinches off (a <= b) near t = {s}", t=s)
        return _cassini_rate(a, b, gap.ratio(s))

    return float(ode_solve(rhs, float(scenario.a0), 0.0, float(t), tol))


def evolve(scenario: Scenario, t: float, method: str = "both") -> InterfaceState:
    """Interface state at time ``t`` with analytic rates.

    Parameters
    ----------
    scenario : Scenario
    t : float
    method : {"both", "root", "ode"}
        Cassini only.  ``"root"`` solves the area conservation law
        2 a^2 E(b^2/a^2) h = const, ``"ode"`` integrates
        da/dt = -(h'/h) a E / (2K), and ``"both"`` runs the two and raises
        :class:`AccuracyError` if they differ by more than the ``volume_ode``
        tolerance.

    Raises
    ------
    DomainError
        h(t) <= 0.
    TopologyError
        A Cassini oval would split into two ovals.
    """
    t = float(t)
    gap = scenario.gap
    h = gap.width(t)
    ratio = gap.h_dot(t) / h
    fam = scenario.family
    a0, b0, h0 = scenario.a0, scenario.b0, gap.h0
    if fam is Family.CIRCLE:
        a = a0 * math.sqrt(h0 / h)
        return InterfaceState.circle(a, a_dot=-0.5 * a * ratio, t=t)
    if fam.is_ellipse:
        m = a0 * b0 * h0 / h
        m_dot = -m * ratio
        if fam is Family.CONFOCAL_ELLIPSE:
            D, D_dot = a0 * a0 - b0 * b0, 0.0
        else:
            D, D_dot = scenario.d2_schedule.value(t), scenario.d2_schedule.rate(t)
            if not D > 0.0:
                raise DomainError(f"d^2({t}) = {D} must be positive")
        a, b = _ellipse_axes(m, D)
        s = a * a + b * b
        a_dot = (a * D_dot + 2.0 * b * m_dot) / (2.0 * s)
        b_dot = (2.0 * a * m_dot - b * D_dot) / (2.0 * s)
        return InterfaceState(fam, a, b, math.sqrt(D), a_dot, b_dot, D_dot, t)
    if method not in ("both", "root", "ode"):
        raise PreconditionError(f"unknown evolution method {method!r}")
    A_target = cassini_area(a0, b0) * h0 / h
    tol = scenario.tolerances
    if t == 0.0:
        a = a0
    elif method == "ode":
        a = _cassini_ode(scenario, t, 0.01 * tol["volume_ode"])
    else:
        a = _cassini_root(scenario, A_target, t)
        if method == "both":
            a_ode = _cassini_ode(scenario, t, 0.01 * tol["volume_ode"])
            if abs(a_ode - a) > tol["volume_ode"]:
                raise AccuracyError(
                    f"Cassini evolution paths disagree at t={t}: root {a!r}, ode {a_ode!r}",
                    estimate=a, error=abs(a_ode - a),
                )
    if not a > b0:
        raise TopologyError(f"Cassini oval pinches off at t = {t}", t=t)
    return InterfaceState.cassini(a, b0, a_dot=_cassini_rate(a, b0, ratio), t=t)


# ---------------------------------------------------------------------------
# pressure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PressureSample:
    p: float
    p_tilde: float
    region: Region
    point: complex


def _ellipse_terms(state, ratio):
    """(Q, lam, c) with G = -Q z^2 / 4 - lam z sqrt(z^2 - d^2), P = Re G + c + ratio |z|^2 / 4."""
    a, b = state.a, state.b
    ab = a * b
    if state.family is Family.CIRCLE:
        return 0.0, 0.0, 0.5 * a * state.a_dot
    D, D_dot = state.d2, state.d2_dot
    A = a * a + b * b
    m_dot = state.a_dot * b + a * state.b_dot
    # Q = (A' + ratio A - A D'/D) / D and c = -ab (a' b - a b') / (2D), rewritten
    # with 2(a a' - b b') = D' so nothing cancels as d -> 0
    Q = D_dot / A - D * m_dot / (A * ab) - A * D_dot / (D * D)
    lam = 0.5 * ab * D_dot / (D * D)
    c = -0.5 * ab * (ab * D_dot / D - m_dot) / A
    return Q, lam, c


def _cassini_complete(state):
    return ellip_complete(state.b ** 2 / state.a ** 2)


def reduced_pressure(state: InterfaceState, ratio: float, x, y):
    """The mobility-free pressure P(x, y); p_j = P / k_j + f.

    ``ratio`` is h'/h at ``state.t``.  Vectorized over ``x`` and ``y``.  P is
    continuous across all cuts, so points on a cut return the common limit.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if state.family is Family.CASSINI:
        K, E = _cassini_complete(state)
        return _kernels.cassini_reduced_pressure(np.abs(x), np.abs(y), state.a, state.b, state.a_dot, K, E)
    Q, lam, c = _ellipse_terms(state, ratio)
    r2 = x * x + y * y
    P = -0.25 * Q * (x * x - y * y) + c + 0.25 * ratio * r2
    if lam != 0.0:
        z = x + 1j * y
        P = P - lam * np.real(z * sqrt_segment(z, -state.d, state.d, strict=False))
    return P


def _check_region(state, z, region, one_sided):
    if not in_region(state, z, region):
        raise PreconditionError(f"point {z} is not in region {region.name.lower()}")
    # circle and confocal pressures are quadratics: the Schwarz cuts and poles leave no trace
    if one_sided or state.family in (Family.CIRCLE, Family.CONFOCAL_ELLIPSE):
        return
    tol = 1e-13 * state.scale
    for zp in _branch_points(state):
        if abs(z - zp) <= tol:
            raise SingularPointError(f"point {z} is a singular point; pass one_sided=True for the limit")
    if on_cut(state, z):
        raise CutError(f"point {z} lies on a cut; pass one_sided=True for the limit")


def pressure(scenario: Scenario, state: InterfaceState, j, z, *, one_sided: bool = False) -> PressureSample:
    """Pressure of fluid ``j`` (1 = exterior, 2 = interior) at point ``z``.

    The pressure is continuous across cuts; ``one_sided=True`` accepts points on
    cuts or at branch points and returns that limit.
    """
    region = Region.from_index(j)
    z = complex(z)
    _check_region(state, z, region, one_sided)
    t = state.t
    ratio = scenario.gap.ratio(t)
    k = scenario.mobility(region, t)
    f = scenario.f_of_t(t)
    P = float(reduced_pressure(state, ratio, z.real, z.imag))
    quad = 0.25 * ratio * abs(z) ** 2
    return PressureSample(P / k + f, (P - quad) / k + f, region, z)


def pressure_field(scenario: Scenario, state: InterfaceState, j, x, y, mask: bool = True):
    """Vectorized p_j on arrays ``x``, ``y``; NaN outside region j when ``mask``."""
    region = Region.from_index(j)
    t = state.t
    ratio = scenario.gap.ratio(t)
    k = scenario.mobility(region, t)
    p = reduced_pressure(state, ratio, x, y) / k + scenario.f_of_t(t)
    if mask:
        g = level_function(state, x, y)[0]
        outside = g > 0.0 if region is Region.INTERIOR else g < 0.0
        p = np.where(outside, np.nan, p)
    return p


# ---------------------------------------------------------------------------
# complex potential
# ---------------------------------------------------------------------------

def _cassini_G(state, ratio, z, tol=1e-12):
    """G(z) for the Cassini family by integrating G' from the vertex sqrt(a^2 + b^2).

    The path stays clear of the cuts: for Re z > 0 it runs vertically then
    horizontally; otherwise it crosses the imaginary axis at height +-q/2.
    """
    zr = math.sqrt(state.a ** 2 + state.b ** 2)
    q = cassini_q(state)

    def gprime(w):
        ev = schwarz_eval(state, w)
        return -0.5 * (ev.s_t + ratio * ev.s)

    if z.real > 0.0:
        nodes = [complex(zr), complex(zr, z.imag), z]
    else:
        hs = 0.5 * q if z.imag >= 0.0 else -0.5 * q
        nodes = [complex(zr), complex(zr, hs), complex(z.real, hs), z]
    total = complex(-0.25 * ratio * zr * zr)
    for p0, p1 in zip(nodes[:-1], nodes[1:]):
        if p1 == p0:
            continue
        dz = p1 - p0
        # tolerance relative to the size of the increment
        seg_tol = tol * max(1.0, abs(dz) * max(abs(gprime(p0)), abs(gprime(p1))))
        re = quad_adaptive(lambda s: (gprime(p0 + s * dz) * dz).real, 0.0, 1.0, seg_tol)
        im = quad_adaptive(lambda s: (gprime(p0 + s * dz) * dz).imag, 0.0, 1.0, seg_tol)
        total += complex(re, im)
    return total


def complex_potential(scenario: Scenario, state: InterfaceState, j, z) -> complex:
    """W_j(z) with dW_j/dz = -(S_t + (h'/h) S) / (2 k_j) and Re W_j = p~_j.

    Ellipses and circles use the closed form; the Cassini family integrates
    dW/dz along a cut-avoiding path from the vertex z = sqrt(a^2 + b^2), where
    the imaginary part is normalized to zero.  The circle potential is constant.
    """
    region = Region.from_index(j)
    z = complex(z)
    _check_region(state, z, region, one_sided=False)
    t = state.t
    ratio = scenario.gap.ratio(t)
    k = scenario.mobility(region, t)
    f = scenario.f_of_t(t)
    if state.family is Family.CASSINI:
        G = _cassini_G(state, ratio, z)
        c = 0.0
    else:
        Q, lam, c = _ellipse_terms(state, ratio)
        G = -0.25 * Q * z * z
        if lam != 0.0:
            G -= lam * z * sqrt_segment(z, -state.d, state.d)
    return (G + c) / k + f


# ---------------------------------------------------------------------------
# Cassini auxiliaries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaTriple:
    """Addition-theorem angle and its auxiliaries at a point.

    ``alpha1``, ``alpha2`` are the real parts of sqrt(z^2 - b^2) and
    sqrt(b^2 z^2 + a^4 - b^4) in the first quadrant (Cassini), or
    ``alpha_ell`` = Re sqrt(z^2 - d^2) for the ellipse.  ``clamp`` is how far
    the complex-form sine left [-1, 1] before clamping, and ``residue`` is the
    mismatch between that sine and sin(alpha) (NaN where the complex form is
    0/0).
    """

    alpha: float
    alpha1: float
    alpha2: float
    alpha_ell: float = float("nan")
    clamp: float = 0.0
    residue: float = 0.0


def alpha_triple(state: InterfaceState, z) -> AlphaTriple:
    """Auxiliary angle data at ``z``; Cassini (alpha, alpha1, alpha2) or ellipse alpha_ell.

    Raises
    ------
    BranchError
        The complex-form sine exceeds 1 by more than 1e-9.
    """
    z = complex(z)
    if state.family.is_ellipse:
        if on_cut(state, z):
            raise CutError(f"point {z} lies on a cut")
        r = sqrt_segment(z, -state.d, state.d)
        # report the first-quadrant root: nonnegative real part
        return AlphaTriple(float("nan"), float("nan"), float("nan"), alpha_ell=abs(r.real))
    if state.family is not Family.CASSINI:
        raise PreconditionError("alpha_triple applies to the Cassini and ellipse families")
    if on_cut(state, z):
        raise CutError(f"point {z} lies on a cut")
    a, b = state.a, state.b
    X, Y = abs(z.real), abs(z.imag)
    alpha, al1, be1, al2, be2 = (float(v[0]) for v in _kernels.cassini_alpha_numpy(np.array([X]), np.array([Y]), a, b))
    # complex form: sin(alpha) = 2 a^2 Re(w s1 conj(s2)) / (b^2 |w|^4 + c^2 (2 Re w^2 - b^2))
    c2 = a ** 4 - b ** 4
    w = complex(X, Y)
    s1 = complex(al1, be1)
    s2 = complex(al2, be2)
    num = a * a * (w * s1 * s2.conjugate() + w.conjugate() * s1.conjugate() * s2)
    den = b * b * abs(w) ** 4 + c2 * (2.0 * (w * w).real - b * b)
    scale = b * b * abs(w) ** 4 + c2 * (2.0 * abs(w) ** 2 + b * b)
    clamp = 0.0
    residue = float("nan")
    if abs(den) > 1e-6 * scale:
        sine = num / den
        excess = abs(sine.real) - 1.0
        if excess > 1e-9:
            raise BranchError(f"arcsin argument {sine.real!r} at z={z} is outside [-1, 1]")
        clamp = max(excess, 0.0)
        residue = max(abs(sine.imag), abs(max(-1.0, min(1.0, sine.real)) - math.sin(alpha)))
    return AlphaTriple(alpha, al1, al2, clamp=clamp, residue=residue)


def cassini_coefficients(state: InterfaceState, ratio: float):
    """(B1, B2) in S_t + (h'/h) S = (B1 z^2 + B2) / (sqrt(z^2 - b^2) sqrt(b^2 z^2 + a^4 - b^4))."""
    a, b = state.a, state.b
    return b * b * ratio, 2.0 * a ** 3 * state.a_dot + (a ** 4 - b ** 4) * ratio


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

def distributions(scenario: Scenario, state: InterfaceState) -> list:
    """Sink/source densities on the cuts.

    The density is the jump of the normal derivative of p_j across the
    support (value on the left of the direction of travel minus value on the
    right, with the normal pointing left), so that
    Laplacian p_j = (h'/h) / k_j + density * delta.  Circles and confocal
    ellipses have none.
    """
    fam = state.family
    t = state.t
    if fam in (Family.CIRCLE, Family.CONFOCAL_ELLIPSE):
        return []
    k1 = scenario.mobility(Region.EXTERIOR, t)
    k2 = scenario.mobility(Region.INTERIOR, t)
    if fam is Family.VARIABLE_FOCUS_ELLIPSE:
        d, D = state.d, state.d2
        coef = -state.a * state.b * state.d2_dot / (D * D * k2)

        def mu_ell(s):
            x = s - d
            return coef * (2.0 * x * x - D) / math.sqrt(max(D - x * x, 0.0))

        return [Distribution(Region.INTERIOR, Segment(complex(-d), complex(d)), mu_ell, "focal segment")]
    a, b = state.a, state.b
    c2 = a ** 4 - b ** 4
    q = cassini_q(state)
    B1, B2 = cassini_coefficients(state, scenario.gap.ratio(t))

    def mu_seg(s):
        x = s - b
        return -(B1 * x * x + B2) / (k2 * math.sqrt((b * b * x * x + c2) * max(b * b - x * x, 0.0)))

    def mu_ray(s):
        y = q + s
        return (B2 - B1 * y * y) / (k1 * math.sqrt(max(b * b * y * y - c2, 0.0) * (b * b + y * y)))

    return [
        Distribution(Region.INTERIOR, Segment(complex(-b), complex(b)), mu_seg, "segment [-b, b]"),
        Distribution(Region.EXTERIOR, RayPair(1j * q, -1j * q, 1j), mu_ray, "imaginary-axis rays"),
    ]
