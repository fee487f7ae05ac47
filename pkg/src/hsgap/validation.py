"""Numerical verification of the governing equations and conserved quantities.

Each check returns a :class:`CheckReport`.  All probe sets are deterministic.
Derivatives are finite differences of the closed-form pressures, so these
checks are independent of the analytic derivations used to build them.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import Family, Region, Scenario, Segment
from .schwarz import cassini_q, level_function, normal_velocity_detail, schwarz_eval, singularities
from .solutions import (
    area,
    boundary_sample,
    distributions,
    evolve,
    reduced_pressure,
    shoelace_area,
)

__all__ = [
    "CheckReport",
    "HARMONIC_TESTS",
    "check_schwarz_identity",
    "check_boundary_conditions",
    "check_poisson",
    "check_volume",
    "check_density_jump",
    "check_moments",
    "check_cut_directions",
    "run_all",
]


@dataclass
class CheckReport:
    """Outcome of one check.  ``passed`` holds exactly when ``max_residual <= tolerance``."""

    check_name: str
    max_residual: float
    tolerance: float
    probes: int
    details: list = field(default_factory=list)
    excluded: int = 0

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=float)

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.check_name}: residual {self.max_residual:.3e} (tol {self.tolerance:.1e}, {self.probes} probes)"


def _worst(rows, key, k=3):
    return sorted(rows, key=lambda r: -abs(r[key]))[:k]


# ---------------------------------------------------------------------------
# Schwarz identity
# ---------------------------------------------------------------------------

def check_schwarz_identity(state, n: int = 256, tol: float = 1e-10) -> CheckReport:
    """max |S(z) - conj(z)| over ``n`` boundary samples."""
    zs = boundary_sample(state, n)
    rows = [{"z": [z.real, z.imag], "residual": abs(schwarz_eval(state, z).s - z.conjugate())} for z in zs]
    res = max(r["residual"] for r in rows)
    return CheckReport("schwarz_identity", res, tol, len(rows), _worst(rows, "residual"))


# ---------------------------------------------------------------------------
# boundary conditions
# ---------------------------------------------------------------------------

def _richardson_normal(func, z, n, delta):
    def central(dl):
        zp, zm = z + dl * n, z - dl * n
        return (func(zp) - func(zm)) / (2.0 * dl)

    return (4.0 * central(0.5 * delta) - central(delta)) / 3.0


def check_boundary_conditions(scenario: Scenario, t: float, n: int = 64, tol: float | None = None) -> CheckReport:
    """Pressure continuity, flux continuity and the kinematic condition on the interface.

    Residuals are scaled by max |v_n| (velocities) and by max |v_n| L / k_2
    (pressures), L being the interface scale.
    """
    tol = scenario.tolerances["boundary"] if tol is None else tol
    state = evolve(scenario, t)
    ratio = scenario.gap.ratio(t)
    k1 = scenario.mobility(1, t)
    k2 = scenario.mobility(2, t)
    f = scenario.f_of_t(t)
    delta = 1e-4 * state.scale

    def p(j, z):
        k = k1 if j == 1 else k2
        return float(reduced_pressure(state, ratio, z.real, z.imag)) / k + f

    rows = []
    for z in boundary_sample(state, n):
        nv = normal_velocity_detail(state, z)
        dp1 = _richardson_normal(lambda w: p(1, w), z, nv.normal, delta)
        dp2 = _richardson_normal(lambda w: p(2, w), z, nv.normal, delta)
        rows.append({
            "z": [z.real, z.imag],
            "v_n": nv.value,
            "pressure_jump": p(1, z) - p(2, z),
            "flux_jump": -k1 * dp1 + k2 * dp2,
            "kinematic": -k2 * dp2 - nv.value,
        })
    vmax = max(max(abs(r["v_n"]) for r in rows), 1e-300)
    pscale = vmax * state.scale / k2
    for r in rows:
        r["residual"] = max(abs(r["pressure_jump"]) / pscale, abs(r["flux_jump"]) / vmax, abs(r["kinematic"]) / vmax)
    res = max(r["residual"] for r in rows)
    return CheckReport("boundary_conditions", res, tol, len(rows), _worst(rows, "residual"))


# ---------------------------------------------------------------------------
# Poisson equation
# ---------------------------------------------------------------------------

def _cut_distance(state, x, y):
    """Distance from (x, y) to the nearest cut or singular point."""
    fam = state.family
    big = np.full(np.shape(x), np.inf)
    if fam is Family.CIRCLE:
        return np.hypot(x, y)
    if fam is Family.CONFOCAL_ELLIPSE:
        return big
    if fam is Family.VARIABLE_FOCUS_ELLIPSE:
        d = state.d
        return np.hypot(np.maximum(np.abs(x) - d, 0.0), y)
    b, q = state.b, cassini_q(state)
    seg = np.hypot(np.maximum(np.abs(x) - b, 0.0), y)
    ray = np.hypot(x, np.maximum(q - np.abs(y), 0.0))
    return np.minimum(seg, ray)


def _laplacian(P, x, y, dl):
    return (P(x + dl, y) + P(x - dl, y) + P(x, y + dl) + P(x, y - dl) - 4.0 * P(x, y)) / (dl * dl)


def check_poisson(scenario: Scenario, t: float, grid: int | None = None, tol: float | None = None) -> CheckReport:
    """5-point Laplacian of p_j against (h'/h) / k_j in both regions.

    Quadratic pressures (circle, confocal ellipse) must match to the
    ``poisson_exact`` relative tolerance.  Otherwise the residual at spacings
    delta and delta/2 must fall by a factor 4 within ``poisson_ratio``; the
    reported residual is then |ratio/4 - 1|.
    """
    tols = scenario.tolerances
    grid = scenario.samples["poisson_grid"] if grid is None else grid
    state = evolve(scenario, t)
    ratio = scenario.gap.ratio(t)
    L = state.scale
    delta = 0.01 * L
    ext = 1.6 * L
    xs = np.linspace(-ext, ext, grid)
    X, Y = np.meshgrid(xs, xs)
    X, Y = X.ravel(), Y.ravel()
    near = _cut_distance(state, X, Y) < 10.0 * delta
    X, Y = X[~near], Y[~near]
    excluded = int(near.sum())

    inside = level_function(state, X, Y)[0] < 0.0

    rows = []
    worst_ratio = 0.0
    worst_rel = 0.0
    probes = 0
    quadratic = state.family in (Family.CIRCLE, Family.CONFOCAL_ELLIPSE)
    for j in (1, 2):
        k = scenario.mobility(j, t)
        sel = inside if j == 2 else ~inside
        Xj, Yj = X[sel], Y[sel]
        probes += len(Xj)

        def P(x, y, k=k):
            return reduced_pressure(state, ratio, x, y) / k

        target = ratio / k
        r1 = np.abs(_laplacian(P, Xj, Yj, delta) - target)
        r2 = np.abs(_laplacian(P, Xj, Yj, 0.5 * delta) - target)
        rel1 = float(r1.max() / abs(target))
        rel2 = float(r2.max() / abs(target))
        conv = float(r1.max() / r2.max()) if r2.max() > 0.0 else float("inf")
        rows.append({"region": j, "rel_residual_delta": rel1, "rel_residual_half": rel2, "ratio": conv})
        worst_rel = max(worst_rel, rel1, rel2)
        worst_ratio = max(worst_ratio, abs(conv / 4.0 - 1.0))
    if quadratic:
        return CheckReport("poisson", worst_rel, tols["poisson_exact"], probes, rows, excluded)
    return CheckReport("poisson", worst_ratio, tols["poisson_ratio"], probes, rows, excluded)


# ---------------------------------------------------------------------------
# volume
# ---------------------------------------------------------------------------

def check_volume(scenario: Scenario, times, tol: float | None = None) -> CheckReport:
    """Relative drift of A(t) h(t) from A(0) h(0).

    Closed-form areas must hold to ``volume``; shoelace areas and, for the
    Cassini family, the ODE-integrated evolution to ``volume_ode``.  The
    residual is the worst ratio of a drift to its own tolerance, so the
    check passes when it is at most 1.
    """
    tols = scenario.tolerances
    tol_cf = tols["volume"] if tol is None else tol
    tol_num = tols["volume_ode"]
    s0 = evolve(scenario, 0.0)
    V0 = area(s0) * scenario.h0
    rows = []
    for t in times:
        h = scenario.gap.width(t)
        st = evolve(scenario, t)
        row = {
            "t": float(t),
            "closed_form": area(st) * h / V0 - 1.0,
            "shoelace": shoelace_area(st) * h / V0 - 1.0,
        }
        score = max(abs(row["closed_form"]) / tol_cf, abs(row["shoelace"]) / tol_num)
        if scenario.family is Family.CASSINI:
            so = evolve(scenario, t, method="ode")
            row["ode"] = area(so) * h / V0 - 1.0
            row["ode_vs_root"] = so.a - st.a
            score = max(score, abs(row["ode"]) / tol_num, abs(row["ode_vs_root"]) / tol_num)
        row["score"] = score
        rows.append(row)
    res = max(r["score"] for r in rows)
    return CheckReport("volume", res, 1.0, len(rows), rows)


# ---------------------------------------------------------------------------
# density jump
# ---------------------------------------------------------------------------

def _one_sided(P, z, n, dl):
    """Value and derivative along ``n`` at z from the side z + s n, s > 0 (cubic through dl..4dl)."""
    s = dl * np.arange(1, 5)
    w = z + s * n
    vals = P(w.real, w.imag)
    c = np.polyfit(s, vals, 3)
    return c[3], c[2]


def check_density_jump(scenario: Scenario, t: float, cut_samples: int | None = None, tol: float | None = None) -> CheckReport:
    """Jump of the normal derivative of p_j across each cut against the density.

    Also checks that the one-sided pressure limits agree (pressure continuity).
    Scenarios without cuts pass vacuously.
    """
    tol = scenario.tolerances["density_jump"] if tol is None else tol
    m = scenario.samples["density"] if cut_samples is None else cut_samples
    state = evolve(scenario, t)
    ratio = scenario.gap.ratio(t)
    rows = []
    for dist in distributions(scenario, state):
        k = scenario.mobility(dist.region, t)

        def P(x, y, k=k):
            return reduced_pressure(state, ratio, x, y) / k

        sup = dist.support
        # the density blows up like 1/sqrt at the ends, so the step follows the support size
        dl = 1e-4 * min(state.scale, sup.length if isinstance(sup, Segment) else state.scale)
        if isinstance(sup, Segment):
            L = sup.length
            params = [L * (0.1 + 0.8 * i / (m - 1)) for i in range(m)]
            points = [(s, complex(sup.point(s)), 1j * sup.direction) for s in params]
        else:
            L = state.scale
            params = [L * (0.1 + 1.9 * i / (m - 1)) for i in range(m)]
            # upper ray with normal +x, and its mirror image
            points = [(s, complex(sup.point(s, 1)), 1.0 + 0j) for s in params]
            points += [(s, complex(sup.point(s, 2)), 1.0 + 0j) for s in params[:: max(1, m // 3)]]
        mus = [dist.density(s) for s, _, _ in points]
        mu_scale = max(abs(v) for v in mus)
        for (s, z, n), mu in zip(points, mus):
            vp, dp = _one_sided(P, z, n, dl)
            vm, dm = _one_sided(P, z, -n, dl)
            jump = dp + dm
            pscale = abs(mu_scale) * state.scale
            rows.append({
                "support": dist.label,
                "s": s,
                "z": [z.real, z.imag],
                "mu": mu,
                "jump": jump,
                "residual": max(abs(jump - mu) / mu_scale, abs(vp - vm) / pscale),
            })
    if not rows:
        return CheckReport("density_jump", 0.0, tol, 0, [{"note": "no cuts"}])
    res = max(r["residual"] for r in rows)
    return CheckReport("density_jump", res, tol, len(rows), _worst(rows, "residual"))


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

HARMONIC_TESTS = {
    "1": lambda x, y: np.ones_like(x),
    "x": lambda x, y: x,
    "y": lambda x, y: y,
    "x2-y2": lambda x, y: x * x - y * y,
    "xy": lambda x, y: x * y,
    "re_z3": lambda x, y: x ** 3 - 3.0 * x * y * y,
    "im_z3": lambda x, y: 3.0 * x * x * y - y ** 3,
    "re_z4": lambda x, y: np.real((x + 1j * y) ** 4),
}


def _radius(state, theta):
    a, b = state.a, state.b
    fam = state.family
    if fam is Family.CIRCLE:
        return np.full_like(theta, a)
    if fam.is_ellipse:
        return a * b / np.sqrt((b * np.cos(theta)) ** 2 + (a * np.sin(theta)) ** 2)
    cos2 = np.cos(2.0 * theta)
    return np.sqrt(b * b * cos2 + np.sqrt(b ** 4 * cos2 * cos2 + a ** 4 - b ** 4))


def domain_integral(state, u, n_theta: int = 1024, n_r: int = 16) -> float:
    """Integral of ``u`` over the interior by a boundary-fitted polar grid.

    Periodic trapezoid rule in angle, Gauss-Legendre in radius up to the exact
    boundary radius.
    """
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    R = _radius(state, theta)
    xg, wg = np.polynomial.legendre.leggauss(n_r)
    rr = 0.5 * (xg[:, None] + 1.0) * R[None, :]
    w = 0.5 * wg[:, None] * R[None, :]
    vals = u(rr * np.cos(theta), rr * np.sin(theta)) * rr * w
    return float(vals.sum() * 2.0 * np.pi / n_theta)


def check_moments(scenario: Scenario, t: float, u="x2-y2", dt: float = 1e-4, tol: float | None = None) -> CheckReport:
    """Moment dynamics d/dt [h int u dA] = -k_2 h int_cut u mu_2 ds.

    ``u`` is a key of :data:`HARMONIC_TESTS` or a callable u(x, y).  The time
    derivative is a Richardson-extrapolated central difference.  Without
    interior sources the check instead requires h int u dA to equal its t = 0
    value.
    """
    tol = scenario.tolerances["moments"] if tol is None else tol
    name = u if isinstance(u, str) else getattr(u, "__name__", "u")
    func = HARMONIC_TESTS[u] if isinstance(u, str) else u
    gap = scenario.gap

    def M(s):
        return gap.width(s) * domain_integral(evolve(scenario, s), func)

    state = evolve(scenario, t)
    h = gap.width(t)
    norm = h * domain_integral(state, lambda x, y: np.abs(func(x, y)))
    interior = [d for d in distributions(scenario, state) if d.region is Region.INTERIOR]
    if not interior:
        drift = abs(M(t) - M(0.0)) / norm
        row = {"u": name, "M0": M(0.0), "Mt": M(t), "relative_drift": drift}
        return CheckReport(f"moments[{name}]", drift, tol, 1, [row])
    d1 = (M(t + dt) - M(t - dt)) / (2.0 * dt)
    d2 = (M(t + 0.5 * dt) - M(t - 0.5 * dt)) / dt
    lhs = (4.0 * d2 - d1) / 3.0
    k2 = scenario.mobility(2, t)

    def weight(z):
        return float(func(np.float64(z.real), np.float64(z.imag)))

    rhs = -k2 * h * sum(d.integrate(weight) for d in interior)
    scale = max(abs(lhs), abs(rhs), norm * abs(gap.ratio(t)))
    res = abs(lhs - rhs) / scale
    row = {"u": name, "dM_dt": lhs, "line_integral": rhs, "scale": scale}
    return CheckReport(f"moments[{name}]", res, tol, 1, [row])


# ---------------------------------------------------------------------------
# cut directions
# ---------------------------------------------------------------------------

def _angle_gap(a, b):
    d = (a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def numerical_cut_angle(state, ratio, z_a, rho: float, n_angles: int = 64, levels: int = 5) -> float:
    """Direction of the zero level of the sqrt(rho) part of P around ``z_a``.

    P is sampled on circles of radius rho / 4^m, fitted as a polynomial in
    sqrt(rho) at each angle, and the squared sqrt-coefficient is fitted to
    A + B cos(phi) + C sin(phi), whose zero sits at atan2(C, B) + pi.
    """
    phi = 2.0 * np.pi * (np.arange(n_angles) + 0.5) / n_angles
    s = np.sqrt(rho) / 2.0 ** np.arange(levels)
    rr = s * s
    pts = z_a + rr[:, None] * np.exp(1j * phi)[None, :]
    vals = reduced_pressure(state, ratio, pts.real, pts.imag)
    V = np.vander(s, levels, increasing=True)
    coef = np.linalg.solve(V, vals)
    c1sq = coef[1] ** 2
    A = np.column_stack([np.ones_like(phi), np.cos(phi), np.sin(phi)])
    (_, B, C), *_ = np.linalg.lstsq(A, c1sq, rcond=None)
    return (math.atan2(C, B) + math.pi) % (2.0 * math.pi)


def check_cut_directions(scenario: Scenario, t: float, tol: float | None = None) -> CheckReport:
    """Numerical zero-level cut directions against the closed-form angles."""
    tol = scenario.tolerances["cut_direction"] if tol is None else tol
    state = evolve(scenario, t)
    ratio = scenario.gap.ratio(t)
    rho = 1e-3 * state.scale
    rows = []
    skipped = 0
    for sing in singularities(state, scenario.gap, t):
        if not sing.cut_angles:
            skipped += 1
            continue
        expected = sing.cut_angles[0]
        found = numerical_cut_angle(state, ratio, sing.location, rho)
        rows.append({
            "location": [sing.location.real, sing.location.imag],
            "kind": sing.kind.value,
            "expected": expected,
            "numerical": found,
            "residual": _angle_gap(found, expected),
        })
    res = max((r["residual"] for r in rows), default=0.0)
    return CheckReport("cut_directions", res, tol, len(rows), rows, skipped)


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

def run_all(scenario: Scenario, t: float) -> list:
    """The full check suite at time ``t``; reports in a fixed order."""
    state = evolve(scenario, t)
    smp = scenario.samples
    reports = [
        check_schwarz_identity(state, smp["schwarz"], scenario.tolerances["schwarz"]),
        check_boundary_conditions(scenario, t, smp["boundary"]),
        check_poisson(scenario, t),
        check_volume(scenario, sorted({0.0, float(t)})),
        check_density_jump(scenario, t),
        check_cut_directions(scenario, t),
    ]
    for u in ("1", "x", "x2-y2"):
        reports.append(check_moments(scenario, t, u))
    return reports
