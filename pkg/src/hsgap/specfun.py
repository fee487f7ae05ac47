"""Special functions and small numerical kernels.

Modulus convention
------------------
All elliptic integrals take the **modulus** ``k``::

    F(phi, k) = int_0^phi dt / sqrt(1 - k**2 sin(t)**2)
    E(phi, k) = int_0^phi sqrt(1 - k**2 sin(t)**2) dt

``scipy.special.ellipkinc`` and friends take the *parameter* ``m = k**2``
instead; do not mix the two.  Values come from Carlson's symmetric forms
``R_F`` and ``R_D`` evaluated by the duplication theorem.
"""
import math
import warnings

import numpy as np
from scipy import integrate, optimize

from . import _kernels
from .errors import AccuracyError, BracketError, CutError, DomainError, StiffnessError

__all__ = [
    "carlson_rf",
    "carlson_rd",
    "ellip_complete",
    "ellip_incomplete",
    "ellipk",
    "ellipe",
    "sqrt_branch",
    "sqrt_segment",
    "quad_adaptive",
    "ode_solve",
    "root_find",
]


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F(x, y, z) for nonnegative real arguments."""
    out = _kernels.rf(x, y, z)
    return float(out) if np.ndim(out) == 0 else out


def carlson_rd(x, y, z):
    """Carlson's symmetric integral R_D(x, y, z) for nonnegative real arguments."""
    out = _kernels.rd(x, y, z)
    return float(out) if np.ndim(out) == 0 else out


def _check_modulus(k):
    k_arr = np.asarray(k, dtype=np.float64)
    if np.any(~np.isfinite(k_arr)) or np.any(k_arr < 0.0) or np.any(k_arr >= 1.0):
        raise DomainError(f"elliptic modulus must satisfy 0 <= k < 1, got {k!r}")
    return k_arr


def ellip_complete(k):
    """Complete integrals ``(K(k), E(k))`` for modulus ``0 <= k < 1``."""
    k_arr = _check_modulus(k)
    kp2 = 1.0 - k_arr * k_arr
    K = _kernels.rf(0.0, kp2, 1.0)
    E = K - k_arr * k_arr * _kernels.rd(0.0, kp2, 1.0) / 3.0
    if np.ndim(K) == 0:
        return float(K), float(E)
    return K, E


def ellipk(k):
    return ellip_complete(k)[0]


def ellipe(k):
    return ellip_complete(k)[1]


def ellip_incomplete(phi, k):
    """Incomplete integrals ``(F(phi, k), E(phi, k))``.

    Any real ``phi`` is accepted; outside ``[-pi/2, pi/2]`` the quasi-periodicity
    ``F(phi + pi) = F(phi) + 2K`` (and likewise for E) is used.
    """
    _check_modulus(k)
    phi_arr = np.asarray(phi, dtype=np.float64)
    if np.any(~np.isfinite(phi_arr)):
        raise DomainError("amplitude must be finite")
    F, E = _kernels.ellipfe(phi_arr, k)
    if np.ndim(F) == 0:
        return float(F), float(E)
    return F, E


def _reduce_angle(theta):
    """Map an angle into (-pi, pi]."""
    t = math.fmod(theta, 2.0 * math.pi)
    if t > math.pi:
        t -= 2.0 * math.pi
    elif t <= -math.pi:
        t += 2.0 * math.pi
    return t


def sqrt_branch(w, theta):
    """Square root of ``w`` with its branch cut on the ray ``arg w = theta``.

    The branch is continuous off that ray and agrees with the principal root on
    the positive real axis whenever the cut does not lie there (``theta != 0``
    mod 2pi).  With ``theta = 0`` the argument window is ``[0, 2pi)``.
    Accepts scalars or arrays; ``sqrt_branch(0, theta) == 0``.
    """
    th = _reduce_angle(float(theta))
    w_arr = np.asarray(w, dtype=np.complex128)
    ang = np.angle(w_arr)
    if th > 0.0:
        ang = np.where(ang > th, ang - 2.0 * np.pi, ang)
        ang = np.where(ang <= th - 2.0 * np.pi, ang + 2.0 * np.pi, ang)
    else:
        ang = np.where(ang < th, ang + 2.0 * np.pi, ang)
        ang = np.where(ang >= th + 2.0 * np.pi, ang - 2.0 * np.pi, ang)
    r = np.sqrt(np.abs(w_arr)) * np.exp(0.5j * ang)
    if r.ndim == 0:
        return complex(r)
    return r


def sqrt_segment(z, p, q, *, strict=True):
    """``sqrt((z - p)(z - q))`` with its only branch cut on the segment [p, q].

    The value behaves like ``z - (p + q)/2`` at infinity, so for real
    ``p < q`` and real ``z > q`` it is positive.  With ``strict=True`` a point
    strictly inside the segment raises :class:`CutError`; pass
    ``strict=False`` to get the limit from the left side of the directed
    segment p -> q (the upper side for real p < q).
    """
    p = complex(p)
    q = complex(q)
    half = 0.5 * (q - p)
    if half == 0:
        raise DomainError("degenerate segment p == q")
    z_arr = np.asarray(z, dtype=np.complex128)
    u = (z_arr - 0.5 * (p + q)) / half
    inside = (np.abs(u.imag) <= 4.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(u.real))) & (np.abs(u.real) < 1.0)
    if np.any(inside):
        if strict:
            raise CutError(f"point lies on the branch cut between {p} and {q}")
        # limit from the left of p -> q
        with np.errstate(invalid="ignore"):
            r = half * np.where(inside, 1j * np.sqrt(1.0 - u.real ** 2), np.sqrt(u - 1.0) * np.sqrt(u + 1.0))
    else:
        r = half * np.sqrt(u - 1.0) * np.sqrt(u + 1.0)
    if r.ndim == 0:
        return complex(r)
    return r


def quad_adaptive(f, lo, hi, tol=1e-12, *, limit=400):
    """Adaptive quadrature of a real function on [lo, hi].

    Backed by QUADPACK's extrapolating adaptive Gauss-Kronrod routine, which
    copes with integrable inverse-square-root endpoint singularities.  Raises
    :class:`AccuracyError` (with the best estimate attached) when the error
    estimate exceeds ``tol``.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, lo, hi, epsabs=tol, epsrel=0.0, limit=limit)
    if not np.isfinite(val) or err > tol:
        raise AccuracyError(
            f"quadrature on [{lo}, {hi}] did not reach tol={tol:g} (error estimate {err:.3g})",
            estimate=val,
            error=err,
        )
    return val


def _rk4(rhs, y0, t0, t1, n):
    h = (t1 - t0) / n
    y = y0
    t = t0
    for i in range(n):
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        t = t0 + (i + 1) * h
    return y


def ode_solve(rhs, y0, t0, t1, tol=1e-10, *, n0=8, max_steps=1 << 20):
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1`` with classical RK4.

    The step count is doubled until two successive refinements differ by less
    than ``tol``; the finer result is returned.
    """
    if t1 == t0:
        return y0
    n = n0
    prev = _rk4(rhs, y0, t0, t1, n)
    while True:
        n *= 2
        if n > max_steps:
            raise StiffnessError(f"RK4 step count exceeded {max_steps} before reaching tol={tol:g}")
        cur = _rk4(rhs, y0, t0, t1, n)
        if np.all(np.abs(cur - prev) < tol):
            return cur
        prev = cur


def root_find(g, lo, hi, tol=1e-14):
    """Root of ``g`` inside a sign-changing bracket (Brent's method)."""
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if glo * ghi > 0.0:
        raise BracketError(f"g does not change sign on [{lo}, {hi}] (g(lo)={glo:g}, g(hi)={ghi:g})")
    return optimize.brentq(g, lo, hi, xtol=tol, rtol=4.0 * np.finfo(float).eps, maxiter=500)
