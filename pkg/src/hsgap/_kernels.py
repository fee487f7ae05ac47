"""Hot numeric kernels with a numba path and a vectorized numpy path.

Both paths evaluate the same formulas.  The numba path loops point by point
over compiled scalar routines; the numpy path runs whole-array duplication
steps.  ``rf``, ``rd``, ``ellipfe`` and ``cassini_reduced_pressure`` dispatch
on ``hsgap._accel.USE_NUMBA``; the ``*_numba`` / ``*_numpy`` names are always
available for benchmarking and parity tests.

Elliptic integrals here use the *modulus* k: the integrands contain
``k**2 * sin(t)**2``.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit, prange

# Carlson (1995) duplication stopping constants for relative error ~1e-16.
_R_TOL = 1.0e-16
_RF_Q = (3.0 * _R_TOL) ** (-1.0 / 6.0)
_RD_Q = (0.25 * _R_TOL) ** (-1.0 / 6.0)
_MAX_DUP = 200
_ORIGIN_NUDGE = 1.0e-12


# ---------------------------------------------------------------------------
# scalar kernels (compiled when numba is present)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _rf_scalar(x, y, z):
    a0 = (x + y + z) / 3.0
    q = _RF_Q * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    xm, ym, zm, am = x, y, z, a0
    f = 1.0
    for _ in range(_MAX_DUP):
        if q * f < abs(am):
            break
        sx = math.sqrt(xm)
        sy = math.sqrt(ym)
        sz = math.sqrt(zm)
        lam = sx * sy + sx * sz + sy * sz
        xm = 0.25 * (xm + lam)
        ym = 0.25 * (ym + lam)
        zm = 0.25 * (zm + lam)
        am = 0.25 * (am + lam)
        f *= 0.25
    X = (a0 - x) * f / am
    Y = (a0 - y) * f / am
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / math.sqrt(am)


@njit(cache=True)
def _rd_scalar(x, y, z):
    a0 = (x + y + 3.0 * z) / 5.0
    q = _RD_Q * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    xm, ym, zm, am = x, y, z, a0
    f = 1.0
    s = 0.0
    for _ in range(_MAX_DUP):
        if q * f < abs(am):
            break
        sx = math.sqrt(xm)
        sy = math.sqrt(ym)
        sz = math.sqrt(zm)
        lam = sx * sy + sx * sz + sy * sz
        s += f / (sz * (zm + lam))
        xm = 0.25 * (xm + lam)
        ym = 0.25 * (ym + lam)
        zm = 0.25 * (zm + lam)
        am = 0.25 * (am + lam)
        f *= 0.25
    X = (a0 - x) * f / am
    Y = (a0 - y) * f / am
    Z = -(X + Y) / 3.0
    xy = X * Y
    z2 = Z * Z
    e2 = xy - 6.0 * z2
    e3 = (3.0 * xy - 8.0 * z2) * Z
    e4 = 3.0 * (xy - z2) * z2
    e5 = xy * z2 * Z
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
              - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return f * series / (am * math.sqrt(am)) + 3.0 * s


@njit(cache=True)
def _ellipfe_scalar(phi, k):
    n = math.floor(phi / math.pi + 0.5)
    r = phi - n * math.pi
    s = math.sin(r)
    c = math.cos(r)
    k2 = k * k
    d2 = 1.0 - k2 * s * s
    rf = _rf_scalar(c * c, d2, 1.0)
    rd = _rd_scalar(c * c, d2, 1.0)
    F = s * rf
    E = s * rf - k2 * s * s * s * rd / 3.0
    if n != 0.0:
        kp2 = 1.0 - k2
        Kc = _rf_scalar(0.0, kp2, 1.0)
        Ec = Kc - k2 * _rd_scalar(0.0, kp2, 1.0) / 3.0
        F += 2.0 * n * Kc
        E += 2.0 * n * Ec
    return F, E


@njit(cache=True)
def _split_sqrt(u, v):
    # (alpha, beta) >= 0 with (alpha + i beta)**2 = u + i v, v >= 0
    r = math.hypot(u, v)
    if u >= 0.0:
        al = math.sqrt(0.5 * (u + r))
        be = 0.5 * v / al if al > 0.0 else 0.0
    else:
        be = math.sqrt(0.5 * (r - u))
        al = 0.5 * v / be if be > 0.0 else 0.0
    return al, be


@njit(cache=True)
def _cassini_alpha_scalar(X, Y, a, b):
    """alpha, alpha1, beta1, alpha2, beta2 at a first-quadrant point."""
    b2 = b * b
    c2 = a ** 4 - b2 * b2
    x2 = X * X
    y2 = Y * Y
    al1, be1 = _split_sqrt(x2 - y2 - b2, 2.0 * X * Y)
    al2, be2 = _split_sqrt(b2 * (x2 - y2) + c2, 2.0 * b2 * X * Y)
    r2 = x2 + y2
    kap2 = c2 / a ** 4
    m1 = al1 * al1 + be1 * be1
    m2 = al2 * al2 + be2 * be2
    # w = s1 * conj(s2)
    wr = al1 * al2 + be1 * be2
    wi = be1 * al2 - al1 * be2
    # addition formula, standard form (common factor |z|^4 / b^2 removed)
    ns = 2.0 * (wr * X - wi * Y) / (a * a)
    nc = r2 - m1 * m2 / a ** 4
    den1 = (r2 * r2 - kap2 * m1 * m1) / b2
    cond1 = abs(den1) / ((r2 * r2 + kap2 * m1 * m1) / b2)
    # alternate form: Im(w z), Im(w conj z)
    den2 = wr * Y + wi * X
    ns2 = 2.0 * a * a * X * Y
    nc2 = wi * X - wr * Y
    scale2 = math.sqrt(m1 * m2 * r2)
    cond2 = abs(den2) / scale2 if scale2 > 0.0 else 0.0
    if cond1 >= cond2:
        sg = 1.0 if den1 >= 0.0 else -1.0
        alpha = math.atan2(sg * ns, sg * nc)
    else:
        sg = 1.0 if den2 >= 0.0 else -1.0
        alpha = math.atan2(sg * ns2, sg * nc2)
    if alpha < 0.0:
        alpha = 0.0 if alpha > -1e-12 else alpha + 2.0 * math.pi
    return alpha, al1, be1, al2, be2


@njit(cache=True)
def _cassini_scalar(X, Y, a, b, adot, Kb, Eb):
    if X == 0.0 and Y == 0.0:
        # removable 0 * inf; P is even and smooth in x along the cut
        X = _ORIGIN_NUDGE * b
    alpha, al1, be1, al2, be2 = _cassini_alpha_scalar(X, Y, a, b)
    b2 = b * b
    a2 = a * a
    c2 = a2 * a2 - b2 * b2
    kap = math.sqrt(c2) / a2
    F, E = _ellipfe_scalar(alpha, kap)
    r2 = X * X + Y * Y
    m1 = al1 * al1 + be1 * be1
    # Re(R / z), R = s1 * s2
    re_R = al1 * al2 - be1 * be2
    im_R = al1 * be2 + al2 * be1
    alg = (X * re_R + Y * im_R) / r2
    sin2 = m1 / r2
    bracket = ((Eb - Kb) * F + Kb * E + Kb * kap * kap * sin2 * math.sin(alpha)
               - 2.0 * Kb * alg / a2 - 0.5 * math.pi)
    return -a * adot * bracket / (2.0 * Eb) - adot * Kb * r2 / (2.0 * a * Eb)


# ---------------------------------------------------------------------------
# numba array paths
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def _rf_loop(x, y, z, out):
    for i in prange(out.size):
        out[i] = _rf_scalar(x[i], y[i], z[i])


@njit(cache=True, parallel=True)
def _rd_loop(x, y, z, out):
    for i in prange(out.size):
        out[i] = _rd_scalar(x[i], y[i], z[i])


@njit(cache=True, parallel=True)
def _ellipfe_loop(phi, k, F, E):
    for i in prange(F.size):
        F[i], E[i] = _ellipfe_scalar(phi[i], k[i])


@njit(cache=True, parallel=True)
def _cassini_loop(X, Y, a, b, adot, Kb, Eb, out):
    for i in prange(out.size):
        out[i] = _cassini_scalar(X[i], Y[i], a, b, adot, Kb, Eb)


def _flat(*arrays):
    arrs = np.broadcast_arrays(*[np.asarray(v, dtype=np.float64) for v in arrays])
    shape = arrs[0].shape
    return shape, [np.ascontiguousarray(v).ravel() for v in arrs]


def rf_numba(x, y, z):
    shape, (xf, yf, zf) = _flat(x, y, z)
    out = np.empty(xf.size)
    _rf_loop(xf, yf, zf, out)
    return out.reshape(shape)


def rd_numba(x, y, z):
    shape, (xf, yf, zf) = _flat(x, y, z)
    out = np.empty(xf.size)
    _rd_loop(xf, yf, zf, out)
    return out.reshape(shape)


def ellipfe_numba(phi, k):
    shape, (pf, kf) = _flat(phi, k)
    F = np.empty(pf.size)
    E = np.empty(pf.size)
    _ellipfe_loop(pf, kf, F, E)
    return F.reshape(shape), E.reshape(shape)


def cassini_reduced_pressure_numba(X, Y, a, b, adot, Kb, Eb):
    shape, (xf, yf) = _flat(X, Y)
    out = np.empty(xf.size)
    _cassini_loop(xf, yf, float(a), float(b), float(adot), float(Kb), float(Eb), out)
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# numpy array paths
# ---------------------------------------------------------------------------

def rf_numpy(x, y, z):
    x, y, z = (np.asarray(v, dtype=np.float64) for v in np.broadcast_arrays(x, y, z))
    a0 = (x + y + z) / 3.0
    q = _RF_Q * np.maximum(np.maximum(np.abs(a0 - x), np.abs(a0 - y)), np.abs(a0 - z))
    xm, ym, zm, am = x.copy(), y.copy(), z.copy(), a0.copy()
    f = 1.0
    for _ in range(_MAX_DUP):
        if np.all(q * f < np.abs(am)):
            break
        sx, sy, sz = np.sqrt(xm), np.sqrt(ym), np.sqrt(zm)
        lam = sx * sy + sx * sz + sy * sz
        xm = 0.25 * (xm + lam)
        ym = 0.25 * (ym + lam)
        zm = 0.25 * (zm + lam)
        am = 0.25 * (am + lam)
        f *= 0.25
    X = (a0 - x) * f / am
    Y = (a0 - y) * f / am
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / np.sqrt(am)


def rd_numpy(x, y, z):
    x, y, z = (np.asarray(v, dtype=np.float64) for v in np.broadcast_arrays(x, y, z))
    a0 = (x + y + 3.0 * z) / 5.0
    q = _RD_Q * np.maximum(np.maximum(np.abs(a0 - x), np.abs(a0 - y)), np.abs(a0 - z))
    xm, ym, zm, am = x.copy(), y.copy(), z.copy(), a0.copy()
    f = 1.0
    s = np.zeros_like(a0)
    for _ in range(_MAX_DUP):
        if np.all(q * f < np.abs(am)):
            break
        sx, sy, sz = np.sqrt(xm), np.sqrt(ym), np.sqrt(zm)
        lam = sx * sy + sx * sz + sy * sz
        s = s + f / (sz * (zm + lam))
        xm = 0.25 * (xm + lam)
        ym = 0.25 * (ym + lam)
        zm = 0.25 * (zm + lam)
        am = 0.25 * (am + lam)
        f *= 0.25
    X = (a0 - x) * f / am
    Y = (a0 - y) * f / am
    Z = -(X + Y) / 3.0
    xy = X * Y
    z2 = Z * Z
    e2 = xy - 6.0 * z2
    e3 = (3.0 * xy - 8.0 * z2) * Z
    e4 = 3.0 * (xy - z2) * z2
    e5 = xy * z2 * Z
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
              - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return f * series / (am * np.sqrt(am)) + 3.0 * s


def ellipfe_numpy(phi, k):
    phi, k = (np.asarray(v, dtype=np.float64) for v in np.broadcast_arrays(phi, k))
    n = np.floor(phi / np.pi + 0.5)
    r = phi - n * np.pi
    s, c = np.sin(r), np.cos(r)
    k2 = k * k
    d2 = 1.0 - k2 * s * s
    rf = rf_numpy(c * c, d2, 1.0)
    rd = rd_numpy(c * c, d2, 1.0)
    F = s * rf
    E = s * rf - k2 * s ** 3 * rd / 3.0
    if np.any(n != 0):
        kp2 = 1.0 - k2
        Kc = rf_numpy(0.0, kp2, 1.0)
        Ec = Kc - k2 * rd_numpy(0.0, kp2, 1.0) / 3.0
        F = F + 2.0 * n * Kc
        E = E + 2.0 * n * Ec
    return F, E


def _split_sqrt_numpy(u, v):
    r = np.hypot(u, v)
    pos = u >= 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        al_p = np.sqrt(0.5 * (u + r))
        be_n = np.sqrt(0.5 * (r - u))
        al = np.where(pos, al_p, np.where(be_n > 0, 0.5 * v / be_n, 0.0))
        be = np.where(pos, np.where(al_p > 0, 0.5 * v / al_p, 0.0), be_n)
    return al, be


def cassini_alpha_numpy(X, Y, a, b):
    """Vectorized (alpha, alpha1, beta1, alpha2, beta2) at first-quadrant points."""
    X, Y = (np.asarray(v, dtype=np.float64) for v in np.broadcast_arrays(X, Y))
    b2 = b * b
    c2 = a ** 4 - b2 * b2
    x2, y2 = X * X, Y * Y
    al1, be1 = _split_sqrt_numpy(x2 - y2 - b2, 2.0 * X * Y)
    al2, be2 = _split_sqrt_numpy(b2 * (x2 - y2) + c2, 2.0 * b2 * X * Y)
    r2 = x2 + y2
    kap2 = c2 / a ** 4
    m1 = al1 * al1 + be1 * be1
    m2 = al2 * al2 + be2 * be2
    wr = al1 * al2 + be1 * be2
    wi = be1 * al2 - al1 * be2
    ns = 2.0 * (wr * X - wi * Y) / (a * a)
    nc = r2 - m1 * m2 / a ** 4
    den1 = (r2 * r2 - kap2 * m1 * m1) / b2
    cond1 = np.abs(den1) / ((r2 * r2 + kap2 * m1 * m1) / b2)
    den2 = wr * Y + wi * X
    ns2 = 2.0 * a * a * X * Y
    nc2 = wi * X - wr * Y
    scale2 = np.sqrt(m1 * m2 * r2)
    with np.errstate(invalid="ignore", divide="ignore"):
        cond2 = np.where(scale2 > 0, np.abs(den2) / scale2, 0.0)
    use1 = cond1 >= cond2
    sg = np.where(use1, np.where(den1 >= 0, 1.0, -1.0), np.where(den2 >= 0, 1.0, -1.0))
    alpha = np.where(use1, np.arctan2(sg * ns, sg * nc), np.arctan2(sg * ns2, sg * nc2))
    alpha = np.where(alpha < 0.0, np.where(alpha > -1e-12, 0.0, alpha + 2.0 * np.pi), alpha)
    return alpha, al1, be1, al2, be2


def cassini_reduced_pressure_numpy(X, Y, a, b, adot, Kb, Eb):
    X, Y = np.broadcast_arrays(np.asarray(X, dtype=np.float64), np.asarray(Y, dtype=np.float64))
    X = np.where((X == 0.0) & (Y == 0.0), _ORIGIN_NUDGE * b, X)
    alpha, al1, be1, al2, be2 = cassini_alpha_numpy(X, Y, a, b)
    a2 = a * a
    c2 = a2 * a2 - b ** 4
    kap = np.sqrt(c2) / a2
    F, E = ellipfe_numpy(alpha, kap)
    r2 = X * X + Y * Y
    m1 = al1 * al1 + be1 * be1
    re_R = al1 * al2 - be1 * be2
    im_R = al1 * be2 + al2 * be1
    alg = (X * re_R + Y * im_R) / r2
    bracket = ((Eb - Kb) * F + Kb * E + Kb * kap * kap * (m1 / r2) * np.sin(alpha)
               - 2.0 * Kb * alg / a2 - 0.5 * np.pi)
    return -a * adot * bracket / (2.0 * Eb) - adot * Kb * r2 / (2.0 * a * Eb)


def cassini_alpha_numba(X, Y, a, b):
    shape, (xf, yf) = _flat(X, Y)
    out = np.empty((5, xf.size))
    for i in range(xf.size):
        out[:, i] = _cassini_alpha_scalar(xf[i], yf[i], float(a), float(b))
    return tuple(row.reshape(shape) for row in out)


if USE_NUMBA:
    rf, rd, ellipfe = rf_numba, rd_numba, ellipfe_numba
    cassini_reduced_pressure = cassini_reduced_pressure_numba
    cassini_alpha = cassini_alpha_numba
else:
    rf, rd, ellipfe = rf_numpy, rd_numpy, ellipfe_numpy
    cassini_reduced_pressure = cassini_reduced_pressure_numpy
    cassini_alpha = cassini_alpha_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
