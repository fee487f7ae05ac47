import cmath
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate

from hsgap import _kernels
from hsgap._accel import HAVE_NUMBA
from hsgap.errors import AccuracyError, BracketError, CutError, DomainError, StiffnessError
from hsgap.specfun import (
    carlson_rd,
    carlson_rf,
    ellip_complete,
    ellip_incomplete,
    ellipe,
    ellipk,
    ode_solve,
    quad_adaptive,
    root_find,
    sqrt_branch,
    sqrt_segment,
)

finite = st.floats(-50.0, 50.0, allow_nan=False)
moduli = st.floats(0.0, 0.97)


def _quad_FE(phi, k):
    F = integrate.quad(lambda s: 1.0 / math.sqrt(1.0 - (k * math.sin(s)) ** 2), 0.0, phi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    E = integrate.quad(lambda s: math.sqrt(1.0 - (k * math.sin(s)) ** 2), 0.0, phi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
    return F, E


# --- Carlson forms -----------------------------------------------------------

def test_carlson_known_values():
    # R_F(0, 1, 2) and R_D(0, 2, 1) from the lemniscate constants
    assert carlson_rf(1.0, 2.0, 0.0) == pytest.approx(1.3110287771461, rel=1e-12)
    assert carlson_rd(0.0, 2.0, 1.0) == pytest.approx(1.7972103521034, rel=1e-12)
    assert carlson_rf(1.0, 1.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    assert carlson_rd(1.0, 1.0, 1.0) == pytest.approx(1.0, rel=1e-15)


@given(st.floats(0.01, 10.0), st.floats(0.01, 10.0), st.floats(0.01, 10.0), st.floats(0.1, 10.0))
def test_carlson_homogeneity(x, y, z, lam):
    assert carlson_rf(lam * x, lam * y, lam * z) == pytest.approx(carlson_rf(x, y, z) / math.sqrt(lam), rel=1e-12)
    assert carlson_rd(lam * x, lam * y, lam * z) == pytest.approx(carlson_rd(x, y, z) / lam ** 1.5, rel=1e-12)


@given(st.floats(0.01, 10.0), st.floats(0.01, 10.0), st.floats(0.01, 10.0))
def test_carlson_rf_symmetric(x, y, z):
    v = carlson_rf(x, y, z)
    assert carlson_rf(y, z, x) == pytest.approx(v, rel=1e-13)
    assert carlson_rf(z, x, y) == pytest.approx(v, rel=1e-13)


# --- complete and incomplete integrals --------------------------------------

def test_complete_at_zero():
    K, E = ellip_complete(0.0)
    assert K == pytest.approx(math.pi / 2, abs=1e-15)
    assert E == pytest.approx(math.pi / 2, abs=1e-15)


def test_complete_half_matches_quadrature():
    K, E = ellip_complete(0.5)
    Kq, Eq = _quad_FE(math.pi / 2, 0.5)
    assert abs(K - Kq) < 1e-10
    assert abs(E - Eq) < 1e-10
    assert ellipk(0.5) == K and ellipe(0.5) == E


def test_complete_small_modulus_series():
    for k in (1e-2, 1e-3, 1e-4):
        K = ellipk(k)
        assert (K - math.pi / 2) / (math.pi * k * k / 8) == pytest.approx(1.0, abs=1e-3)


@pytest.mark.parametrize("k", [1.0, 1.5, -0.1])
def test_complete_domain_errors(k):
    with pytest.raises(DomainError):
        ellip_complete(k)


def test_incomplete_domain_error():
    with pytest.raises(DomainError):
        ellip_incomplete(0.3, 1.0)


@given(st.floats(-10.0, 10.0))
def test_incomplete_zero_modulus(phi):
    F, E = ellip_incomplete(phi, 0.0)
    assert F == pytest.approx(phi, abs=1e-14)
    assert E == pytest.approx(phi, abs=1e-14)


@given(moduli)
def test_incomplete_quarter_and_half_period(k):
    K, E = ellip_complete(k)
    F1, E1 = ellip_incomplete(math.pi / 2, k)
    F2, E2 = ellip_incomplete(math.pi, k)
    assert F1 == pytest.approx(K, rel=1e-12) and E1 == pytest.approx(E, rel=1e-12)
    assert F2 == pytest.approx(2 * K, rel=1e-12) and E2 == pytest.approx(2 * E, rel=1e-12)


@pytest.mark.parametrize("k", [0.1 * i for i in range(1, 10)])
def test_complete_agrees_with_incomplete(k):
    K, E = ellip_complete(k)
    F, Ei = ellip_incomplete(math.pi / 2, k)
    assert abs(K - F) < 1e-12 and abs(E - Ei) < 1e-12


@given(st.floats(0.01, 0.99))
def test_legendre_relation(k):
    kp = math.sqrt(1.0 - k * k)
    K, E = ellip_complete(k)
    Kp, Ep = ellip_complete(kp)
    assert abs(E * Kp + Ep * K - K * Kp - math.pi / 2) < 1e-10


@settings(max_examples=50)
@given(st.floats(-4.0, 4.0), st.floats(0.0, 0.98))
def test_incomplete_matches_quadrature(phi, k):
    F, E = ellip_incomplete(phi, k)
    Fq, Eq = _quad_FE(phi, k)
    assert abs(F - Fq) < 1e-10 and abs(E - Eq) < 1e-10


@given(st.floats(-3.0, 3.0), moduli, st.integers(-3, 3))
def test_incomplete_quasi_periodic(phi, k, n):
    K, E = ellip_complete(k)
    F, Ei = ellip_incomplete(phi, k)
    Fn, En = ellip_incomplete(phi + n * math.pi, k)
    assert Fn == pytest.approx(F + 2 * n * K, abs=1e-11)
    assert En == pytest.approx(Ei + 2 * n * E, abs=1e-11)


def test_incomplete_vectorized():
    phi = np.linspace(-2.0, 2.0, 7)
    F, E = ellip_incomplete(phi, 0.6)
    for p, f, e in zip(phi, F, E):
        fs, es = ellip_incomplete(float(p), 0.6)
        assert f == pytest.approx(fs, rel=1e-15) and e == pytest.approx(es, rel=1e-15)


# --- branch-controlled square roots -----------------------------------------

def test_sqrt_branch_examples():
    assert sqrt_branch(4.0, math.pi) == pytest.approx(2.0)
    assert sqrt_branch(-4.0, -math.pi / 2) == pytest.approx(2.0j)
    assert sqrt_branch(0.0, 1.0) == 0.0


@given(finite, finite, st.floats(-7.0, 7.0))
def test_sqrt_branch_squares(x, y, theta):
    w = complex(x, y)
    r = sqrt_branch(w, theta)
    assert abs(r * r - w) <= 1e-14 * max(abs(w), 1e-300) * 4


@given(st.floats(0.1, 10.0), st.floats(-math.pi, math.pi), st.floats(-3.0, 3.0))
def test_sqrt_branch_continuous_off_cut(rad, arg, theta):
    # stay clear of the cut ray
    gap = (arg - theta) % (2 * math.pi)
    assume(1e-3 < gap < 2 * math.pi - 1e-3)
    w = rad * cmath.exp(1j * arg)
    eps = 1e-7
    diff = abs(sqrt_branch(w, theta) - sqrt_branch(w * cmath.exp(1j * eps), theta))
    assert diff < 1e-5 * math.sqrt(rad)


@given(st.floats(0.1, 10.0), st.floats(-3.0, 3.0))
def test_sqrt_branch_jumps_across_cut(rad, theta):
    w = rad * cmath.exp(1j * theta)
    lo = sqrt_branch(w * cmath.exp(-1e-9j), theta)
    hi = sqrt_branch(w * cmath.exp(1e-9j), theta)
    assert abs(lo + hi) < 1e-6 * math.sqrt(rad)


def test_sqrt_segment_examples():
    assert sqrt_segment(2.0, -1.0, 1.0) == pytest.approx(math.sqrt(3.0), rel=1e-15)
    assert sqrt_segment(2j, -1.0, 1.0) == pytest.approx(1j * math.sqrt(5.0), rel=1e-15)
    with pytest.raises(CutError):
        sqrt_segment(0.3, -1.0, 1.0)
    assert sqrt_segment(0.0, -1.0, 1.0, strict=False) == pytest.approx(1j)


@given(finite, finite)
def test_sqrt_segment_squares(x, y):
    z = complex(x, y)
    assume(not (abs(y) < 1e-12 and abs(x) < 1.0))
    r = sqrt_segment(z, -1.0, 1.0)
    target = (z + 1.0) * (z - 1.0)
    assert abs(r * r - target) <= 1e-13 * max(abs(z) ** 2, 1.0)


@given(st.floats(-0.99, 0.99))
def test_sqrt_segment_cut_is_only_on_segment(x):
    # continuous across the real axis outside [-1, 1], opposite across the segment
    above = sqrt_segment(complex(x, 1e-10), -1.0, 1.0)
    below = sqrt_segment(complex(x, -1e-10), -1.0, 1.0)
    assert abs(above + below) < 1e-6
    out = 1.0 + abs(x) + 0.01
    assert abs(sqrt_segment(complex(out, 1e-10), -1, 1) - sqrt_segment(complex(out, -1e-10), -1, 1)) < 1e-6


# --- quadrature, ODE and root finding ---------------------------------------

def test_quad_examples():
    assert abs(quad_adaptive(math.sin, 0.0, math.pi, 1e-12) - 2.0) < 1e-12
    val = quad_adaptive(lambda x: 1.0 / math.sqrt(1.0 - x * x), -1.0, 1.0, 1e-10)
    assert abs(val - math.pi) < 1e-10
    E = quad_adaptive(lambda t: math.sqrt(1.0 - 0.25 * math.sin(t) ** 2), 0.0, math.pi / 2, 1e-13)
    assert abs(E - ellipe(0.5)) < 1e-12


def test_quad_reports_failure():
    with pytest.raises(AccuracyError) as info:
        quad_adaptive(lambda x: math.sin(1.0 / x) / x, 1e-6, 1.0, 1e-15, limit=5)
    assert math.isfinite(info.value.estimate)


def test_ode_examples():
    assert abs(ode_solve(lambda t, y: y, 1.0, 0.0, 1.0, 1e-11) - math.e) < 1e-9
    assert abs(ode_solve(lambda t, y: -y * y, 1.0, 0.0, 1.0, 1e-11) - 0.5) < 1e-9
    assert ode_solve(lambda t, y: y, 3.0, 1.0, 1.0) == 3.0


def test_ode_stiffness_error():
    with pytest.raises(StiffnessError):
        ode_solve(lambda t, y: 1.0 / (1.0 - t) ** 2, 0.0, 0.0, 0.999999, 1e-12, max_steps=64)


def test_root_examples():
    assert root_find(lambda x: x * x - 2.0, 1.0, 2.0) == pytest.approx(math.sqrt(2.0), abs=1e-14)
    assert root_find(math.cos, 1.0, 2.0) == pytest.approx(math.pi / 2, abs=1e-14)
    with pytest.raises(BracketError):
        root_find(lambda x: x * x + 1.0, -1.0, 1.0)


# --- numba and numpy kernels ------------------------------------------------

@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_kernel_backends_agree():
    rng = np.random.default_rng(3)
    x, y, z = (rng.uniform(0.0, 4.0, 200) for _ in range(3))
    assert np.allclose(_kernels.rf_numba(x, y, z), _kernels.rf_numpy(x, y, z), rtol=1e-14, atol=0)
    assert np.allclose(_kernels.rd_numba(x, y, z), _kernels.rd_numpy(x, y, z), rtol=1e-14, atol=0)
    phi = rng.uniform(-6.0, 6.0, 200)
    k = rng.uniform(0.0, 0.99, 200)
    for u, v in zip(_kernels.ellipfe_numba(phi, k), _kernels.ellipfe_numpy(phi, k)):
        assert np.allclose(u, v, rtol=1e-14, atol=1e-15)
    K, E = ellip_complete(1.0 / 1.21)
    X, Y = rng.uniform(0.0, 3.0, 200), rng.uniform(0.0, 3.0, 200)
    p1 = _kernels.cassini_reduced_pressure_numba(X, Y, 1.1, 1.0, 0.7, K, E)
    p2 = _kernels.cassini_reduced_pressure_numpy(X, Y, 1.1, 1.0, 0.7, K, E)
    assert np.allclose(p1, p2, rtol=1e-13, atol=1e-13)


def test_backend_flag():
    env = dict(os.environ, HSG_DISABLE_NUMBA="1")
    code = "from hsgap import BACKEND; print(BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
