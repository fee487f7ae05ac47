import cmath
import math

import pytest
from hypothesis import settings
from scipy import integrate

from hsgap.core import Family
from hsgap.schwarz import cassini_q, schwarz_eval

_ACCEPTANCE_KEY = pytest.StashKey[list]()

# first calls compile numba kernels; wall-clock deadlines would be flaky
settings.register_profile("hsgap", deadline=None)
settings.load_profile("hsgap")


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def record(request):
    """Collects acceptance outcomes for the terminal summary."""
    log = request.config.stash[_ACCEPTANCE_KEY]

    def _record(number, ok, text):
        log.append((number, ok, text))

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_ACCEPTANCE_KEY, [])
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, text in sorted(log):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {text}")


def pressure_oracle(state, ratio, z):
    """P(z) by integrating G' = -(S_t + ratio S)/2 from the vertex on the positive real axis.

    Independent of the closed-form pressures: only the Schwarz function is
    used.  The path leaves the vertex vertically to a height clear of all cuts,
    runs horizontally and drops onto z.
    """
    z = complex(z)
    if state.family is Family.CASSINI:
        zr = math.sqrt(state.a ** 2 + state.b ** 2)
        height = 0.5 * cassini_q(state)
    else:
        zr = state.a
        height = 0.5 * state.b
    if z.imag < 0.0:
        height = -height

    def gp(w):
        ev = schwarz_eval(state, w)
        return -0.5 * (ev.s_t + ratio * ev.s)

    nodes = [complex(zr), complex(zr, height), complex(z.real, height), z]
    total = 0.0
    for p0, p1 in zip(nodes[:-1], nodes[1:]):
        dz = p1 - p0
        if dz == 0:
            continue
        val, _ = integrate.quad(lambda s: (gp(p0 + s * dz) * dz).real, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13, limit=200)
        total += val
    return total + 0.25 * ratio * (abs(z) ** 2 - zr * zr)


@pytest.fixture
def oracle():
    return pressure_oracle


def principal_sqrt(w):
    return cmath.sqrt(w)
