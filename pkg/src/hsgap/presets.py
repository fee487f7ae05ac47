"""Named scenarios reproducing the published figure configurations.

Ellipse figures: a0 = 2, b0 = 1, h0 = 0.1, h(t) = h0 - t, snapshot times
0, 0.05, 0.07, 0.09, with d^2 constant (a), growing as d0^2 e^{25 t} (b) or
shrinking as d0^2 e^{-25 t} (c).  Cassini figure: b = 1, a0 = 1.1, h0 = 0.1,
times 0 and 0.05.  No viscosities are given there; nu1 = 1, nu2 = 0.5 are used.
"""
from __future__ import annotations

from .core import Family, FluidPair, FocalSchedule, GapSchedule, Scenario
from .errors import ConfigError

DEFAULT_NU1 = 1.0
DEFAULT_NU2 = 0.5

ELLIPSE_TIMES = (0.0, 0.05, 0.07, 0.09)
CASSINI_TIMES = (0.0, 0.05)


def _fluids():
    return FluidPair(DEFAULT_NU1, DEFAULT_NU2)


def _ellipse(name, lam):
    a0, b0, h0 = 2.0, 1.0, 0.1
    gap = GapSchedule.linear(h0, -1.0)
    if lam is None:
        return Scenario(Family.CONFOCAL_ELLIPSE, a0, b0, gap, _fluids(), name=name)
    sched = FocalSchedule.exponential(a0 * a0 - b0 * b0, lam)
    return Scenario(Family.VARIABLE_FOCUS_ELLIPSE, a0, b0, gap, _fluids(), d2_schedule=sched, name=name)


def _cassini(name):
    return Scenario(Family.CASSINI, 1.1, 1.0, GapSchedule.linear(0.1, -1.0), _fluids(), name=name)


_BUILDERS = {
    "fig1a": (lambda: _ellipse("fig1a", None), ELLIPSE_TIMES),
    "fig1b": (lambda: _ellipse("fig1b", 25.0), ELLIPSE_TIMES),
    "fig1c": (lambda: _ellipse("fig1c", -25.0), ELLIPSE_TIMES),
    "fig2": (lambda: _cassini("fig2"), CASSINI_TIMES),
}

PRESETS = tuple(_BUILDERS)


def preset(name: str) -> Scenario:
    """Scenario for a figure preset (``fig1a``, ``fig1b``, ``fig1c``, ``fig2``)."""
    try:
        return _BUILDERS[name][0]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def preset_times(name: str) -> tuple:
    """Snapshot times drawn in the figure for ``name``."""
    try:
        return _BUILDERS[name][1]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
