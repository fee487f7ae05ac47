"""JSON scenario documents.

Schema (all lengths and times in one consistent unit system)::

    {
      "family": "circle" | "confocal_ellipse" | "variable_focus_ellipse" | "cassini",
      "a0": 2.0, "b0": 1.0, "h0": 0.1,
      "gap": {"kind": "linear", "rate": -1.0}
           | {"kind": "table", "samples": [[0.0, 0.1], [0.05, 0.05], ...]},
      "d2_schedule": {"kind": "exp", "lambda": 25.0},   # variable_focus_ellipse only
      "nu1": 1.0, "nu2": 0.5,
      "mobility_mode": "derived" | {"kind": "constant", "k1": 0.01, "k2": 0.02},
      "f": "zero" | {"kind": "constant", "value": 0.0},
      "tolerances": {...}, "samples": {...},             # optional overrides
      "name": "..."                                      # optional
    }

For the variable-focus ellipse d^2(t) = (a0^2 - b0^2) exp(lambda t).  For a
circle ``b0`` may be omitted.  Floats are written with ``repr`` so a
load/dump cycle reproduces every number exactly.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

from .core import (
    DEFAULT_SAMPLES,
    DEFAULT_TOLERANCES,
    Family,
    FluidPair,
    FocalSchedule,
    GapSchedule,
    PressureOffset,
    Scenario,
)
from .errors import ConfigError, HeleShawError

__all__ = ["scenario_from_dict", "scenario_to_dict", "load_scenario", "dump_scenario", "loads_scenario", "dumps_scenario"]

_KEYS = {"family", "a0", "b0", "h0", "gap", "d2_schedule", "nu1", "nu2", "mobility_mode", "f", "tolerances", "samples", "name"}


def _num(doc, key, path, *, required=True, default=None):
    if key not in doc:
        if required:
            raise ConfigError(f"{path}{key}: missing required field")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{path}{key}: expected a finite number, got {v!r}")
    return float(v)


def _obj(doc, key, path):
    v = doc[key]
    if not isinstance(v, dict):
        raise ConfigError(f"{path}{key}: expected an object, got {v!r}")
    return v


def _kind(obj, path, allowed):
    k = obj.get("kind")
    if k not in allowed:
        raise ConfigError(f"{path}.kind: expected one of {', '.join(map(repr, allowed))}, got {k!r}")
    return k


def _check_keys(obj, allowed, path):
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise ConfigError(f"{path}: unknown field(s) {', '.join(extra)}")


def scenario_from_dict(doc: dict) -> Scenario:
    """Build a :class:`Scenario` from a parsed document; raises :class:`ConfigError`."""
    if not isinstance(doc, dict):
        raise ConfigError("document root must be a JSON object")
    _check_keys(doc, _KEYS, "document")
    fam_name = doc.get("family")
    try:
        family = Family(fam_name)
    except ValueError:
        raise ConfigError(f"family: expected one of {', '.join(f.value for f in Family)}, got {fam_name!r}") from None
    a0 = _num(doc, "a0", "")
    b0 = _num(doc, "b0", "", required=family is not Family.CIRCLE, default=a0)
    h0 = _num(doc, "h0", "")

    if "gap" not in doc:
        raise ConfigError("gap: missing required field")
    g = _obj(doc, "gap", "")
    kind = _kind(g, "gap", ("linear", "table"))
    try:
        if kind == "linear":
            _check_keys(g, {"kind", "rate"}, "gap")
            gap = GapSchedule.linear(h0, _num(g, "rate", "gap."))
        else:
            _check_keys(g, {"kind", "samples"}, "gap")
            samples = g.get("samples")
            if not isinstance(samples, list):
                raise ConfigError("gap.samples: expected a list of [t, h] pairs")
            gap = GapSchedule.table(samples)
            if gap.h0 != h0:
                raise ConfigError(f"gap.samples: first sample h = {gap.h0!r} differs from h0 = {h0!r}")
    except ConfigError:
        raise
    except (HeleShawError, ValueError, TypeError) as exc:
        raise ConfigError(f"gap: {exc}") from None

    sched = None
    if "d2_schedule" in doc and doc["d2_schedule"] is not None:
        d = _obj(doc, "d2_schedule", "")
        _kind(d, "d2_schedule", ("exp",))
        _check_keys(d, {"kind", "lambda"}, "d2_schedule")
        sched = FocalSchedule.exponential(a0 * a0 - b0 * b0, _num(d, "lambda", "d2_schedule."))
    if (sched is not None) != (family is Family.VARIABLE_FOCUS_ELLIPSE):
        raise ConfigError("d2_schedule: required for, and only allowed with, family 'variable_focus_ellipse'")

    nu1 = _num(doc, "nu1", "", required=False, default=1.0)
    nu2 = _num(doc, "nu2", "", required=False, default=1.0)
    mode = doc.get("mobility_mode", "derived")
    try:
        if mode == "derived":
            fluids = FluidPair(nu1, nu2)
        elif isinstance(mode, dict):
            _kind(mode, "mobility_mode", ("constant",))
            _check_keys(mode, {"kind", "k1", "k2"}, "mobility_mode")
            fluids = FluidPair.constant(_num(mode, "k1", "mobility_mode."), _num(mode, "k2", "mobility_mode."), nu1, nu2)
        else:
            raise ConfigError(f"mobility_mode: expected 'derived' or a constant-mode object, got {mode!r}")
    except ConfigError:
        raise
    except HeleShawError as exc:
        raise ConfigError(f"mobility_mode: {exc}") from None

    f = doc.get("f", "zero")
    if f == "zero":
        offset = PressureOffset.zero()
    elif isinstance(f, dict):
        _kind(f, "f", ("constant", "zero"))
        if f["kind"] == "zero":
            offset = PressureOffset.zero()
        else:
            _check_keys(f, {"kind", "value"}, "f")
            offset = PressureOffset.constant(_num(f, "value", "f."))
    else:
        raise ConfigError(f"f: expected 'zero' or a constant-offset object, got {f!r}")

    tolerances = doc.get("tolerances", {})
    samples = doc.get("samples", {})
    for key, table, default, kind in (("tolerances", tolerances, DEFAULT_TOLERANCES, float), ("samples", samples, DEFAULT_SAMPLES, int)):
        if not isinstance(table, dict):
            raise ConfigError(f"{key}: expected an object")
        _check_keys(table, default, key)
        for name, v in table.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
                raise ConfigError(f"{key}.{name}: expected a positive number, got {v!r}")
            if kind is int and int(v) != v:
                raise ConfigError(f"{key}.{name}: expected an integer, got {v!r}")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ConfigError("name: expected a string")
    try:
        return Scenario(
            family, a0, b0, gap, fluids, d2_schedule=sched, f_of_t=offset,
            tolerances={k: float(v) for k, v in tolerances.items()},
            samples={k: int(v) for k, v in samples.items()},
            name=name,
        )
    except HeleShawError as exc:
        raise ConfigError(f"scenario: {exc}") from None


def scenario_to_dict(scenario: Scenario) -> dict:
    """Serializable document for ``scenario`` (inverse of :func:`scenario_from_dict`)."""
    doc = {
        "family": scenario.family.value,
        "a0": scenario.a0,
        "b0": scenario.b0,
        "h0": scenario.h0,
        "gap": dict(scenario.gap.spec),
        "nu1": scenario.fluids.nu1,
        "nu2": scenario.fluids.nu2,
    }
    if scenario.d2_schedule is not None:
        doc["d2_schedule"] = dict(scenario.d2_schedule.spec)
    fl = scenario.fluids
    doc["mobility_mode"] = "derived" if fl.mode == "derived" else {"kind": "constant", "k1": fl.k1, "k2": fl.k2}
    fs = dict(scenario.f_of_t.spec)
    doc["f"] = "zero" if fs.get("kind") == "zero" else fs
    doc["tolerances"] = dict(scenario.tolerances)
    doc["samples"] = dict(scenario.samples)
    if scenario.name:
        doc["name"] = scenario.name
    return doc


def loads_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return scenario_from_dict(doc)


def dumps_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=2)


def load_scenario(path) -> Scenario:
    """Read a scenario document from ``path``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return loads_scenario(text)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def dump_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(dumps_scenario(scenario) + "\n")
