import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hsgap import ConfigError, Family, preset
from hsgap.config import (
    dump_scenario,
    dumps_scenario,
    load_scenario,
    loads_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from hsgap.presets import PRESETS

pos = st.floats(0.01, 10.0, allow_nan=False, allow_infinity=False)


@st.composite
def documents(draw):
    fam = draw(st.sampled_from(["circle", "confocal_ellipse", "variable_focus_ellipse", "cassini"]))
    b0 = draw(pos)
    a0 = b0 * draw(st.floats(1.01, 3.0))
    doc = {"family": fam, "a0": a0, "b0": b0, "h0": draw(pos)}
    if fam == "circle":
        doc["b0"] = a0
    doc["gap"] = draw(st.one_of(
        st.builds(lambda r: {"kind": "linear", "rate": r}, st.floats(-5.0, 5.0)),
        st.just({"kind": "table", "samples": [[0.0, doc["h0"]], [0.1, doc["h0"] / 2], [0.2, doc["h0"] / 3]]}),
    ))
    if fam == "variable_focus_ellipse":
        doc["d2_schedule"] = {"kind": "exp", "lambda": draw(st.floats(-30.0, 30.0))}
    doc["nu1"], doc["nu2"] = draw(pos), draw(pos)
    if draw(st.booleans()):
        doc["mobility_mode"] = {"kind": "constant", "k1": draw(pos), "k2": draw(pos)}
    if draw(st.booleans()):
        doc["f"] = {"kind": "constant", "value": draw(st.floats(-100.0, 100.0))}
    doc["tolerances"] = {"boundary": draw(st.floats(1e-9, 1e-3))}
    doc["samples"] = {"boundary": draw(st.integers(4, 512))}
    return doc


@given(documents())
def test_round_trip(doc):
    sc = scenario_from_dict(doc)
    text = dumps_scenario(sc)
    again = loads_scenario(text)
    assert scenario_to_dict(again) == scenario_to_dict(sc)
    assert dumps_scenario(again) == text


@pytest.mark.parametrize("name", PRESETS)
def test_presets_round_trip(name, tmp_path):
    sc = preset(name)
    path = tmp_path / f"{name}.json"
    dump_scenario(sc, path)
    back = load_scenario(path)
    assert scenario_to_dict(back) == scenario_to_dict(sc)
    assert back.family is sc.family
    if sc.d2_schedule is not None:
        assert back.d2_schedule.value(0.07) == sc.d2_schedule.value(0.07)


def _base():
    return {"family": "confocal_ellipse", "a0": 2.0, "b0": 1.0, "h0": 0.1, "gap": {"kind": "linear", "rate": -1.0}}


@pytest.mark.parametrize("mutate, fragment", [
    (lambda d: d.pop("a0"), "a0: missing"),
    (lambda d: d.update(a0="two"), "a0: expected a finite number"),
    (lambda d: d.update(family="square"), "family:"),
    (lambda d: d.update(gap={"kind": "cubic"}), "gap.kind"),
    (lambda d: d.update(gap={"kind": "linear"}), "gap.rate: missing"),
    (lambda d: d.update(colour=1), "unknown field(s) colour"),
    (lambda d: d.update(d2_schedule={"kind": "exp", "lambda": 1.0}), "d2_schedule"),
    (lambda d: d.update(mobility_mode={"kind": "constant", "k1": 1.0}), "mobility_mode.k2"),
    (lambda d: d.update(tolerances={"boundary": -1.0}), "tolerances.boundary"),
    (lambda d: d.update(samples={"boundary": 2.5}), "samples.boundary"),
    (lambda d: d.update(b0=3.0), "scenario:"),
    (lambda d: d.update(gap={"kind": "table", "samples": [[0.0, 0.2], [0.1, 0.1]]}), "gap.samples"),
])
def test_field_diagnostics(mutate, fragment):
    doc = _base()
    mutate(doc)
    with pytest.raises(ConfigError) as info:
        scenario_from_dict(doc)
    assert fragment in str(info.value)


def test_json_syntax_error_reports_position():
    text = '{\n  "family": "circle",\n  "a0": 1.0,,\n}'
    with pytest.raises(ConfigError) as info:
        loads_scenario(text)
    assert "line 3" in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_scenario(tmp_path / "nope.json")


def test_circle_b0_optional():
    sc = scenario_from_dict({"family": "circle", "a0": 1.0, "h0": 0.1, "gap": {"kind": "linear", "rate": -1.0}})
    assert sc.family is Family.CIRCLE and sc.b0 == 1.0


def test_floats_survive_exactly():
    doc = _base()
    doc["a0"] = 2.0000000000000004
    doc["f"] = {"kind": "constant", "value": 0.1 + 0.2}
    out = json.loads(dumps_scenario(scenario_from_dict(doc)))
    assert out["a0"] == 2.0000000000000004
    assert out["f"]["value"] == 0.1 + 0.2
