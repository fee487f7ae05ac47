import csv
import io
import json
import math
import re

import pytest

from hsgap import preset
from hsgap.cli import fmt, main
from hsgap.config import dump_scenario


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_evolve_circle(capsys):
    code, out, _ = run(["evolve", "circle", "--a0", "1", "--h0", "0.1", "--rate", "-1", "--t", "0.05"], capsys)
    assert code == 0
    rows = _rows(out)
    assert rows[0] == ["t", "a", "b", "d", "area", "h", "area_h"]
    assert float(rows[1][1]) == pytest.approx(math.sqrt(2.0), rel=1e-15)


def test_evolve_preset_times(capsys):
    code, out, _ = run(["evolve", "fig1a"], capsys)
    rows = _rows(out)[1:]
    assert code == 0 and [float(r[0]) for r in rows] == [0.0, 0.05, 0.07, 0.09]
    vols = [float(r[6]) for r in rows]
    assert max(vols) - min(vols) < 1e-14


def test_fmt_round_trips():
    for v in (0.1, 1 / 3, math.pi, 1e-300, -2.5e17):
        assert float(fmt(v)) == v


def test_figure_fig1a(tmp_path, capsys):
    code, _, _ = run(["figure", "fig1a", "--outdir", str(tmp_path)], capsys)
    assert code == 0
    csvs = sorted(tmp_path.glob("*.csv"))
    assert len(csvs) == 4
    rows = _rows((tmp_path / "fig1a_t0.05.csv").read_text())
    assert rows[0] == ["x", "y"]
    pts = [(float(x), float(y)) for x, y in rows[1:]]
    a = math.sqrt((3 + math.sqrt(73)) / 2)
    assert pts[0][0] == pytest.approx(a, rel=1e-15) and pts[0][0] == pytest.approx(2.4025, abs=1e-4)
    top = pts[len(pts) // 4]
    assert top[1] == pytest.approx(4 / a, rel=1e-14) and top[1] == pytest.approx(1.6649, abs=1e-4)
    svg = (tmp_path / "fig1a.svg").read_text()
    assert svg.count("<path") == 4
    assert "stroke-dasharray" not in svg


@pytest.mark.parametrize("name, paths, dashes", [("fig1b", 4, 4), ("fig2", 2, 6)])
def test_figure_cuts_dashed(name, paths, dashes, tmp_path, capsys):
    code, _, _ = run(["figure", name, "--outdir", str(tmp_path)], capsys)
    svg = (tmp_path / f"{name}.svg").read_text()
    assert code == 0 and svg.count("<path") == paths and svg.count("stroke-dasharray") == dashes


def test_outputs_byte_identical(tmp_path, capsys):
    for d in ("a", "b"):
        run(["figure", "fig2", "--outdir", str(tmp_path / d)], capsys)
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()
    _, o1, _ = run(["field", "fig1b", "--t", "0.05", "--n", "15"], capsys)
    _, o2, _ = run(["field", "fig1b", "--t", "0.05", "--n", "15"], capsys)
    assert o1 == o2


def test_validate_fig2(capsys):
    code, out, err = run(["validate", "fig2", "--t", "0.05"], capsys)
    assert code == 0
    reports = json.loads(out)
    assert all(r["pass"] for r in reports)
    assert {"check_name", "max_residual", "tolerance", "pass", "probes"} <= set(reports[0])
    assert "PASS" in err


def test_validate_failure_exit_code(tmp_path, capsys):
    sc = preset("fig2")
    path = tmp_path / "strict.json"
    dump_scenario(sc, path)
    doc = json.loads(path.read_text())
    doc["tolerances"]["schwarz"] = 1e-300
    path.write_text(json.dumps(doc))
    code, _, _ = run(["validate", str(path), "--t", "0.05"], capsys)
    assert code == 1


def test_field_excludes_cuts(capsys):
    code, out, _ = run(["field", "fig2", "--t", "0.05", "--n", "21"], capsys)
    rows = _rows(out)
    assert code == 0 and rows[0] == ["x", "y", "region", "p", "p_tilde"]
    for r in rows[1:]:
        x, y = float(r[0]), float(r[1])
        assert not (y == 0.0 and abs(x) < 1.0)
        assert r[2] in ("1", "2")


def test_density_output(capsys):
    code, out, err = run(["density", "fig1b", "--t", "0.05", "--n", "16"], capsys)
    assert code == 0
    rows = _rows(out)
    assert rows[0] == ["support", "s", "x", "y", "mu"] and len(rows) == 17
    m = re.search(r"total_flux\[focal segment\] = (\S+)", err)
    assert m and abs(float(m.group(1))) < 1e-6
    code, out, err = run(["density", "fig1a"], capsys)
    assert code == 0 and "no sink/source" in err


def test_json_source(tmp_path, capsys):
    path = tmp_path / "s.json"
    dump_scenario(preset("fig1c"), path)
    code, out, _ = run(["evolve", str(path), "--t", "0.05"], capsys)
    assert code == 0 and len(_rows(out)) == 2


def test_usage_errors(tmp_path, capsys):
    assert run(["evolve", "no-such-thing"], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"family": "circle",\n "a0": }')
    code, _, err = run(["evolve", str(bad)], capsys)
    assert code == 2 and "line 2" in err


def test_domain_and_topology_errors(capsys):
    code, _, err = run(["evolve", "fig1a", "--t", "0.2"], capsys)
    assert code == 3
    code, _, err = run(["evolve", "cassini", "--a0", "1.1", "--b0", "1", "--rate", "1", "--t", "0.06"], capsys)
    assert code == 3 and "topology change at t = 0.06" in err
