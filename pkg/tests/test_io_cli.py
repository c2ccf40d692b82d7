import json
import subprocess
import sys

import pytest

from conftest import bigon_model
from dimerex.cli import COMMANDS, main
from dimerex.dimer import DimerStructureError
from dimerex.figures import emit_figures, polygon_svg
from dimerex.io import (
    FIXTURES,
    DimerParseError,
    dimer_to_dict,
    fixture_text,
    load_fixture,
    parse_dimer,
    serialize_dimer,
)
from dimerex.exceptional import build_collection, verify_strong_exceptional
from dimerex.matchings import characteristic_polygon, classify_matchings


@pytest.mark.parametrize("name", FIXTURES)
def test_round_trip(name):
    m = load_fixture(name)
    text = serialize_dimer(m)
    again = parse_dimer(text)
    assert dimer_to_dict(again) == dimer_to_dict(m)
    assert serialize_dimer(again) == text


def test_missing_cyclic_order_is_located():
    doc = json.loads(fixture_text("c3"))
    del doc["cyclic_order"]["w1"]
    with pytest.raises(DimerParseError) as info:
        parse_dimer(doc)
    assert info.value.location == "cyclic_order.w1"


def test_non_integer_shift():
    doc = json.loads(fixture_text("c3"))
    doc["edges"][1]["shift"] = [0.5, 0]
    with pytest.raises(DimerParseError) as info:
        parse_dimer(doc)
    assert "shift" in info.value.location


def test_bad_json_reports_position():
    with pytest.raises(DimerParseError) as info:
        parse_dimer('{"blacks": [')
    assert info.value.location.startswith("line 1")


def test_parse_error_is_structural():
    assert issubclass(DimerParseError, DimerStructureError)


def test_positions_are_exact():
    m = load_fixture("c3")
    assert dimer_to_dict(m)["positions"]["b1"] == ["2/3", "2/3"]


def run_cli(capsys, *args):
    code = main(list(args))
    return code, capsys.readouterr().out


@pytest.mark.parametrize("command", [c for c in COMMANDS if c != "report"])
def test_every_command_succeeds_on_dp0(capsys, command):
    code, out = run_cli(capsys, command, "--fixture", "dp0")
    assert code == 0 and out.strip()


def test_verify_c3_has_no_central_candidate(capsys):
    code, out = run_cli(capsys, "verify", "--fixture", "c3")
    assert code == 2 and "no central candidate" in out


def test_crosscheck_f0_json(capsys):
    code, out = run_cli(capsys, "crosscheck", "--fixture", "f0", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["equal"] and data["path_total"] == data["toric_total"] == 24


def test_json_output_is_deterministic(capsys):
    first = run_cli(capsys, "collection", "--fixture", "wf1", "--format", "json")
    second = run_cli(capsys, "collection", "--fixture", "wf1", "--format", "json")
    assert first == second


def test_usage_errors(capsys):
    assert run_cli(capsys, "verify")[0] == 2
    assert run_cli(capsys, "nonsense")[0] == 2
    assert run_cli(capsys, "verify", "--fixture", "dp0", "--origin", "x")[0] == 2
    assert run_cli(capsys, "verify", "--fixture", "dp0", "--pm", "999")[0] == 2


def test_corner_pm_is_rejected(capsys):
    m = load_fixture("dp0")
    corner = next(i for i, lab in classify_matchings(m).labels.items() if lab == "corner")
    code, out = run_cli(capsys, "verify", "--fixture", "dp0", "--pm", str(corner))
    assert code == 2 and "no central candidate" in out


def test_file_input(tmp_path, capsys):
    p = tmp_path / "f0.json"
    p.write_text(fixture_text("f0"))
    assert run_cli(capsys, "validate", str(p))[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run_cli(capsys, "validate", str(bad))[0] == 2


def test_inconsistent_model_zigzag_fails(tmp_path, capsys):
    p = tmp_path / "bigon.json"
    p.write_text(serialize_dimer(bigon_model()))
    assert run_cli(capsys, "zigzag", str(p))[0] == 1


def test_report_writes_figures(tmp_path, capsys):
    code, out = run_cli(capsys, "report", "--fixture", "dp0", "--figures", str(tmp_path))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["dimer.svg", "hom.svg", "polygon.svg", "quiver.svg"]


def test_figures_are_deterministic():
    m = load_fixture("f1")
    poly = characteristic_polygon(m)
    coll = build_collection(m, classify_matchings(m).central_candidates[0])
    rep = verify_strong_exceptional(coll)
    assert emit_figures(m, poly, rep) == emit_figures(m, poly, rep)


def test_polygon_figure_marks_interior_points():
    poly = characteristic_polygon(load_fixture("dp0"))
    svg = polygon_svg(poly)
    assert svg.count('class="interior"') == len(poly.interior_points) == 1
    assert svg.count('class="boundary"') == len(poly.boundary_points)


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "dimerex.cli", "validate", "--fixture", "c3"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0
