"""Command execution, report determinism, exit codes, CLI plumbing."""

import json
from pathlib import Path

import pytest
import yaml

from convexcut.cli import Report, execute, main
from convexcut.document import parse_document
from convexcut.errors import (
    DanglingReference,
    GenusTooSmall,
    InvalidArc,
    InvariantViolation,
)

from test_document import BALL_DOC, SNAKE_DOC, SOLID_TORUS_DOC

SPLIT_DOC = """
version: "1"
conventions:
  rounding_direction: right
  sign_anchors: {}
surfaces:
  round: {kind: sphere}
  cutdisk: {kind: disk, boundary: [sa, sb]}
curves:
  suture:
    surface: round
    components:
      - closed: [[a, 1/2], [-b, 1/2]]
  equator_sigma:
    surface: cutdisk
    components:
      - arc: {start: [sa, 5/6], end: [sb, 5/6]}
convex_structures:
  ball:
    pieces:
      - name: B
        surface: round
        curves: suture
splitting_scripts:
  equator:
    - piece: B
      surface: cutdisk
      sigma: equator_sigma
      cuts: [[a, b]]
      correspondence: {sa: a, sb: b}
  equator_blind:
    - piece: B
      surface: cutdisk
      cuts: [[a, b]]
      correspondence: {sa: a, sb: b}
"""


def test_validate_counts():
    doc = parse_document(SOLID_TORUS_DOC)
    report = execute(doc, ("validate",))
    assert report.results["ok"] is True
    assert report.results["counts"]["curves"] == 1
    assert report.results["counts"]["slabs"] == 3


def test_explore_solid_torus():
    doc = parse_document(SOLID_TORUS_DOC)
    report = execute(doc, ("explore", "solid", "meridian_disk"))
    assert report.results["candidate_count"] == 2
    pairs = [tuple(map(tuple, leaf["euler_pairs"])) for leaf in
             report.results["leaves"]]
    assert len(set(pairs)) == 2
    assert report.results["pruned"] == 0
    assert report.results["indistinguishable"] == []


def test_analyze_curves():
    doc = parse_document(BALL_DOC)
    report = execute(doc, ("analyze", "suture"))
    assert report.results["num_components"] == 1
    assert report.results["giroux"] is True
    assert report.results["euler_class"] == 0
    assert report.results["chi_plus"] == 1


def test_analyze_structure():
    doc = parse_document(SOLID_TORUS_DOC)
    report = execute(doc, ("analyze", "solid"))
    row = report.results["pieces"]["W"]
    assert row["num_components"] == 4
    assert row["euler_class"] in (0,)


def test_analyze_unknown_target():
    doc = parse_document(BALL_DOC)
    with pytest.raises(DanglingReference):
        execute(doc, ("analyze", "nothing"))


def test_classify():
    doc = parse_document(SNAKE_DOC)
    report = execute(doc, ("classify", "snake"))
    assert report.results["surface_kind"] == "disk"
    assert report.results["signature"]


def test_bypass_snake_is_trivial():
    doc = parse_document(SNAKE_DOC)
    report = execute(doc, ("bypass", "weave"))
    assert report.results["verdict"] == "trivial"
    assert report.results["components_before"] == 1
    assert report.results["components_after"] == 1
    assert report.results["signature_before"] == report.results["signature_after"]


def test_bypass_requires_conventions():
    text = SNAKE_DOC.replace(
        "conventions:\n  rounding_direction: right\n  sign_anchors: {}\n", ""
    )
    doc = parse_document(text)
    assert doc.conventions is None
    with pytest.raises(InvariantViolation):
        execute(doc, ("bypass", "weave"))


def test_bypass_invalid_arc():
    text = SNAKE_DOC.replace("component: [arc, 0]", "component: [arc, 5]")
    doc = parse_document(text)
    with pytest.raises(InvalidArc):
        execute(doc, ("bypass", "weave"))


def test_split_with_explicit_sigma():
    doc = parse_document(SPLIT_DOC)
    report = execute(doc, ("split", "ball", "equator"))
    step = report.results["steps"][0]
    assert step["euler_pair"] == [1, 1]
    assert step["new_pieces"] == ["B:0", "B:1"]
    pieces = report.results["pieces"]
    assert set(pieces) == {"B:0", "B:1"}
    for row in pieces.values():
        assert row["closed_ball"] is True
        assert row["num_components"] == 1


def test_split_without_sigma_is_rejected():
    doc = parse_document(SPLIT_DOC)
    with pytest.raises(InvariantViolation):
        execute(doc, ("split", "ball", "equator_blind"))


def test_explore_same_cut_agrees_with_split():
    doc = parse_document(SPLIT_DOC)
    report = execute(doc, ("explore", "ball", "equator_blind"))
    assert report.results["candidate_count"] == 1
    assert report.results["leaves"][0]["euler_pairs"] == [[1, 1]]


def test_slabs_tables():
    doc = parse_document(BALL_DOC)
    report = execute(doc, ("slabs", "2"))
    assert report.results["slab_count"] == 4
    assert report.results["addition_overtwisted"] == 4
    assert len(report.results["addition"]) == 16
    for row in report.results["bundle"].values():
        assert row["class_count"] == 1
    with pytest.raises(GenusTooSmall):
        execute(doc, ("slabs", "1"))


def test_slabs_neighborhood():
    doc = parse_document(BALL_DOC)
    report = execute(doc, ("slabs", "neighborhood", "4"))
    assert report.results["curve_count"] == 2
    assert str(report.results["slope"]) == "-1/4"
    assert report.results["unique"] is True


def test_glue_commands():
    doc = parse_document(SOLID_TORUS_DOC)
    assert execute(doc, ("glue", "lower", "lower")).results["verdict"] == "overtwisted"
    assert execute(doc, ("glue", "lower", "flat")).results["verdict"] == "tight"
    assert execute(doc, ("glue", "lower", "straight")).results["verdict"] == (
        "overtwisted"
    )
    assert execute(doc, ("glue", "lower", "crossed")).results["verdict"] == "tight"
    layered = execute(doc, ("glue", "layer", "3")).results
    assert layered["torsion"] == 4
    assert layered["vertical_annulus_count"] == 8


def test_glue_usage_errors():
    doc = parse_document(SOLID_TORUS_DOC)
    with pytest.raises(DanglingReference):
        execute(doc, ("glue", "lower", "mystery"))
    with pytest.raises(InvariantViolation):
        execute(doc, ("glue", "layer", "flat"))  # model where a slab is needed
    with pytest.raises(InvariantViolation):
        execute(doc, ("glue", "lower", "2"))  # slab where a model is needed


# -- determinism ---------------------------------------------------------------------


def test_reports_are_byte_identical():
    doc = parse_document(SOLID_TORUS_DOC)
    for command in (
        ("explore", "solid", "meridian_disk"),
        ("analyze", "longitudes"),
        ("slabs", "2"),
    ):
        first = execute(parse_document(SOLID_TORUS_DOC), command)
        second = execute(doc, command)
        assert first.to_text() == second.to_text()
        assert first.to_json() == second.to_json()


def test_report_json_is_loadable():
    doc = parse_document(BALL_DOC)
    tree = json.loads(execute(doc, ("analyze", "suture")).to_json())
    assert tree["command"] == ["analyze", "suture"]
    assert tree["report_version"] == "1"
    assert yaml.safe_load(execute(doc, ("analyze", "suture")).to_text()) == tree


# -- the executable entry point --------------------------------------------------------


def _write(tmp_path, text, name="doc.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_main_explore(tmp_path, capsys):
    path = _write(tmp_path, SOLID_TORUS_DOC)
    code = main(["explore", "solid", "meridian_disk", "--input", path])
    out = capsys.readouterr().out
    assert code == 0
    assert yaml.safe_load(out)["results"]["candidate_count"] == 2


def test_main_json_and_output_file(tmp_path, capsys):
    path = _write(tmp_path, BALL_DOC)
    dest = tmp_path / "report.json"
    code = main(
        ["analyze", "suture", "--input", path, "--json", "--output", str(dest)]
    )
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(dest.read_text())["results"]["giroux"] is True


def test_main_domain_error_is_exit_1(tmp_path, capsys):
    text = SNAKE_DOC.replace("component: [arc, 0]", "component: [arc, 5]")
    path = _write(tmp_path, text)
    code = main(["bypass", "weave", "--input", path])
    err = capsys.readouterr().err
    assert code == 1
    assert "error[InvalidArc]" in err


def test_main_parse_error_is_exit_2(tmp_path, capsys):
    path = _write(tmp_path, 'version: "7"\n')
    code = main(["validate", "--input", path])
    err = capsys.readouterr().err
    assert code == 2
    assert "error[UnknownVersion]" in err


def test_main_missing_file_is_exit_2(tmp_path, capsys):
    code = main(["validate", "--input", str(tmp_path / "absent.yaml")])
    assert code == 2
    assert "error[IO]" in capsys.readouterr().err


def test_main_dangling_command_target_is_exit_2(tmp_path, capsys):
    path = _write(tmp_path, BALL_DOC)
    code = main(["analyze", "nothing", "--input", path])
    assert code == 2
    assert "error[DanglingReference]" in capsys.readouterr().err


def test_main_svg_written(tmp_path, capsys):
    path = _write(tmp_path, SNAKE_DOC)
    svg_dir = tmp_path / "art"
    code = main(
        ["bypass", "weave", "--input", path, "--svg", str(svg_dir)]
    )
    assert code == 0
    files = sorted(p.name for p in svg_dir.iterdir())
    assert files == ["bypass_weave.svg"]
    text = (svg_dir / "bypass_weave.svg").read_text()
    assert text.startswith("<svg ")
    assert text.count('<g transform=') == 2  # before and after panels


def test_main_svg_chart_fallback(tmp_path, capsys):
    path = _write(tmp_path, SOLID_TORUS_DOC)
    svg_dir = tmp_path / "art"
    code = main(
        ["analyze", "longitudes", "--input", path, "--svg", str(svg_dir)]
    )
    assert code == 0
    report = yaml.safe_load(capsys.readouterr().out)
    codes = [d["code"] for d in report["diagnostics"]]
    assert "UnsupportedSurface" in codes
    assert "SvgWritten" in codes
    assert (svg_dir / "analyze_longitudes.svg").exists()
