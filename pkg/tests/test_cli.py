"""End-to-end command-line workflow, run in-process through cli.main.

The worksheet golden file pins the exact bytes of the small two-factor
table; everything else goes through a scratch project in tmp_path.
"""

import csv
import json
import os

import pytest

from rsmkit import cli

pytestmark = pytest.mark.filterwarnings(
    "ignore::rsmkit.design.DesignReplicationWarning")

STAMP = "2026-03-01T09:00:00+00:00"

NEW_ARGS = [
    "new", "--name", "golden worksheet",
    "--factor", "speed:100:200:rpm",
    "--factor", "temp:30:50:C",
    "--response", "yield",
]


@pytest.fixture
def project(tmp_path, monkeypatch):
    path = tmp_path / "study.json"
    monkeypatch.setenv("RSMKIT_PROJECT", str(path))
    monkeypatch.setenv("RSMKIT_NOW", STAMP)
    return path


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def fill_worksheet(path, fn):
    """Fill the response column from a function of the coded settings."""
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    header, data = rows[0], rows[1:]
    for row in data:
        coded_speed = (float(row[3]) - 150.0) / 50.0
        coded_temp = (float(row[4]) - 40.0) / 10.0
        row[5] = repr(float(fn(coded_speed, coded_temp)))
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerows([header] + data)


def start_project(capsys, project, tmp_path, fn=None, design_args=()):
    """new + design --out; optionally fill and ingest the worksheet."""
    assert run_cli(capsys, NEW_ARGS + ["--quiet"])[0] == 0
    worksheet = tmp_path / "ws.csv"
    code, _, _ = run_cli(
        capsys, ["design", "--out", str(worksheet), "--quiet", *design_args])
    assert code == 0
    if fn is not None:
        fill_worksheet(worksheet, fn)
        assert run_cli(capsys, ["ingest", str(worksheet), "--quiet"])[0] == 0
    return worksheet


class TestHelpers:
    def test_parse_factor(self):
        spec = cli._parse_factor("speed:100:200:rpm")
        assert (spec.name, spec.low, spec.high, spec.unit_label) == \
            ("speed", 100.0, 200.0, "rpm")
        assert cli._parse_factor("pH:2:9").unit_label == ""
        with pytest.raises(cli.UsageError):
            cli._parse_factor("speed:100")
        with pytest.raises(cli.UsageError):
            cli._parse_factor("speed:low:high")

    def test_parse_alpha(self):
        assert cli._parse_alpha("rotatable") == "rotatable"
        assert cli._parse_alpha("FACE") == "face"
        assert cli._parse_alpha("none") is None
        assert cli._parse_alpha("1.5") == 1.5
        with pytest.raises(cli.UsageError):
            cli._parse_alpha("wide")

    def test_parse_terms(self):
        basis = cli._parse_terms("auto", n_blocks=2)(3)
        assert basis.include_twi and basis.include_pq and basis.include_block
        basis = cli._parse_terms("auto", n_blocks=1)(3)
        assert not basis.include_block
        basis = cli._parse_terms("fo", n_blocks=1)(2)
        assert not (basis.include_twi or basis.include_pq)
        with pytest.raises(cli.UsageError):
            cli._parse_terms("fo,cubic", n_blocks=1)

    def test_parse_radii(self):
        assert cli._parse_radii("0.5,1,1.5") == [0.5, 1.0, 1.5]
        with pytest.raises(cli.UsageError):
            cli._parse_radii("0.5,x")
        with pytest.raises(cli.UsageError):
            cli._parse_radii(",")

    def test_table_alignment(self):
        text = cli._table(["Term", "Est"], [["a", "1.5"], ["bb", "-22.5"]])
        assert text.splitlines() == [
            "Term    Est",
            "a       1.5",
            "bb    -22.5",
        ]

    def test_num_formats_none(self):
        assert cli._num(None) == "n/a"
        assert cli._num(0.125) == "0.125"


class TestNewAndDesign:
    def test_new_writes_pinned_project(self, capsys, project):
        code, out, err = run_cli(capsys, NEW_ARGS)
        assert code == 0 and err == ""
        assert "golden-worksheet" in out
        doc = json.loads(project.read_text())
        assert doc["schema"] == 1
        assert doc["campaign"]["created"] == STAMP
        assert doc["campaign"]["modified"] == STAMP

    def test_new_quiet_is_silent(self, capsys, project):
        code, out, _ = run_cli(capsys, NEW_ARGS + ["--quiet"])
        assert code == 0 and out == ""

    def test_design_stdout_matches_golden_worksheet(self, capsys, project):
        run_cli(capsys, NEW_ARGS + ["--quiet"])
        code, out, _ = run_cli(
            capsys,
            ["design", "--type", "ccd", "--alpha", "none",
             "--centers", "1", "--replicates", "1"])
        assert code == 0
        golden = open(os.path.join(os.path.dirname(__file__),
                                   "data", "table1_worksheet.csv")).read()
        assert out == golden

    def test_design_out_file(self, capsys, project, tmp_path):
        run_cli(capsys, NEW_ARGS + ["--quiet"])
        target = tmp_path / "phase0.csv"
        code, out, _ = run_cli(
            capsys, ["design", "--alpha", "none", "--out", str(target)])
        assert code == 0
        assert str(target) in out
        assert target.read_text().startswith("run_order,std_order,block,")

    def test_design_json_summary(self, capsys, project):
        run_cli(capsys, NEW_ARGS + ["--quiet"])
        code, out, _ = run_cli(
            capsys, ["design", "--centers", "3", "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        assert doc["phase"] == 0
        assert doc["runs"] == 11  # 4 core + 3 centers + 4 axial
        assert doc["worksheet_csv"].startswith("run_order,")

    def test_projects_are_byte_reproducible(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("RSMKIT_NOW", STAMP)
        texts = []
        for name in ("a", "b"):
            path = tmp_path / f"{name}.json"
            worksheet = tmp_path / f"{name}.csv"
            args = ["--project", str(path), "--quiet"]
            assert run_cli(capsys, NEW_ARGS + args)[0] == 0
            assert run_cli(
                capsys,
                ["design", "--centers", "3", "--seed", "4",
                 "--out", str(worksheet)] + args)[0] == 0
            fill_worksheet(worksheet, lambda s, t: 20.0 + 2.0 * s - t + s * t)
            assert run_cli(capsys, ["ingest", str(worksheet)] + args)[0] == 0
            assert run_cli(capsys, ["fit"] + args)[0] == 0
            texts.append(path.read_text())
        assert texts[0] == texts[1]


class TestAnalysisCommands:
    def test_fit_text_report(self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 50.0 - 3.0 * s + 4.0 * t,
                      design_args=["--alpha", "none", "--centers", "3"])
        code, out, _ = run_cli(capsys, ["fit", "--terms", "fo"])
        assert code == 0
        assert "R-squared 1" in out
        assert "Residual" in out and "Total" in out
        term_lines = [l for l in out.splitlines() if l.startswith(("speed", "temp"))]
        assert any("-3" in l for l in term_lines)
        assert any("4" in l for l in term_lines)

    def test_fit_json_document(self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 5.0 + s + 2.0 * t + 0.5 * s * s + t * t,
                      design_args=["--centers", "3"])
        code, out, _ = run_cli(capsys, ["fit", "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        assert len(doc["fitted"]["coefficients"]) == 6
        assert doc["anova"]["rows"][0]["source"] == "FirstOrder"
        assert doc["stationary"] is not None

    def test_path_reports_descent_direction(self, capsys, project, tmp_path):
        # plane 50 - 3*s + 4*t, minimized: unit step lands at (0.6, -0.8)
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 50.0 - 3.0 * s + 4.0 * t,
                      design_args=["--alpha", "none", "--centers", "3"])
        assert run_cli(capsys, ["fit", "--terms", "fo"])[0] == 0
        code, out, _ = run_cli(capsys, ["path", "--radii", "1"])
        assert code == 0
        row = [l for l in out.splitlines() if l.startswith("1 ")]
        assert len(row) == 1
        assert row[0].split() == ["1", "0.6", "-0.8", "45"]

    def test_path_keeps_fitted_terms(self, capsys, project, tmp_path):
        # re-running with new radii must not widen the fo basis to auto,
        # which would be rank deficient without axial points
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 50.0 - 3.0 * s + 4.0 * t,
                      design_args=["--alpha", "none", "--centers", "3"])
        assert run_cli(capsys, ["fit", "--terms", "fo"])[0] == 0
        code, out, _ = run_cli(capsys, ["path", "--radii", "0.5,2"])
        assert code == 0
        assert "extrapolated" in out

    def test_path_uses_stored_analysis_without_resaving(
            self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 9.0 + 2.0 * s - t,
                      design_args=["--centers", "3"])
        assert run_cli(capsys, ["fit"])[0] == 0
        before = project.read_text()
        code, out, _ = run_cli(capsys, ["path"])
        assert code == 0
        assert "Steepest path" in out
        assert project.read_text() == before

    def test_path_json(self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 9.0 + 2.0 * s - t,
                      design_args=["--centers", "2"])
        code, out, _ = run_cli(capsys, ["path", "--format", "json"])
        assert code == 0
        doc = json.loads(out)
        steps = doc["path"]["steps"]
        assert [s["radius"] for s in steps] == [0.25, 0.5, 0.75, 1.0, 1.25, 1.5]

    def test_path_flat_surface_notes_no_direction(
            self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path, fn=lambda s, t: 12.0,
                      design_args=["--centers", "3"])
        code, out, _ = run_cli(capsys, ["path"])
        assert code == 0
        assert "no direction" in out

    def test_surface_stdout_document(self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 50.0 - 3.0 * s + 4.0 * t,
                      design_args=["--alpha", "none", "--centers", "3"])
        assert run_cli(capsys, ["fit", "--terms", "fo"])[0] == 0
        code, out, _ = run_cli(
            capsys, ["surface", "--x", "speed", "--y", "temp",
                     "--grid", "11", "--levels", "4"])
        assert code == 0
        doc = json.loads(out)
        assert doc["x"] == "speed" and doc["y"] == "temp"
        assert doc["x_range"] == [-1.25, 1.25]  # no axial points
        assert len(doc["xs"]) == 11 and len(doc["ys"]) == 11
        assert len(doc["z"]) == 11 and len(doc["z"][0]) == 11
        assert len(doc["contours"]["levels"]) == 4
        assert doc["z"][0][0] == pytest.approx(50.0 - 3.0 * -1.25 + 4.0 * -1.25,
                                               rel=1e-12)

    def test_surface_never_mutates_project(self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 4.0 + s + t + s * s + t * t,
                      design_args=["--centers", "3"])
        before = project.read_text()
        code, out, _ = run_cli(capsys, ["surface", "--grid", "5"])
        assert code == 0
        assert json.loads(out)["x"] == "speed"  # default axes
        assert project.read_text() == before

    def test_surface_out_file(self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 4.0 + s + t + s * s + t * t,
                      design_args=["--centers", "3"])
        target = tmp_path / "grid.json"
        code, out, _ = run_cli(
            capsys, ["surface", "--grid", "5", "--out", str(target)])
        assert code == 0 and str(target) in out
        assert json.loads(target.read_text())["y"] == "temp"


class TestExitCodes:
    def test_missing_project_is_usage_error(self, capsys, monkeypatch):
        monkeypatch.delenv("RSMKIT_PROJECT", raising=False)
        code, _, err = run_cli(capsys, NEW_ARGS)
        assert code == 2
        assert err.startswith("rsmkit: Usage:")

    def test_argparse_rejections_exit_2(self, capsys, project):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["design", "--type", "latin"])
        assert excinfo.value.code == 2
        capsys.readouterr()

    def test_bad_alpha_exit_2(self, capsys, project):
        run_cli(capsys, NEW_ARGS + ["--quiet"])
        code, _, err = run_cli(capsys, ["design", "--alpha", "wide"])
        assert code == 2 and "alpha" in err

    def test_fit_before_ingest_exit_3(self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      design_args=["--centers", "2"])
        code, _, err = run_cli(capsys, ["fit"])
        assert code == 3
        assert "phase incomplete" in err

    def test_unknown_phase_exit_3(self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      design_args=["--centers", "2"])
        code, _, err = run_cli(
            capsys, ["ingest", str(tmp_path / "ws.csv"), "--phase", "7"])
        assert code == 3 and "UnknownPhase" in err

    def test_no_phases_yet_exit_3(self, capsys, project):
        run_cli(capsys, NEW_ARGS + ["--quiet"])
        code, _, err = run_cli(capsys, ["fit"])
        assert code == 3 and "no phases" in err

    def test_malformed_ingest_cell_detail(self, capsys, project, tmp_path):
        worksheet = start_project(capsys, project, tmp_path,
                                  design_args=["--centers", "2"])
        text = worksheet.read_text().splitlines()
        text[1] = text[1] + "not-a-number"
        worksheet.write_text("\n".join(text) + "\n")
        code, _, err = run_cli(
            capsys, ["ingest", str(worksheet), "--format", "json"])
        assert code == 3
        body = json.loads(err)
        assert body["code"] == "MalformedNumber"
        assert body["detail"] == {"row": 1, "column": "yield"}

    def test_rank_deficient_fit_exit_4(self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 1.0 + s + t,
                      design_args=["--alpha", "none", "--centers", "0"])
        code, _, err = run_cli(
            capsys, ["fit", "--terms", "fo,twi,pq", "--format", "json"])
        assert code == 4
        body = json.loads(err)
        assert body["code"] == "RankDeficient"
        assert body["detail"]["terms"] == ["speed^2", "temp^2"]

    def test_missing_project_file_exit_5(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("RSMKIT_PROJECT", str(tmp_path / "absent.json"))
        code, _, err = run_cli(capsys, ["design"])
        assert code == 5 and err.startswith("rsmkit: IoError:")

    def test_corrupt_project_exit_5(self, capsys, project):
        project.write_text("{]")
        code, _, err = run_cli(capsys, ["fit", "--format", "json"])
        assert code == 5
        body = json.loads(err)
        assert body["code"] == "CorruptDocument"
        assert body["detail"] == {"path": "$"}

    def test_wrong_schema_exit_5(self, capsys, project):
        run_cli(capsys, NEW_ARGS + ["--quiet"])
        doc = json.loads(project.read_text())
        doc["schema"] = 99
        project.write_text(json.dumps(doc))
        code, _, err = run_cli(capsys, ["fit"])
        assert code == 5 and "SchemaVersionUnsupported" in err

    def test_unknown_surface_factor_exit_2(self, capsys, project, tmp_path):
        start_project(capsys, project, tmp_path,
                      fn=lambda s, t: 3.0 + s + t + s * s + t * t,
                      design_args=["--centers", "3"])
        code, _, err = run_cli(capsys, ["surface", "--x", "pressure"])
        assert code == 2 and "pressure" in err
