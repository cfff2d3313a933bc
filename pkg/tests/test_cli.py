"""End-to-end CLI behavior: routes, precedence, exit codes, artifacts."""

import json
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from spinwitness.cli import main
from spinwitness.quadrature import QuadratureError
from spinwitness.svgfig import region_geometry
from spinwitness.thermolimit import region_scan, xx_witness
from spinwitness.witness import witness_from_model
from spinwitness.model import ModelSpec


def run(argv, capsys):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_measured_witness(capsys):
    rc, out, _ = run(["witness", "--measured", "--u", "-6", "--m", "0", "--n", "2"], capsys)
    assert rc == 0
    assert "W = 3" in out and "entangled" in out


def test_measured_witness_json(capsys):
    rc, out, _ = run(["witness", "--measured", "--u", "-6", "--m", "0", "--n", "2",
                      "--out", "json"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert payload["W"] == 3.0
    assert payload["entangled"] is True
    assert payload["source"] == "external-measurement"


def test_measured_witness_requires_inputs(capsys):
    rc, _, err = run(["witness", "--measured", "--m", "0", "--n", "2"], capsys)
    assert rc == 1 and err.startswith("error:")
    rc, _, err = run(["witness", "--measured", "--u", "-6", "--m", "0"], capsys)
    assert rc == 1 and "--n" in err
    rc, _, err = run(["witness", "--measured", "--u", "-6", "--m", "0",
                      "--n", "thermodynamic-limit"], capsys)
    assert rc == 1


def test_model_witness_matches_the_library(capsys):
    rc, out, _ = run(["witness", "--model", "xxx", "--n", "6", "--b", "0.5",
                      "--kt", "0.8", "--out", "json"], capsys)
    assert rc == 0
    payload = json.loads(out)
    expected = witness_from_model(ModelSpec.xxx(1.0, b=0.5, n_sites=6), 0.8)
    assert payload["W"] == expected.value
    assert payload["source"] == "finite-exact"


def test_limit_witness_matches_the_library(capsys):
    rc, out, _ = run(["witness", "--model", "xx", "--n", "thermodynamic-limit",
                      "--b", "0.5", "--kt", "1.0", "--out", "json"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert payload["W"] == xx_witness(1.0, 0.5, 1.0).value
    assert payload["source"] == "thermodynamic-limit"
    assert payload["inputs"]["n_sites"] is None


def test_limit_witness_is_xx_only(capsys):
    rc, _, err = run(["witness", "--model", "xxx", "--n", "thermodynamic-limit",
                      "--kt", "1.0"], capsys)
    assert rc == 1 and "XX" in err


def test_witness_needs_a_temperature(capsys):
    rc, _, err = run(["witness", "--model", "xxx", "--n", "6"], capsys)
    assert rc == 1 and "--kt" in err


def test_negative_temperature_is_a_usage_error(capsys):
    rc, _, err = run(["witness", "--model", "xxx", "--n", "6", "--kt", "-1"], capsys)
    assert rc == 1 and "kT" in err


def test_usage_errors_exit_one():
    with pytest.raises(SystemExit) as exc:
        main(["witness", "--bogus-flag"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


def test_exact_json(capsys):
    rc, out, _ = run(["exact", "--model", "xxx", "--n", "2", "--boundary", "open",
                      "--kt", "0.01", "--out", "json"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert abs(payload["U"] + 3.0) < 1e-10  # singlet energy at low kT
    xx, yy, zz = payload["bond_correlators"][0]
    assert max(abs(xx + 1.0), abs(yy + 1.0), abs(zz + 1.0)) < 1e-10
    assert payload["spec"]["boundary"] == "open"


def test_exact_text(capsys):
    rc, out, _ = run(["exact", "--model", "xxx", "--n", "4", "--kt", "1.0"], capsys)
    assert rc == 0
    assert "U = " in out and "lnZ = " in out and "bond correlators" in out


def test_exact_needs_finite_n(capsys):
    rc, _, err = run(["exact", "--model", "xx", "--kt", "1.0"], capsys)
    assert rc == 1 and "finite" in err


def test_sign_convention_flag_accepted(capsys):
    rc, out, _ = run(["witness", "--model", "xxx", "--n", "6", "--kt", "0.5",
                      "--sign", "as-printed", "--out", "json"], capsys)
    assert rc == 0
    json.loads(out)


def test_config_seeds_fields_and_flags_win(tmp_path, capsys):
    config = tmp_path / "chain.cfg"
    config.write_text("family = xx\njx = 2.0\nb = 0.3\nn_sites = 6\nboundary = open\n")
    rc, out, _ = run(["witness", "--config", str(config), "--b", "0.7",
                      "--kt", "1.0", "--out", "json"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert payload["inputs"]["B"] == 0.7   # flag beats the file
    assert payload["inputs"]["J"] == 2.0   # file beats the default
    assert payload["inputs"]["n_sites"] == 6

    rc, out, _ = run(["witness", "--config", str(config), "--j", "1.5",
                      "--kt", "1.0", "--out", "json"], capsys)
    payload = json.loads(out)
    assert payload["inputs"]["J"] == 1.5
    assert payload["inputs"]["B"] == 0.3   # untouched field keeps the file value


def test_config_can_request_the_limit(tmp_path, capsys):
    config = tmp_path / "limit.cfg"
    config.write_text("family = xx\njx = 1.0\nn_sites = thermodynamic-limit\n")
    rc, out, _ = run(["witness", "--config", str(config), "--kt", "1.0",
                      "--out", "json"], capsys)
    assert rc == 0
    assert json.loads(out)["source"] == "thermodynamic-limit"


def test_missing_config_file(capsys):
    rc, _, err = run(["witness", "--config", "/no/such/file.cfg", "--kt", "1.0"], capsys)
    assert rc == 1 and "error:" in err


SCAN_ARGS = ["scan", "--kt-min", "0.3", "--kt-max", "1.5", "--kt-steps", "4",
             "--b-min", "0.0", "--b-max", "1.5", "--b-steps", "3"]


def test_scan_writes_csv(tmp_path, capsys):
    out_path = tmp_path / "region.csv"
    rc, out, _ = run([*SCAN_ARGS, "--out-path", str(out_path)], capsys)
    assert rc == 0
    assert f"wrote {out_path}" in out and "12 cells" in out
    lines = out_path.read_text().splitlines()
    assert lines[0] == "kT_over_J,B_over_J,W,entangled"
    assert len(lines) == 13


def test_scan_bytes_are_stable_across_runs_and_workers(tmp_path, capsys, monkeypatch):
    paths = [tmp_path / name for name in ("a.csv", "b.csv", "c.csv")]
    run([*SCAN_ARGS, "--out-path", str(paths[0])], capsys)
    run([*SCAN_ARGS, "--out-path", str(paths[1])], capsys)
    monkeypatch.setenv("SPINWITNESS_WORKERS", "3")
    run([*SCAN_ARGS, "--out-path", str(paths[2])], capsys)
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]


def test_scan_rejects_bad_worker_counts(tmp_path, capsys, monkeypatch):
    for bad in ("abc", "0"):
        monkeypatch.setenv("SPINWITNESS_WORKERS", bad)
        rc, _, err = run([*SCAN_ARGS, "--out-path", str(tmp_path / "x.csv")], capsys)
        assert rc == 1 and "SPINWITNESS_WORKERS" in err


def test_scan_json(tmp_path, capsys):
    out_path = tmp_path / "region.json"
    rc, _, _ = run([*SCAN_ARGS, "--out", "json", "--out-path", str(out_path)], capsys)
    assert rc == 0
    payload = json.loads(out_path.read_text())
    assert payload["kind"] == "region-grid"
    assert len(payload["W"]) == 3 and len(payload["W"][0]) == 4
    assert payload["metadata"]["magnetization_form"] == "lnz-derivative"


def test_scan_default_output_name(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rc, _, _ = run(SCAN_ARGS, capsys)
    assert rc == 0
    assert (tmp_path / "region.csv").exists()


def test_scan_svg_matches_the_grid_geometry(tmp_path, capsys):
    svg_path = tmp_path / "region.svg"
    rc, _, _ = run([*SCAN_ARGS, "--out-path", str(tmp_path / "r.csv"),
                    "--svg", str(svg_path)], capsys)
    assert rc == 0
    grid = region_scan(np.linspace(0.3, 1.5, 4), np.linspace(0.0, 1.5, 3))
    _, expected_contour = region_geometry(grid)
    root = ET.fromstring(svg_path.read_text())
    ns = {"svg": "http://www.w3.org/2000/svg"}
    contour = root.find(".//svg:polyline[@id='witness-contour']", ns)
    points = [tuple(float(v) for v in pair.split(","))
              for pair in contour.get("points").split()]
    assert points == expected_contour


def test_scan_as_printed_changes_the_surface(tmp_path, capsys):
    canonical = tmp_path / "canonical.csv"
    printed = tmp_path / "printed.csv"
    run([*SCAN_ARGS, "--out-path", str(canonical)], capsys)
    run([*SCAN_ARGS, "--eq9-as-printed", "--out-path", str(printed)], capsys)
    rows_c = canonical.read_text().splitlines()[1:]
    rows_p = printed.read_text().splitlines()[1:]
    diffs = [abs(float(c.split(",")[2]) - float(p.split(",")[2]))
             for c, p in zip(rows_c, rows_p)
             if float(c.split(",")[1]) != 0.0]  # B = 0 rows agree: B*M drops out
    assert max(diffs) > 0.01


def test_boundary_csv(tmp_path, capsys):
    out_path = tmp_path / "boundary.csv"
    rc, out, _ = run(["boundary", "--b-min", "0.0", "--b-max", "1.0", "--b-steps", "3",
                      "--out-path", str(out_path)], capsys)
    assert rc == 0 and "3 points" in out
    lines = out_path.read_text().splitlines()
    header_at = lines.index("B_over_J,kTc_over_J")
    rows = [tuple(float(x) for x in line.split(",")) for line in lines[header_at + 1:]]
    assert [b for b, _ in rows] == [0.0, 0.5, 1.0]
    ktcs = [t for _, t in rows]
    assert all(a >= b for a, b in zip(ktcs, ktcs[1:]))
    for b, ktc in rows:
        assert abs(xx_witness(ktc, b, 1.0).value - 1.0) < 1e-5


def test_boundary_json(tmp_path, capsys):
    out_path = tmp_path / "boundary.json"
    rc, _, _ = run(["boundary", "--b-min", "0.0", "--b-max", "0.5", "--b-steps", "2",
                    "--out", "json", "--out-path", str(out_path)], capsys)
    assert rc == 0
    payload = json.loads(out_path.read_text())
    assert payload["kind"] == "boundary-curve"
    assert payload["metadata"]["zero_temperature_bc"] == pytest.approx(
        2.0 * math.sqrt(1.0 - math.pi ** 2 / 16.0))


def test_validate_json_and_exit_codes(capsys):
    rc, out, _ = run(["validate", "--out", "json"], capsys)
    assert rc == 0
    payload = json.loads(out)
    assert len(payload) == 12
    assert all(entry["passed"] is True for entry in payload)


def test_validate_text_table(capsys):
    rc, out, _ = run(["validate"], capsys)
    assert rc == 0
    assert "12/12 checks passed" in out
    assert out.count("PASS") == 12


def test_validate_tight_tolerance_exits_three(capsys):
    rc, out, _ = run(["validate", "--tol", "1e-14"], capsys)
    assert rc == 3
    assert "FAIL" in out and "tolerance-induced" in out


def test_validate_as_printed_exits_three(capsys):
    rc, out, _ = run(["validate", "--eq9-as-printed"], capsys)
    assert rc == 3
    assert "documented discrepancy" in out


def test_numerical_failures_exit_two(capsys, monkeypatch):
    def explode(*args, **kwargs):
        raise QuadratureError("synthetic non-convergence")

    monkeypatch.setattr("spinwitness.cli.xx_witness", explode)
    rc, _, err = run(["witness", "--model", "xx", "--n", "thermodynamic-limit",
                      "--kt", "1.0"], capsys)
    assert rc == 2
    assert "numerical failure" in err
