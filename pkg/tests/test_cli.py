"""End-to-end checks of the report-generating command line."""

import csv
import json
import math

import pytest

from hyplune.cli import main

SQRT2 = math.sqrt(2.0)


def read_csv(path):
    """Rows of a report CSV, skipping the comment header."""
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln and not ln.startswith("#")]
    rows = list(csv.reader(lines))
    header, data = rows[0], rows[1:]
    return [dict(zip(header, row)) for row in data]


# ---------------------------------------------------------------- bound

def test_bound_reference_values(tmp_path, capsys):
    code = main([
        "bound", "--lambda", "1", "--k", "1", "--L", "0", "--L", "4",
        "--out", str(tmp_path),
    ])
    assert code == 0
    rows = read_csv(tmp_path / "bound_table.csv")
    assert float(rows[0]["bound"]) == 0.0
    assert abs(float(rows[1]["bound"]) - (4.0 - math.pi)) < 1e-12
    assert rows[1]["regime"] == "critical"
    table = json.loads((tmp_path / "bound_table.json").read_text())
    assert len(table["rows"]) == 2
    assert "bound" in capsys.readouterr().out


def test_bound_supercritical_endpoint(tmp_path):
    code = main([
        "bound", "--lambda", repr(SQRT2), "--L", repr(2.0 * math.pi),
        "--out", str(tmp_path),
    ])
    assert code == 0
    rows = read_csv(tmp_path / "bound_table.csv")
    assert abs(float(rows[0]["bound"]) - 2.0 * math.pi * (SQRT2 - 1.0)) < 1e-9
    assert abs(float(rows[0]["L_max"]) - 2.0 * math.pi) < 1e-12


def test_bound_rejects_overlong_curve(tmp_path, capsys):
    code = main([
        "bound", "--lambda", "2", "--L", "10", "--out", str(tmp_path),
    ])
    assert code == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------- sharpness

def test_sharpness_default_grid_passes(tmp_path):
    code = main([
        "sharpness", "--lambda", repr(SQRT2), "--L-steps", "4",
        "--out", str(tmp_path),
    ])
    assert code == 0
    rows = read_csv(tmp_path / "sharpness_report.csv")
    assert len(rows) == 4
    assert all(row["status"] == "pass" for row in rows)
    assert all(float(row["abs_gap"]) < 1e-7 for row in rows)
    report = json.loads((tmp_path / "sharpness_report.json").read_text())
    assert report["failures"] == 0


def test_sharpness_perturbation_is_detected(tmp_path):
    """Inflating the measured area must break sharpness at the 1e-7 gate."""
    code = main([
        "sharpness", "--lambda", repr(SQRT2), "--L-steps", "3",
        "--perturb", "1e-5", "--out", str(tmp_path),
    ])
    assert code == 1
    rows = read_csv(tmp_path / "sharpness_report.csv")
    assert any(row["status"] == "fail" for row in rows)


# ---------------------------------------------------------------- dominance

def test_dominance_run_and_determinism(tmp_path):
    args = [
        "dominance", "--lambda", repr(SQRT2), "--count", "40", "--seed", "3",
        "--arcs", "6", "--out", str(tmp_path),
    ]
    assert main(args) == 0
    first = {
        name: (tmp_path / name).read_bytes()
        for name in (
            "dominance_histogram.csv",
            "dominance_samples.csv",
            "dominance_worst.svg",
        )
    }
    assert main(args) == 0
    for name, blob in first.items():
        assert (tmp_path / name).read_bytes() == blob

    report = json.loads((tmp_path / "dominance_report.json").read_text())
    assert report["violations"] == 0
    assert report["count"] == 40
    assert report["min_deficiency"] >= -1e-9
    assert report["two_arc_max_deficiency"] < 1e-9

    rows = read_csv(tmp_path / "dominance_samples.csv")
    assert len(rows) == report["generated"]
    two_arc = [float(r["deficiency"]) for r in rows if r["n_arcs"] == "2"]
    assert two_arc and max(abs(d) for d in two_arc) < 1e-9


# ---------------------------------------------------------------- pmp

def test_pmp_lune_certificate(tmp_path, capsys):
    code = main([
        "pmp", "--shape", "lune", "--lambda", repr(SQRT2), "--L", "3",
        "--out", str(tmp_path),
    ])
    assert code == 0
    cert = json.loads((tmp_path / "pmp_certificate.json").read_text())
    assert cert["status"] == "certified"
    assert len(cert["switch_angles"]) == 4
    assert (tmp_path / "pmp_signals.csv").exists()
    assert (tmp_path / "pmp_shape.svg").exists()
    assert "certified" in capsys.readouterr().out


def test_pmp_circle_has_no_switches(tmp_path):
    code = main([
        "pmp", "--shape", "circle", "--lambda", "2", "--out", str(tmp_path),
    ])
    assert code == 0
    cert = json.loads((tmp_path / "pmp_certificate.json").read_text())
    assert cert["status"] == "certified"
    assert cert["switch_angles"] == []


def test_pmp_circle_needs_supercritical_lambda(tmp_path, capsys):
    code = main([
        "pmp", "--shape", "circle", "--lambda", "0.5", "--out", str(tmp_path),
    ])
    assert code == 2
    err = capsys.readouterr().err
    assert "lambda in (1, inf)" in err


def test_pmp_imported_profile_is_refuted(tmp_path):
    """A generic three-arc profile imported from CSV fails certification."""
    from hyplune.shapes import polygon_from_regions, polygon_support_profile, supporting_cycle

    poly = polygon_from_regions(
        [
            supporting_cycle(SQRT2, 0.2, 0.45),
            supporting_cycle(SQRT2, 2.3, 0.40),
            supporting_cycle(SQRT2, 4.4, 0.50),
        ]
    )
    prof, _ = polygon_support_profile(poly)
    src = tmp_path / "profile.csv"
    prof.to_csv(src)
    code = main([
        "pmp", "--profile", str(src), "--lambda", repr(SQRT2),
        "--out", str(tmp_path),
    ])
    assert code == 0  # refutation is a result, not an error
    cert = json.loads((tmp_path / "pmp_certificate.json").read_text())
    assert cert["status"] == "refuted"
    assert cert["notes"]


# ---------------------------------------------------------------- limits

def test_limits_report(tmp_path):
    code = main(["limits", "--k", "1", "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "limits_report.json").read_text())
    assert report["healthy"] is True
    rows = read_csv(tmp_path / "limits_report.csv")
    cross = [r for r in rows if r["check"] == "cross_regime" and r["eps"] == "1e-05"]
    assert cross and all(float(r["deviation"]) < 1e-4 for r in cross)
    euclid = [r for r in rows if r["check"] == "euclidean" and float(r["k"]) == 1e-3]
    assert euclid and all(float(r["deviation"]) < 1e-5 for r in euclid)


# ---------------------------------------------------------------- argument handling

def test_unknown_command_exits_with_usage():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_bound_requires_lengths(tmp_path, capsys):
    code = main(["bound", "--lambda", "1", "--out", str(tmp_path)])
    assert code == 2
    assert "error:" in capsys.readouterr().err
