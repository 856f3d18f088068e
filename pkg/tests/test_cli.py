import csv
import io
import json
import math

import pytest

from specres.cli import CSV_COLUMNS, RunConfig, dump_json, main, run

SQRT_PI = math.sqrt(math.pi)


@pytest.fixture(autouse=True)
def quiet(monkeypatch):
    monkeypatch.setenv("SPECRES_QUIET", "1")


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_estimate_circle(capsys):
    code, out, _ = invoke(capsys, "estimate", "--model", "circle", "--k", "0", "--lambda", "1e8")
    assert code == 0
    data = json.loads(out)
    assert abs(data["estimate"] - SQRT_PI) / SQRT_PI <= 0.01
    assert data["oracle"] == SQRT_PI
    assert data["zeta_residue"] == pytest.approx(1.0, rel=0.01)
    assert list(data)[:8] == ["lambda", "m", "epsilon", "estimate", "n_terms", "oracle",
                              "abs_error", "rel_error"]


def test_estimate_k1_has_no_zeta_residue(capsys):
    code, out, _ = invoke(capsys, "estimate", "--model", "circle", "--k", "1", "--lambda", "1e6")
    data = json.loads(out)
    assert code == 0 and data["zeta_residue"] is None and data["m"] == 1.5


def test_estimate_dixmier(capsys):
    code, out, _ = invoke(capsys, "estimate", "--model", "circle", "--k", "0", "--lambda", "1e6",
                          "--dixmier")
    data = json.loads(out)
    assert code == 0
    assert data["rel_error"] < data["dixmier_rel_error"] <= 0.15


def test_filter_example(capsys):
    code, out, _ = invoke(capsys, "filter", "--poles", "1,0", "--k", "1", "--scales", "1,2")
    assert code == 0
    data = json.loads(out)
    assert data["weights"] == pytest.approx([-math.e, math.e], rel=1e-12)
    assert data["poles"] == [1.0, 0.0] and data["k"] == 1


def test_filter_show_positional(capsys):
    _, a, _ = invoke(capsys, "filter", "show", "--poles", "0.5")
    _, b, _ = invoke(capsys, "filter", "--poles", "0.5")
    assert a == b


def test_floats_use_17_digits(capsys):
    _, out, _ = invoke(capsys, "filter", "--poles", "0.5")
    assert "3.5867287199190" in out
    assert dump_json({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}'


def test_filter_file_round_trip(capsys, tmp_path):
    _, text, _ = invoke(capsys, "filter", "--poles", "0.5,0", "--k", "0")
    path = tmp_path / "filter.json"
    path.write_text(text, encoding="utf-8")
    _, inline, _ = invoke(capsys, "estimate", "--model", "circle", "--poles", "0.5,0", "--k", "0",
                          "--lambda", "1e6")
    _, loaded, _ = invoke(capsys, "estimate", "--model", "circle", "--filter-file", str(path),
                          "--lambda", "1e6")
    assert json.loads(inline)["estimate"] == json.loads(loaded)["estimate"]
    assert inline == loaded


def test_determinism(capsys):
    argv = ("sweep", "--model", "torus2", "--k", "1", "--cutoffs", "1e3,1e4,1e5")
    assert invoke(capsys, *argv)[1] == invoke(capsys, *argv)[1]


def test_sweep_csv(capsys):
    code, out, _ = invoke(capsys, "sweep", "--model", "circle", "--k", "0",
                          "--cutoffs", "1e4,1e5,1e6")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 4
    assert [float(r[0]) for r in rows[1:]] == [1e4, 1e5, 1e6]


def test_sweep_csv_empty_oracle_fields(capsys, tmp_path):
    path = tmp_path / "spec.txt"
    path.write_text("1,2\n4,2\n9,2\n", encoding="utf-8")
    _, out, _ = invoke(capsys, "sweep", "--model", "file", "--input", str(path), "--poles", "0.7",
                       "--cutoffs", "2,5,10")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(r["oracle"] == "" and r["abs_error"] == "" for r in rows)


def test_sweep_json(capsys):
    _, out, _ = invoke(capsys, "sweep", "--model", "circle", "--cutoffs", "1e3,1e4",
                       "--format", "json")
    assert len(json.loads(out)) == 2


def test_sweep_reports_slope(capsys, monkeypatch):
    monkeypatch.delenv("SPECRES_QUIET")
    _, _, err = invoke(capsys, "sweep", "--model", "circle", "--cutoffs", "1e4,1e6,1e8")
    assert "slope" in err


def test_quiet_silences_progress(capsys):
    _, _, err = invoke(capsys, "estimate", "--model", "circle", "--lambda", "1e4")
    assert err == ""


def test_localized_even(capsys):
    code, out, _ = invoke(capsys, "localized", "--model", "circle", "--k", "0", "--lambda", "1e8")
    data = json.loads(out)
    assert code == 0
    assert abs(data["estimate"] - SQRT_PI / 2) / (SQRT_PI / 2) <= 0.02
    assert data["bound"] == 1.0


def test_localized_file(capsys, tmp_path):
    path = tmp_path / "weights.txt"
    path.write_text("#bound=2\n1,0.5\n4,1.0\n", encoding="utf-8")
    code, out, _ = invoke(capsys, "localized", "--model", "file", "--input", str(path),
                          "--poles", "0.5", "--lambda", "10")
    assert code == 0 and json.loads(out)["bound"] == 2.0


def test_oracle_command(capsys):
    code, out, _ = invoke(capsys, "oracle", "--model", "circle")
    data = json.loads(out)
    assert code == 0
    assert data["fit"] == pytest.approx(data["coefficients"], abs=1e-3)
    assert data["projections"]["even"]["fit"] == pytest.approx([SQRT_PI / 2, -1.0], abs=1e-6)


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = invoke(capsys, "filter", "--poles", "1,0", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text(encoding="utf-8"))["k"] == 1


@pytest.mark.parametrize("argv", [
    ("estimate", "--model", "circle", "--k", "0", "--lambda", "1"),
    ("estimate", "--model", "file", "--lambda", "10", "--poles", "0.5"),
    ("sweep", "--model", "circle", "--cutoffs", "1e4"),
    ("sweep", "--model", "circle", "--cutoffs", "1e4,1e3"),
    ("estimate", "--model", "circle", "--k", "2", "--lambda", "100"),
    ("filter", "--poles", "0,1"),
    ("filter", "--poles", "1,0", "--scales", "0.5,2"),
    ("oracle", "--model", "file"),
])
def test_config_errors_exit_2(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err.count("\n") == 1 and "error" in err


def test_argparse_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["estimate", "--model", "circle"])
    assert info.value.code == 2


@pytest.mark.parametrize("argv", [
    ("estimate", "--model", "torus2", "--k", "1", "--lambda", "100", "--m", "1"),
    ("filter", "--poles", "1,0.9999,0.9998,0.9997"),
])
def test_numerical_errors_exit_3(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 3 and out == "" and err.count("\n") == 1


def test_io_errors_exit_4(capsys, tmp_path):
    missing = tmp_path / "absent.txt"
    code, _, err = invoke(capsys, "estimate", "--model", "file", "--input", str(missing),
                          "--poles", "0.5", "--lambda", "10")
    assert code == 4 and err.count("\n") == 1


@pytest.mark.parametrize("text", ["1,2\nbad,1\n", "0,1\n", "# empty\n"])
def test_parse_errors_exit_4(capsys, tmp_path, text):
    path = tmp_path / "spec.txt"
    path.write_text(text, encoding="utf-8")
    code, _, err = invoke(capsys, "estimate", "--model", "file", "--input", str(path),
                          "--poles", "0.5", "--lambda", "10")
    assert code == 4
    assert err.count("\n") == 1


def test_bad_filter_file_exit_4(capsys, tmp_path):
    path = tmp_path / "filter.json"
    path.write_text("{not json", encoding="utf-8")
    code, _, _ = invoke(capsys, "estimate", "--model", "circle", "--filter-file", str(path),
                        "--lambda", "100")
    assert code == 4


def test_run_returns_report():
    code, report = run(RunConfig(command="filter", poles=(0.5,)))
    assert code == 0 and json.loads(report)["k"] == 0
