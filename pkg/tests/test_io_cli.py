import json

import numpy as np
import pytest

from wlscreen.cli import main
from wlscreen.errors import ColumnNotFound, FormatError, ParseError
from wlscreen.io import read_csv, write_csv


def write(tmp_path, text, name="d.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestReadCsv:
    def test_numeric(self, tmp_path):
        path = write(tmp_path, "y,x1,x2\n1,2,3\n4,5,6\n7,8,9\n")
        X, y, names = read_csv(path, "y")
        assert X.shape == (3, 2) and names == ["x1", "x2"]
        np.testing.assert_array_equal(y, [1.0, 4.0, 7.0])

    def test_response_by_index_and_position(self, tmp_path):
        path = write(tmp_path, "a,b,c\n1,2,3\n4,5,6\n")
        X, y, names = read_csv(path, "1")
        assert names == ["a", "c"]
        np.testing.assert_array_equal(X, [[1, 3], [4, 6]])
        np.testing.assert_array_equal(y, [2, 5])

    def test_labels(self, tmp_path):
        path = write(tmp_path, "x1,status\n0.1,normal\n0.2,cancer\n0.3,normal\n")
        _, y, _ = read_csv(path, "status")
        assert y.dtype.kind == "U" and set(y) == {"normal", "cancer"}

    def test_missing_column(self, tmp_path):
        path = write(tmp_path, "y,x1\n1,2\n3,4\n")
        with pytest.raises(ColumnNotFound):
            read_csv(path, "z")
        with pytest.raises(ColumnNotFound):
            read_csv(path, "5")

    def test_bad_cell_names_row(self, tmp_path):
        rows = ["y,x1,x2"] + [f"{i},{i}.5,{i}" for i in range(1, 7)] + ["7,oops,1", "8,1,1"]
        path = write(tmp_path, "\n".join(rows) + "\n")
        with pytest.raises(ParseError, match="row 7") as info:
            read_csv(path, "y")
        assert info.value.row == 7 and info.value.column == "x1"

    def test_ragged(self, tmp_path):
        path = write(tmp_path, "y,x1\n1,2\n3\n")
        with pytest.raises(FormatError):
            read_csv(path, "y")

    def test_round_trip_full_precision(self, tmp_path):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((20, 4)) * 10.0 ** rng.integers(-8, 8, (20, 4))
        y = rng.standard_normal(20) / 3
        path = str(tmp_path / "rt.csv")
        write_csv(path, X, y)
        X2, y2, names = read_csv(path, "y")
        np.testing.assert_array_equal(X, X2)
        np.testing.assert_array_equal(y, y2)
        assert names == ["x1", "x2", "x3", "x4"]


@pytest.fixture
def scenario_csv(tmp_path):
    path = str(tmp_path / "s16.csv")
    assert main(["simulate", "--scenario", "1.6", "--seed", "7", "-o", path]) == 0
    return path


class TestCli:
    def test_screen_recovers_truth(self, scenario_csv, capsys):
        assert main(["screen", "-i", scenario_csv, "-r", "y", "--d-mode", "full", "--format", "json"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert {"x1", "x10", "x20", "x30", "x40", "x50"} <= set(out["selected"])
        assert out["schema"] == "wlscreen.screening/1"
        assert len(out["d_trace"]) == len(out["singular_values"])
        assert len(out["g_trace"]) >= out["p0_hat"]
        assert out["ranking"][: out["p0_hat"]] == out["selected"]

    def test_top_k(self, scenario_csv, capsys):
        assert main(["screen", "-i", scenario_csv, "-r", "y", "--top-k", "6", "--format", "json"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert len(out["selected"]) == 6 and out["g_trace"] == []

    def test_fixed_d(self, scenario_csv, capsys):
        assert main(["screen", "-i", scenario_csv, "-r", "y", "--d-mode", "fixed:3", "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out)["d_hat"] == 3

    def test_table_and_csv_formats(self, scenario_csv, capsys):
        assert main(["screen", "-i", scenario_csv, "-r", "y", "--top-k", "2"]) == 0
        assert "spike count d_hat" in capsys.readouterr().out
        assert main(["screen", "-i", scenario_csv, "-r", "y", "--top-k", "2", "--format", "csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "rank,predictor,score,selected" and len(lines) == 101

    def test_simulate_is_byte_identical(self, tmp_path):
        a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        assert main(["simulate", "--scenario", "2.6", "--seed", "1", "-o", a]) == 0
        assert main(["simulate", "--scenario", "2.6", "--seed", "1", "-o", b]) == 0
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_env_seed(self, tmp_path, monkeypatch):
        a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        main(["simulate", "--scenario", "1.6", "--seed", "3", "-o", a])
        monkeypatch.setenv("WLSCREEN_SEED", "3")
        main(["simulate", "--scenario", "1.6", "-o", b])
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_config_file(self, scenario_csv, tmp_path, capsys):
        cfg = write(tmp_path, f"[wlscreen]\ninput = {scenario_csv}\nresponse = y\nd-mode = fixed:2\n", "c.ini")
        assert main(["screen", "--config", cfg, "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out)["d_hat"] == 2
        bad = write(tmp_path, "[wlscreen]\nbogus = 1\n", "bad.ini")
        assert main(["screen", "--config", bad]) == 2

    def test_bench_small(self, capsys):
        code = main(["bench", "--scenario", "1.6", "--methods", "wls,sis", "--replicates", "2",
                     "--format", "json"])
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["methods"]["wls"]["replicates"] == 2
        assert out["methods"]["wls"]["mean"]["fn"] == 0.0

    def test_inline_scenario(self, capsys):
        code = main(["simulate", "--setting", "ar1", "--n", "20", "--p", "60", "--sigma", "1",
                     "--rho", "0.2", "--model", "linear"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 21 and lines[0].startswith("y,x1,")

    @pytest.mark.parametrize(
        "argv, code",
        [
            (["bench", "--scenario", "nope"], 2),
            (["bench", "--scenario", "1.6", "--methods", "lasso"], 2),
            (["screen"], 2),
            (["simulate", "--setting", "ar1"], 2),
            (["screen", "-i", "/nonexistent.csv", "-r", "y"], 3),
            (["frobnicate"], 2),
        ],
    )
    def test_exit_codes(self, argv, code, capsys):
        assert main(argv) == code

    def test_data_errors_exit_3(self, tmp_path, capsys):
        path = write(tmp_path, "y,x1\n1,a\n2,3\n")
        assert main(["screen", "-i", path, "-r", "y"]) == 3
        assert "row 1" in capsys.readouterr().err
        assert main(["screen", "-i", path, "-r", "y", "--d-mode", "sometimes"]) == 2
