import csv

import numpy as np
import pytest

from pulsar_green import greens_function
from pulsar_green.cli import ConfigError, build_config, main, parse_grid, read_config_file

SMALL = ["--taus", "0.01,1.0", "--chis", "0.05,0.5,2.0"]


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestParsing:
    def test_grids(self):
        assert parse_grid("1.5") == (1.5,)
        assert parse_grid("0.1, 0.2") == (0.1, 0.2)
        assert parse_grid("1:100:3:log") == pytest.approx((1.0, 10.0, 100.0), rel=1e-15)
        assert parse_grid("0:1:3:lin") == (0.0, 0.5, 1.0)

    @pytest.mark.parametrize("text", ["", "1:2:3", "1:2:0:lin", "0:1:3:log", "1:2:3:cubic",
                                      "2,1", "a,b"])
    def test_bad_grids(self, text):
        with pytest.raises(ConfigError):
            parse_grid(text)

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# fig 1a\nalpha = 0.2  # steeper\n\nbeta=1.5\n")
        assert read_config_file(str(cfg)) == {"alpha": "0.2", "beta": "1.5"}
        cfg.write_text("gamma = 1\n")
        with pytest.raises(ConfigError):
            read_config_file(str(cfg))
        cfg.write_text("alpha 0.2\n")
        with pytest.raises(ConfigError):
            read_config_file(str(cfg))

    def test_controls_per_command(self):
        assert build_config("identity", {"output": "x"}).control.max_terms == 100_000
        assert build_config("spectrum", {"output": "x"}).control.max_terms == 200

    @pytest.mark.parametrize("argv", [
        ["spectrum"],
        ["spectrum", "--output", "o.csv", "--xi", "0"],
        ["spectrum", "--output", "o.csv", "--alpha", "abc"],
        ["nonsense"],
        ["spectrum", "--output", "o.csv", "--rel_tol", "2"],
        ["convolve", "--output", "o.csv"],
        ["validate", "--config", "/nonexistent.cfg"],
    ])
    def test_usage_errors_exit_1(self, argv, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(argv) == 1
        assert "error" in capsys.readouterr().err


class TestSpectrum:
    def test_rows_and_units(self, tmp_path, fig1a):
        out = tmp_path / "s.csv"
        assert main(["spectrum", "--output", str(out), *SMALL]) == 0
        r = rows(out)
        assert len(r) == 6
        assert list(r[0]) == ["chi", "tau", "chi2_fg", "terms_used", "est_rel_err"]
        row = r[-1]
        f = greens_function(fig1a, 0.5, 0.1, float(row["tau"]), float(row["chi"]))[0]
        assert float(row["chi2_fg"]) == pytest.approx(fig1a.kt**3 * 4.0 * f, rel=1e-15)
        assert all(float(x["est_rel_err"]) <= 1e-10 for x in r)

    def test_deterministic_bytes_and_lf(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["spectrum", "--output", str(a), *SMALL])
        main(["spectrum", "--output", str(b), *SMALL])
        data = a.read_bytes()
        assert data == b.read_bytes()
        assert b"\r" not in data

    def test_ndot0_doubles(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["spectrum", "--output", str(a), *SMALL])
        main(["spectrum", "--output", str(b), "--ndot0", "2", *SMALL])
        for x, y in zip(rows(a), rows(b)):
            assert float(y["chi2_fg"]) == pytest.approx(2 * float(x["chi2_fg"]), rel=1e-14)

    def test_config_file_and_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("taus = 1.0\nchis = 2.0\nbeta = 1.5\n")
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["spectrum", "--config", str(cfg), "--output", str(a)]) == 0
        assert main(["spectrum", "--config", str(cfg), "--output", str(b), "--beta", "0.3"]) == 0
        assert len(rows(a)) == 1
        assert rows(a)[0]["chi2_fg"] != rows(b)[0]["chi2_fg"]

    def test_nonconvergence_exit_2_no_file(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        code = main(["spectrum", "--output", str(out), "--taus", "0.5", "--chis", "0.1001",
                     "--max_terms", "5", "--rel_tol", "1e-12"])
        assert code == 2
        assert not out.exists()
        assert not list(tmp_path.iterdir())
        assert "numerical failure" in capsys.readouterr().err


class TestDensity:
    def test_three_routes(self, tmp_path):
        out = tmp_path / "d.csv"
        assert main(["density", "--output", str(out), "--taus", "1.0"]) == 0
        (r,) = rows(out)
        assert list(r) == ["tau", "n_series", "n_closed", "n_quadrature", "rel_spread"]
        assert float(r["rel_spread"]) < 1e-5


class TestIdentity:
    def test_default_grid(self, tmp_path):
        out = tmp_path / "i.csv"
        assert main(["identity", "--output", str(out)]) == 0
        r = rows(out)
        assert len(r) == 6
        assert max(float(x["rel_diff"]) for x in r) < 1e-5

    def test_tolerance_breach_exit_2(self, tmp_path):
        out = tmp_path / "i.csv"
        code = main(["identity", "--output", str(out), "--x0s", "1", "--xs", "1",
                     "--accelerate", "false", "--max_terms", "50", "--tolerance", "1e-9"])
        assert code == 2


class TestConvolve:
    def _source(self, path, lines):
        path.write_text("tau0,chi0,q\n" + "".join(f"{ln}\n" for ln in lines))
        return path

    def test_single_node_matches_greens_function(self, tmp_path, fig1a):
        eps0 = 0.1 * fig1a.kt
        src = self._source(tmp_path / "q.csv", [f"0.5,0.1,{1.0 / eps0**2!r}"])
        out = tmp_path / "f.csv"
        assert main(["convolve", "--source", str(src), "--output", str(out),
                     "--taus", "1.0", "--chis", "2.0"]) == 0
        (r,) = rows(out)
        assert float(r["f"]) == pytest.approx(greens_function(fig1a, 0.5, 0.1, 1.0, 2.0)[0], rel=1e-14)

    def test_superposition_of_files(self, tmp_path):
        grid = ["0.4,0.1,{}", "0.6,0.1,{}"]
        a = self._source(tmp_path / "a.csv", [grid[0].format(1.0), grid[1].format(0.0)])
        b = self._source(tmp_path / "b.csv", [grid[0].format(0.0), grid[1].format(3.0)])
        ab = self._source(tmp_path / "ab.csv", [grid[0].format(1.0), grid[1].format(3.0)])
        vals = []
        for src in (a, b, ab):
            out = tmp_path / f"out-{src.name}"
            assert main(["convolve", "--source", str(src), "--output", str(out),
                         "--taus", "1.0,1.5", "--chis", "2.0"]) == 0
            vals.append(np.array([float(r["f"]) for r in rows(out)]))
        assert np.allclose(vals[0] + vals[1], vals[2], rtol=1e-14, atol=0)

    @pytest.mark.parametrize("lines", [
        ["0.5,0.1"],
        ["0.5,0.1,1", "0.5,0.1,2"],
        ["0.5,0.1,1", "0.6,0.2,1"],
        ["x,0.1,1"],
        [],
    ])
    def test_malformed_source_exit_1(self, tmp_path, lines):
        src = self._source(tmp_path / "q.csv", lines)
        assert main(["convolve", "--source", str(src), "--output", str(tmp_path / "f.csv")]) == 1

    def test_missing_header_exit_1(self, tmp_path):
        src = tmp_path / "q.csv"
        src.write_text("0.5,0.1,1\n")
        assert main(["convolve", "--source", str(src), "--output", str(tmp_path / "f.csv")]) == 1


class TestValidate:
    def test_default_passes(self, capsys):
        assert main(["validate"]) == 0
        text = capsys.readouterr().out
        assert "FAIL" not in text and "FLAG" not in text
        assert text.strip().endswith("all checks passed")

    def test_loose_tolerance_flagged(self, capsys):
        assert main(["validate", "--rel_tol", "1e-5"]) == 2
        text = capsys.readouterr().out
        assert "FLAG orthogonality" in text
        assert "validation failed" in text

    def test_xi_zero_rejected(self, capsys):
        assert main(["validate", "--xi", "0"]) == 1
