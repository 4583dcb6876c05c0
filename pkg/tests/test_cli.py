"""Command-line interface: file round-trips, subcommands, exit codes."""
import json
import subprocess
import sys

import numpy as np
import pytest

from darlington.cli import main, read_problem, write_realization
from darlington.realization import Realization


def write_coupled_pair(path, zeta=2.0, flags=None):
    z = float(zeta)
    doc = {
        "A": [[[-z, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-z, 0.0]]],
        "B": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
        "C": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
        "D": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
        "flags": flags or {"symmetric": True, "real": True},
    }
    path.write_text(json.dumps(doc))
    return path


class TestIO:
    def test_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(3)
        R = Realization(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)),
                        rng.normal(size=(3, 2)), rng.normal(size=(2, 3)),
                        rng.normal(size=(2, 2)))
        out = tmp_path / "r.json"
        write_realization(str(out), R)
        back = read_problem(str(out))["realization"]
        assert np.array_equal(back.a, R.a)
        assert np.array_equal(back.b, R.b)
        assert np.array_equal(back.c, R.c)
        assert np.array_equal(back.d, R.d)

    def test_bare_reals_accepted(self, tmp_path):
        doc = {"A": [[-1.0]], "B": [[1.0]], "C": [[1.0]], "D": [[0.0]]}
        f = tmp_path / "p.json"
        f.write_text(json.dumps(doc))
        R = read_problem(str(f))["realization"]
        assert R.n == 1 and R.a[0, 0] == -1.0

    def test_rejects_empty(self, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text("{}")
        with pytest.raises(ValueError):
            read_problem(str(f))


class TestCheck:
    def test_valid_file_exits_zero(self, tmp_path, capsys):
        f = write_coupled_pair(tmp_path / "z2.json")
        assert main(["check", str(f)]) == 0
        out = capsys.readouterr().out
        assert "schur_on_grid: True" in out

    def test_contractivity_failure_suggests_mobius(self, tmp_path, capsys):
        # S(s) = s/(s+2): unit norm at infinity
        doc = {"A": [[-2.0]], "B": [[1.0]], "C": [[-2.0]], "D": [[1.0]]}
        f = tmp_path / "edge.json"
        f.write_text(json.dumps(doc))
        rc = main(["check", str(f)])
        out = capsys.readouterr().out
        assert rc == 2
        assert "--mobius" in out

    def test_mobius_flag_fixes_it(self, tmp_path, capsys):
        doc = {"A": [[-2.0]], "B": [[1.0]], "C": [[-2.0]], "D": [[1.0]]}
        f = tmp_path / "edge.json"
        f.write_text(json.dumps(doc))
        assert main(["check", str(f), "--mobius", "0"]) == 0

    def test_flag_mismatch_fails(self, tmp_path, capsys):
        doc = {"A": [[-1.0, 0.0], [0.0, -2.0]],
               "B": [[0.3, 0.0], [0.0, 0.3]],
               "C": [[0.0, 0.3], [0.3, 0.0]],
               "D": [[0.0, 0.1], [0.2, 0.0]],
               "flags": {"symmetric": True}}
        f = tmp_path / "asym.json"
        f.write_text(json.dumps(doc))
        assert main(["check", str(f)]) == 1

    def test_nonsquare_d_with_symmetric_flag_fails(self, tmp_path, capsys):
        doc = {"A": [[-1.0]], "B": [[0.2, 0.1]], "C": [[1.0]],
               "D": [[0.0, 0.0]], "flags": {"symmetric": True}}
        f = tmp_path / "wide.json"
        f.write_text(json.dumps(doc))
        assert main(["check", str(f)]) == 1

    def test_json_report(self, tmp_path, capsys):
        f = write_coupled_pair(tmp_path / "z2.json")
        assert main(["check", str(f), "--json"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["mcmillan_degree"] == 2


class TestSynthesize:
    def test_minimal_symmetric_report(self, tmp_path, capsys):
        f = write_coupled_pair(tmp_path / "z2.json")
        out = tmp_path / "ext.json"
        rc = main(["synthesize", str(f), "--mode", "minimal-symmetric",
                   "--out", str(out), "--json"])
        assert rc == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["degree"] == 2 and rep["kappa"] == 0
        saved = read_problem(str(out))["realization"]
        assert saved.outputs == 4

    def test_inner_mode_outer_certificate(self, tmp_path, capsys):
        f = write_coupled_pair(tmp_path / "z2.json")
        rc = main(["synthesize", str(f), "--mode", "inner",
                   "--solution", "min", "--json"])
        assert rc == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["outer_lower_left"] is True
        assert rep["degree"] == 2
        assert rep["innerness_residual"] < 1e-8

    def test_symmetric_mode(self, tmp_path, capsys):
        f = write_coupled_pair(tmp_path / "z2.json")
        rc = main(["synthesize", str(f), "--mode", "symmetric", "--json"])
        assert rc == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["degree"] == 4  # 2n - n0
        assert rep["q_inner"] is True

    def test_scalar_file_kappa(self, tmp_path, capsys):
        doc = {"p1": [[0.5, 0.0]], "q": [[1.0, 0.0], [1.0, 0.0]]}
        f = tmp_path / "frac.json"
        f.write_text(json.dumps(doc))
        rc = main(["scalar", str(f), "--json"])
        assert rc == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["kappa"] == 1 and rep["extension_degree"] == 2

    def test_missing_file_exits_one(self, capsys):
        assert main(["check", "/nonexistent/problem.json"]) == 1


class TestEnvTolerance:
    def test_env_override(self, tmp_path, capsys, monkeypatch):
        f = write_coupled_pair(tmp_path / "z2.json")
        monkeypatch.setenv("DARLINGTON_TOL", "1e-5")
        assert main(["check", str(f)]) == 0


def test_console_entry_point(tmp_path):
    f = write_coupled_pair(tmp_path / "z2.json")
    proc = subprocess.run([sys.executable, "-m", "darlington", "check", str(f)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "schur_on_grid: True" in proc.stdout
