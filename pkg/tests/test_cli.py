#!/usr/bin/env python3
"""
Tests for the command-line front end
"""

import json

import pytest
import sys
from pathlib import Path

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from contractads.cli import build_parser, run


class TestCLI:
    """Tests for CLI verbs and exit codes."""

    @pytest.fixture(autouse=True)
    def working_directory(self, monkeypatch, tmp_path):
        monkeypatch.chdir(tmp_path)

    def _json(self, capsys, argv):
        status = run(argv + ["--format", "json"])
        return status, json.loads(capsys.readouterr().out)

    def test_graphs(self, capsys):
        """Test graph invariants for one graph."""
        status, data = self._json(capsys, ["graphs", "--graph", "P3"])
        assert status == 0
        assert data["command"] == "graphs"
        assert data["results"][0]["acyclic_orientations"] == 4
        assert data["results"][0]["tubes"] == 6

    def test_dims(self, capsys):
        """Test dim gcLie(C4) = 3."""
        status, data = self._json(capsys, ["dims", "--preset", "gcLie", "--graph", "C4", "--order", "graphpermlex"])
        assert status == 0
        assert data["results"][0]["dimension"] == 3
        assert data["certificates"]["certificate"] == "pbw"

    def test_dims_linear_algebra(self, capsys):
        """Test the linear-algebra path agrees."""
        status, data = self._json(capsys, ["dims", "--preset", "gcAss-nu", "--graph", "K4", "--linear-algebra"])
        assert status == 0
        assert data["results"][0]["dimension"] == 24

    def test_pbw_check_passes(self, capsys):
        """Test gcCom passes the criterion."""
        status, data = self._json(capsys, ["pbw-check", "--preset", "gcCom"])
        assert status == 0
        assert data["status"] == "PASS"
        assert len(data["results"]) == 38

    def test_koszul_euler_fails_for_rooted_trees(self, capsys):
        """Test the RST Koszul complex is reported as not acyclic."""
        status, data = self._json(capsys, ["koszul-euler", "--dual", "RST", "--graph", "C4"])
        assert status == 1
        assert data["status"] == "FAIL"
        assert data["certificates"]["acyclicity"] == "violated"

    def test_koszul_euler_passes_for_commutative(self, capsys):
        """Test gcCom is consistent with acyclicity."""
        status, data = self._json(capsys, ["koszul-euler", "--dual", "gcCom", "--vertices", "4"])
        assert status == 0
        assert all(row["euler"] == 0 for row in data["results"])
        assert data["certificates"]["dual_dimensions"] == "pbw"

    def test_koszul_euler_falls_back_without_pbw(self, capsys):
        """Test dual dimensions come from linear algebra when the dual fails the criterion."""
        status, data = self._json(capsys, ["koszul-euler", "--dual", "RST", "--graph", "C4"])
        assert status == 1
        assert data["certificates"]["dual_dimensions"] == "linear-algebra"

    def test_order_check_passes(self, capsys):
        """Test sampled compositions respect graphpermlex for gcLie."""
        status, data = self._json(capsys, ["order-check", "--preset", "gcLie", "--samples", "200"])
        assert status == 0
        assert data["status"] == "PASS"
        assert data["certificates"] == {"samples": 200, "failures": 0}
        assert data["inputs"]["seed"] == 0

    def test_order_check_seed_is_reproducible(self, capsys):
        """Test the same seed gives identical output and the seed is recorded."""
        argv = ["order-check", "--preset", "gcAss-mb", "--samples", "100", "--seed", "7", "--format", "json"]
        assert run(argv) == 0
        first = capsys.readouterr().out
        assert run(argv) == 0
        second = capsys.readouterr().out
        assert first == second
        assert json.loads(first)["inputs"]["seed"] == 7

    def test_os_hilbert(self, capsys):
        """Test the Orlik-Solomon Hilbert series of K3."""
        status, data = self._json(capsys, ["os", "hilbert", "--graph", "K3"])
        assert status == 0
        assert [row["dimension"] for row in data["results"]] == [1, 3, 2]

    def test_os_pairing(self, capsys):
        """Test the pairing matrix of C4 is diagonal."""
        status, data = self._json(capsys, ["os", "pairing", "--graph", "C4"])
        assert status == 0
        assert data["certificates"]["diagonal"] is True
        assert len(data["results"]) == 14

    def test_pairing(self, capsys):
        """Test relations and annihilator are complementary."""
        status, data = self._json(capsys, ["pairing", "--preset", "gcLie"])
        assert status == 0
        assert all(row["relations"] + row["annihilator"] == row["space"] for row in data["results"])

    def test_presets_table(self, capsys):
        """Test the presets listing."""
        assert run(["presets"]) == 0
        out = capsys.readouterr().out
        assert "gcGerst" in out
        assert "c (needs --n)" in out

    def test_unknown_preset(self, capsys):
        """Test an unknown preset exits with status 2."""
        assert run(["dims", "--preset", "gcPreLie", "--graph", "P3"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_graph(self, capsys):
        """Test a disconnected graph exits with status 2."""
        assert run(["os", "hilbert", "--graph", "edges:1-2,3-4"]) == 2

    def test_usage_error(self):
        """Test a missing required flag is a usage error."""
        with pytest.raises(SystemExit) as info:
            build_parser().parse_args(["dims", "--graph", "P3"])
        assert info.value.code == 2

    def test_validate_report(self, capsys, tmp_path):
        """Test a JSON report validates against its schema."""
        run(["os", "hilbert", "--graph", "P3", "--format", "json"])
        path = tmp_path / "report.json"
        path.write_text(capsys.readouterr().out)
        assert run(["validate-report", str(path)]) == 0
        assert "✓ Valid" in capsys.readouterr().out

        path.write_text(json.dumps({"schema": "1", "command": "os"}))
        assert run(["validate-report", str(path)]) == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
