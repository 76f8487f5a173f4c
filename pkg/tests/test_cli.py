"""Tests for gencurv.cli module."""

import json

import pytest

from gencurv import __version__
from gencurv.cli import build_parser, main
from gencurv.config import DEFAULT_TOL, get_tolerance


class TestRicci:
    """Test the ricci command."""

    @pytest.mark.cli
    def test_einstein_instance(self, capsys):
        """Test so(3) with H = vol is reported Einstein."""
        assert main(["ricci", "so3"]) == 0
        out = capsys.readouterr().out
        assert "einstein: true" in out
        assert "residual:" in out
        assert "Ric+ (R_ia):" in out

    @pytest.mark.cli
    def test_non_einstein_instance(self, capsys):
        """Test that a non-Einstein instance still exits 0."""
        assert main(["ricci", "random_n3"]) == 0
        assert "einstein: false" in capsys.readouterr().out

    @pytest.mark.cli
    def test_oracle(self, capsys):
        """Test the curvature cross-check on random data."""
        assert main(["ricci", "random_n3", "--oracle"]) == 0
        assert "oracle discrepancy:" in capsys.readouterr().out

    @pytest.mark.cli
    def test_json(self, capsys):
        """Test the JSON report."""
        assert main(["ricci", "heis", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["command"] == "ricci"
        assert report["einstein"] is True
        assert report["signature"] == [2, 1]
        assert len(report["Rplus"]) == 3

    @pytest.mark.cli
    def test_tolerance_option(self, capsys):
        """Test that --tol applies for the run only."""
        assert main(["--tol", "1e-3", "ricci", "so3", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["tolerance"] == 1e-3
        assert get_tolerance() == DEFAULT_TOL

    @pytest.mark.cli
    def test_family_file(self, tmp_path, capsys):
        """Test an instance file naming a registered family."""
        path = tmp_path / "family.json"
        path.write_text(json.dumps({"family": "r'3,1", "parameters": {"theta": 2.0}}), encoding="utf-8")
        assert main(["ricci", str(path)]) == 0
        out = capsys.readouterr().out
        assert "family: r31prime" in out
        assert "einstein: true" in out


class TestClassify:
    """Test the classify command."""

    @pytest.mark.cli
    def test_unimodular(self, capsys):
        """Test the Bianchi class and normal form of heis."""
        assert main(["classify", "heis"]) == 0
        out = capsys.readouterr().out
        assert "bianchi: heis" in out
        assert "L normal form: L3" in out or "L normal form: L4" in out

    @pytest.mark.cli
    def test_non_unimodular(self, capsys):
        """Test the unimodular kernel line of r'3,1."""
        assert main(["classify", "r31prime"]) == 0
        out = capsys.readouterr().out
        assert "bianchi: r'3,1" in out
        assert "unimodular kernel: nondegenerate" in out
        assert "riemannian divergence:" in out

    @pytest.mark.cli
    def test_json(self, capsys):
        """Test the JSON classification of so(3)."""
        assert main(["classify", "so3", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["label"] == "so(3)"
        assert report["normal_form"]["family"] == "L1"
        assert report["riemannian_divergence"] == [0.0] * 6

    @pytest.mark.cli
    def test_wrong_dimension(self, tmp_path, capsys):
        """Test that n != 3 exits with the unsupported code."""
        path = tmp_path / "plane.json"
        path.write_text(json.dumps({"n": 2}), encoding="utf-8")
        assert main(["classify", str(path)]) == 3
        assert "error:" in capsys.readouterr().err


class TestValidate:
    """Test the validate command."""

    @pytest.mark.cli
    def test_valid(self, capsys):
        """Test that every check passes on so3."""
        assert main(["validate", "so3"]) == 0
        out = capsys.readouterr().out
        assert "jacobi: 0 ok" in out
        assert "courant:" in out
        assert "FAILED" not in out

    @pytest.mark.cli
    def test_corrupted(self, capsys):
        """Test that a Jacobi violation is reported, not raised."""
        assert main(["validate", "corrupted_jacobi"]) == 2
        out = capsys.readouterr().out
        assert "antisymmetry: 0 ok" in out
        assert "FAILED" in out
        assert "courant:" not in out

    @pytest.mark.cli
    def test_open_three_form(self, tmp_path, capsys):
        """Test that dH != 0 is reported by validate and rejected by ricci."""
        path = tmp_path / "open.json"
        text = '{\n  "n": 4,\n  "kappa": [[1, 2, 2, 1.0]],\n  "H": [[2, 3, 4, 1.0]]\n}\n'
        path.write_text(text, encoding="utf-8")
        assert main(["validate", str(path)]) == 2
        out = capsys.readouterr().out
        assert "jacobi: 0 ok" in out
        dh_line = next(line for line in out.splitlines() if line.startswith("dH:"))
        assert dh_line.endswith("FAILED")
        assert main(["ricci", str(path)]) == 2
        assert f"{path}:4" in capsys.readouterr().err


class TestErrors:
    """Test error handling of the entry point."""

    @pytest.mark.cli
    def test_missing_file(self, capsys):
        """Test that an unknown instance exits 2."""
        assert main(["ricci", "no_such_instance"]) == 2
        assert "Available instances" in capsys.readouterr().err

    @pytest.mark.cli
    def test_invalid_instance(self, capsys):
        """Test that a failing validation exits 2 with the location."""
        assert main(["ricci", "corrupted_jacobi"]) == 2
        assert "corrupted_jacobi.json:3" in capsys.readouterr().err

    @pytest.mark.cli
    def test_version(self, capsys):
        """Test --version."""
        with pytest.raises(SystemExit) as exc_info:
            build_parser().parse_args(["--version"])
        assert exc_info.value.code == 0
        assert __version__ in capsys.readouterr().out

    @pytest.mark.cli
    def test_command_required(self):
        """Test that a subcommand is required."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestFamiliesAndTables:
    """Test the families and tables commands."""

    @pytest.mark.cli
    def test_families(self, capsys):
        """Test listing the divergence-free families."""
        assert main(["families", "--table", "1"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("abelian")
        assert "r31prime" in out
        assert "so3_div" not in out

    @pytest.mark.cli
    @pytest.mark.slow
    def test_tables(self, tmp_path, capsys):
        """Test a coarse verification run."""
        assert main(["tables", "--out", str(tmp_path), "--grid", "coarse"]) == 0
        out = capsys.readouterr().out
        assert "table 1: 7 rows, table 2: 14 rows" in out
        assert (tmp_path / "report.md").exists()
        assert (tmp_path / "table2.csv").exists()
