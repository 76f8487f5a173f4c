"""Tests for gencurv.tables module."""

import pandas as pd
import pytest

from gencurv.families import get_family, solution_family
from gencurv.tables import (
    TableReport,
    check_qualifiers,
    derived_algebra_basis,
    markdown_table,
    verify_family,
    verify_tables,
)


class TestQualifiers:
    """Test check_qualifiers() and helpers."""

    @pytest.mark.unit
    def test_heis_qualifiers(self):
        """Test that the Heisenberg row qualifiers hold."""
        checks = check_qualifiers(get_family("heis"), solution_family("heis"))
        assert set(checks) >= {"delta", "H", "g", "L", "flat"}
        assert all(checks.values())

    @pytest.mark.unit
    def test_soliton_qualifier(self):
        """Test the soliton qualifier of r'3,1."""
        checks = check_qualifiers(get_family("r31prime"), solution_family("r31prime"))
        assert checks["soliton"]
        assert checks["g|u"]

    @pytest.mark.unit
    def test_derived_algebra(self):
        """Test dim [g, g] for heis and e(2)."""
        assert derived_algebra_basis(solution_family("heis")).shape == (3, 1)
        assert derived_algebra_basis(solution_family("e2")).shape == (3, 2)

    @pytest.mark.unit
    def test_divergence_patterns(self):
        """Test the divergence column on matching and foreign instances."""
        so3_div = solution_family("so3_div", d1=1.0)
        assert check_qualifiers(get_family("so3_div"), so3_div)["delta"]
        assert check_qualifiers(get_family("heis_div"), solution_family("heis_div", p=1.0))["delta"]
        assert not check_qualifiers(get_family("heis_div"), so3_div)["delta"]


class TestVerifyFamily:
    """Test verify_family() function."""

    @pytest.mark.integration
    @pytest.mark.parametrize("family_id", ["so3", "heis", "r31prime", "e11_l5_div"])
    def test_coarse_pass(self, family_id):
        """Test that coarse grids pass."""
        result = verify_family(family_id, coarse=True)
        assert result.passed, result.failures
        assert result.max_residual < 1e-9
        assert result.min_perturbed_residual > 1e-8

    @pytest.mark.integration
    def test_grid_size(self):
        """Test the instance count of so(3) on the coarse grid."""
        assert verify_family("so3", coarse=True).instances == 4

    @pytest.mark.integration
    def test_out_of_range_skipped(self):
        """Test that inadmissible grid points are skipped."""
        result = verify_family("riemannian_div", coarse=True)
        assert result.skipped == 12
        assert result.instances == 12
        assert result.passed, result.failures


class TestVerifyTables:
    """Test verify_tables() and TableReport."""

    @pytest.mark.integration
    def test_restricted_run(self, tmp_path):
        """Test a run over two families and the written files."""
        report = verify_tables(coarse=True, families=["so(3)", "heis-with-divergence"])
        assert report.ok
        assert len(report.table1) == 1
        assert len(report.table2) == 1
        assert report.extras.empty

        paths = report.write(tmp_path / "out")
        assert [p.name for p in paths] == ["table1.csv", "table2.csv", "report.md"]
        table1 = pd.read_csv(paths[0])
        assert table1.loc[0, "class"] == "so(3)"
        assert bool(table1.loc[0, "passed"])
        text = paths[2].read_text(encoding="utf-8")
        assert text.startswith("# Generalized Einstein solution tables")
        assert "Verdict: all rows pass" in text

    @pytest.mark.integration
    def test_merged_row(self):
        """Test that the two L3/L5 families share one row."""
        report = verify_tables(coarse=True, families=["e11_jordan_div", "e11_l5_div"])
        assert len(report.table2) == 1
        assert report.table2.loc[0, "families"] == "e11_jordan_div + e11_l5_div"

    @pytest.mark.unit
    def test_failure_markdown(self):
        """Test the verdict line of a failing report."""
        empty = pd.DataFrame(columns=["class"])
        report = TableReport(empty, empty, empty, ["table 1 row 2: so3 {}: Einstein residual 1"])
        assert not report.ok
        text = report.to_markdown()
        assert "Verdict: FAILED" in text
        assert "- table 1 row 2" in text

    @pytest.mark.unit
    def test_markdown_table(self):
        """Test pipe table formatting of booleans and floats."""
        df = pd.DataFrame({"name": ["a"], "ok": [True], "value": [0.5]})
        lines = markdown_table(df).splitlines()
        assert lines[0] == "| name | ok | value |"
        assert lines[1] == "|---|---|---|"
        assert lines[2].startswith("| a | yes |")

    @pytest.mark.slow
    def test_full_coarse_run(self):
        """Test that every row passes on the coarse grid."""
        report = verify_tables(coarse=True)
        assert report.ok, report.failures
        assert len(report.table1) == 7
        assert len(report.table2) == 14
        assert len(report.extras) == 1
