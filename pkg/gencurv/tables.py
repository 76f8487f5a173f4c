"""Verification of the solution tables.

Every registered family is instantiated over the parameter grid. Each
instance must be generalized Einstein, carry the expected isomorphism
class and satisfy the qualifiers of its table row; a perturbed copy of
each instance must fail the Einstein test with a residual of at least
PERTURBATION_REPORT_FLOOR. Results are collected in pandas
DataFrames, one row per table row, and written as CSV and markdown.

Examples:
    >>> from gencurv.tables import verify_tables
    >>>
    >>> report = verify_tables(coarse=True)
    >>> report.ok
    True
    >>> len(report.table1), len(report.table2)
    (7, 14)
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from gencurv.config import PERTURBATION_REPORT_FLOOR, get_tolerance
from gencurv.curvature import classical_ricci, nonflatness_witness, soliton_residual
from gencurv.dim3 import identify_bianchi, l_encoding, normal_form_of_symmetric_l, unimodular_kernel
from gencurv.exceptions import GencurvError
from gencurv.families import (
    FamilySpec,
    SolutionFamilyInstance,
    get_family,
    iter_parameters,
    list_families,
    perturbed_instance,
    solution_family,
)
from gencurv.utils import format_scalar, max_abs

logger = logging.getLogger(__name__)

TABLE_COLUMNS = {
    1: ["class", "H", "g", "L"],
    2: ["class", "H", "g", "delta", "L"],
    0: ["class", "H", "g", "delta", "L"],
}

RESULT_COLUMNS = [
    "families",
    "instances",
    "skipped",
    "max_residual",
    "einstein",
    "bianchi",
    "qualifiers",
    "min_perturbed_residual",
    "perturbations_fail",
    "passed",
]


# =============================================================================
# Qualifiers
# =============================================================================


def derived_algebra_basis(inst: SolutionFamilyInstance) -> np.ndarray:
    """Columns spanning [g, g]."""
    rows = inst.alg.kappa.reshape(-1, inst.alg.n)
    _, s, vt = np.linalg.svd(rows)
    rank = int(np.sum(s > get_tolerance() * max(1.0, max_abs(rows))))
    return vt[:rank].T


def _form_type(gram: np.ndarray) -> str:
    eigenvalues = np.linalg.eigvalsh(gram)
    tol = get_tolerance() * max(1.0, max_abs(gram))
    if np.all(eigenvalues > tol) or np.all(eigenvalues < -tol):
        return "definite"
    if np.any(eigenvalues > tol) and np.any(eigenvalues < -tol):
        return "indefinite"
    return "degenerate"


def check_qualifiers(spec: FamilySpec, inst: SolutionFamilyInstance) -> Dict[str, bool]:
    """Evaluate every qualifier the family asserts.

    Returns:
        Mapping from qualifier name to whether the instance satisfies it
    """
    tol = get_tolerance()
    basis = inst.basis()
    checks: Dict[str, bool] = {"delta": bool(spec.delta_pattern(inst))}
    if spec.h_zero is not None:
        checks["H"] = (max_abs(inst.three_form.H) <= tol) == spec.h_zero
    if spec.metric is not None:
        checks["g"] = inst.metric.is_definite() == (spec.metric == "definite")
    if spec.derived_metric is not None:
        D = derived_algebra_basis(inst)
        checks["g on [g,g]"] = _form_type(D.T @ inst.metric.g @ D) == spec.derived_metric
    if spec.l_diagonalizable is not None:
        form = normal_form_of_symmetric_l(l_encoding(basis).L, basis.eps)
        checks["L"] = (form.family in ("L1", "L2")) == spec.l_diagonalizable
    if spec.kernel_degenerate is not None:
        checks["g|u"] = unimodular_kernel(inst.alg, inst.metric).degenerate == spec.kernel_degenerate
    if spec.flat is not None:
        checks["flat"] = classical_ricci(basis).is_flat() == spec.flat
    if spec.soliton:
        checks["soliton"] = max_abs(soliton_residual(basis)) <= tol and abs(nonflatness_witness(basis)) > tol
    return checks


# =============================================================================
# Per-family verification
# =============================================================================


@dataclass
class FamilyVerification:
    """Aggregated verdicts of one family over its parameter grid."""

    family_id: str
    instances: int = 0
    skipped: int = 0
    max_residual: float = 0.0
    einstein: bool = True
    bianchi: bool = True
    qualifiers: bool = True
    min_perturbed_residual: float = math.inf
    perturbations_fail: bool = True
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.instances > 0 and all(
            (self.einstein, self.bianchi, self.qualifiers, self.perturbations_fail)
        )

    def record_failure(self, params: Dict[str, Any], reason: str) -> None:
        self.failures.append(f"{self.family_id} {params}: {reason}")


def verify_family(family_id: str, coarse: bool = False, seed: int = 0) -> FamilyVerification:
    """Instantiate a family over its grid and check every verdict.

    Out-of-range grid points are counted as skipped. Numerical errors on a
    grid point are recorded as failures, never raised.
    """
    spec = get_family(family_id)
    tol = get_tolerance()
    result = FamilyVerification(spec.family_id)
    for params in iter_parameters(spec.family_id, coarse=coarse, seed=seed):
        try:
            inst = solution_family(spec.family_id, **params)
        except GencurvError as exc:
            logger.debug("Skipping %s %s: %s", spec.family_id, params, exc)
            result.skipped += 1
            continue
        result.instances += 1
        try:
            _check_instance(spec, inst, params, tol, result)
        except (GencurvError, np.linalg.LinAlgError) as exc:
            result.qualifiers = False
            result.record_failure(params, f"error: {exc}")
    if result.instances == 0:
        result.record_failure({}, "no valid grid point")
    logger.info(
        "Family %s: %d instances, max residual %.3g, passed=%s",
        spec.family_id,
        result.instances,
        result.max_residual,
        result.passed,
    )
    return result


def _check_instance(
    spec: FamilySpec,
    inst: SolutionFamilyInstance,
    params: Dict[str, Any],
    tol: float,
    result: FamilyVerification,
) -> None:
    residual = inst.residual()
    result.max_residual = max(result.max_residual, residual)
    if residual > tol:
        result.einstein = False
        result.record_failure(params, f"Einstein residual {residual:.3g}")

    label = identify_bianchi(inst.alg).label
    expected = spec.expected_label(params)
    if label != expected:
        result.bianchi = False
        result.record_failure(params, f"class {label}, expected {expected}")

    failed = [name for name, ok in check_qualifiers(spec, inst).items() if not ok]
    if failed:
        result.qualifiers = False
        result.record_failure(params, f"qualifiers {', '.join(failed)}")

    perturbed = perturbed_instance(spec.family_id, **params).residual()
    result.min_perturbed_residual = min(result.min_perturbed_residual, perturbed)
    if perturbed <= 10.0 * tol or perturbed < PERTURBATION_REPORT_FLOOR:
        result.perturbations_fail = False
        result.record_failure(params, f"perturbed residual {perturbed:.3g}")


# =============================================================================
# Tables
# =============================================================================


@dataclass
class TableReport:
    """Verification tables and the failing rows.

    Attributes:
        table1: Divergence-free table, one row per table row
        table2: Arbitrary-divergence table
        extras: Families outside the two tables
        failures: Human-readable failure lines
    """

    table1: pd.DataFrame
    table2: pd.DataFrame
    extras: pd.DataFrame
    failures: List[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def write(self, out_dir: Union[str, Path]) -> List[Path]:
        """Write table1.csv, table2.csv and report.md into out_dir."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / "table1.csv", out / "table2.csv", out / "report.md"]
        self.table1.to_csv(paths[0], index=False, float_format="%.12g")
        self.table2.to_csv(paths[1], index=False, float_format="%.12g")
        paths[2].write_text(self.to_markdown(), encoding="utf-8")
        return paths

    def to_markdown(self) -> str:
        sections = [
            "# Generalized Einstein solution tables",
            "",
            "## Divergence-free solutions",
            "",
            markdown_table(self.table1),
            "",
            "## Solutions with arbitrary divergence",
            "",
            markdown_table(self.table2),
        ]
        if len(self.extras):
            sections += ["", "## Riemannian divergence", "", markdown_table(self.extras)]
        sections += ["", f"Verdict: {'all rows pass' if self.ok else 'FAILED'}"]
        sections += [f"- {line}" for line in self.failures]
        return "\n".join(sections) + "\n"


def _format_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    if isinstance(value, (float, np.floating)):
        return format_scalar(float(value))
    return str(value)


def markdown_table(df: pd.DataFrame) -> str:
    """Pipe table with floats printed to 12 significant digits."""
    header = "| " + " | ".join(df.columns) + " |"
    rule = "|" + "|".join("---" for _ in df.columns) + "|"
    body = ["| " + " | ".join(_format_cell(v) for v in row) + " |" for row in df.itertuples(index=False)]
    return "\n".join([header, rule, *body])


def _family_record(spec: FamilySpec, result: FamilyVerification) -> Dict[str, Any]:
    return {
        "row": spec.row,
        "class": spec.title,
        "H": spec.h_text,
        "g": spec.g_text,
        "delta": spec.delta_text,
        "L": spec.l_text,
        "families": spec.family_id,
        "instances": result.instances,
        "skipped": result.skipped,
        "max_residual": result.max_residual,
        "einstein": result.einstein,
        "bianchi": result.bianchi,
        "qualifiers": result.qualifiers,
        "min_perturbed_residual": result.min_perturbed_residual,
        "perturbations_fail": result.perturbations_fail,
        "passed": result.passed,
    }


def _join_unique(values: pd.Series) -> str:
    return " | ".join(dict.fromkeys(v for v in values if v))


def _table_frame(records: List[Dict[str, Any]], table: int) -> pd.DataFrame:
    columns = TABLE_COLUMNS[table] + RESULT_COLUMNS
    if not records:
        return pd.DataFrame(columns=columns)
    df = pd.DataFrame.from_records(records)
    grouped = df.groupby("row", sort=True).agg(
        {
            "class": "first",
            "H": "first",
            "g": "first",
            "delta": _join_unique,
            "L": "first",
            "families": " + ".join,
            "instances": "sum",
            "skipped": "sum",
            "max_residual": "max",
            "einstein": "all",
            "bianchi": "all",
            "qualifiers": "all",
            "min_perturbed_residual": "min",
            "perturbations_fail": "all",
            "passed": "all",
        }
    )
    return grouped.reset_index(drop=True)[columns]


def verify_tables(coarse: bool = False, seed: int = 0, families: Optional[List[str]] = None) -> TableReport:
    """Verify every table row over the parameter grid.

    Args:
        coarse: Use COARSE_GRID instead of PARAMETER_GRID
        seed: Seed of the random draws of free parameters
        families: Restrict the run to these families (all when None)

    Returns:
        TableReport; never raises on failing rows
    """
    selected = set(list_families()) if families is None else {get_family(f).family_id for f in families}
    records: Dict[int, List[Dict[str, Any]]] = {0: [], 1: [], 2: []}
    failures: List[str] = []
    for family_id in list_families():
        if family_id not in selected:
            continue
        spec = get_family(family_id)
        result = verify_family(family_id, coarse=coarse, seed=seed)
        records[spec.table].append(_family_record(spec, result))
        if not result.passed:
            prefix = f"table {spec.table} row {spec.row}" if spec.table else "extra"
            failures.extend(f"{prefix}: {line}" for line in result.failures or [f"{family_id}: failed"])
    return TableReport(
        table1=_table_frame(records[1], 1),
        table2=_table_frame(records[2], 2),
        extras=_table_frame(records[0], 0),
        failures=failures,
    )


__all__ = [
    "FamilyVerification",
    "TableReport",
    "check_qualifiers",
    "derived_algebra_basis",
    "markdown_table",
    "verify_family",
    "verify_tables",
]
