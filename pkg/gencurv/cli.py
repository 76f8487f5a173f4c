"""Command-line front end for gencurv.

Commands:
    ricci <file> [--oracle] [--json]   Generalized Ricci tensor and Einstein verdict
    classify <file> [--json]           Bianchi class, normal form, unimodular kernel
    validate <file>                    Schema, Jacobi, closedness and Courant axioms
    tables [--out DIR] [--grid ...]    Verify every solution family and write the tables
    families                           List registered solution families

<file> is a path to an instance file or the name of a bundled instance.

Exit codes:
    0 success, 1 verification failure, 2 invalid input, 3 unsupported input

Examples:
    $ gencurv ricci so3
    $ gencurv classify heis --json
    $ gencurv tables --out results --grid coarse
"""

import argparse
import json
import logging
import sys
import time
from typing import Any, Callable, Dict, List, Optional

from gencurv import __version__
from gencurv.config import (
    EXIT_INVALID_INPUT,
    EXIT_OK,
    EXIT_UNSUPPORTED,
    EXIT_VERIFICATION_FAILED,
    ORACLE_TOL,
    get_tolerance,
    tolerance,
)
from gencurv.connections import riemannian_divergence
from gencurv.courant import check_courant_axioms, dorfman_tensor
from gencurv.curvature import generalized_ricci, is_generalized_einstein, ricci_via_curvature
from gencurv.data import LoadedInstance, load_instance
from gencurv.dim3 import identify_bianchi, l_encoding, normal_form_of_symmetric_l, unimodular_kernel
from gencurv.exceptions import GencurvError, UnsupportedError
from gencurv.families import get_family_info, list_families
from gencurv.lie import validate_lie_algebra
from gencurv.tables import verify_tables
from gencurv.utils import digest, format_matrix, format_scalar, max_abs

logger = logging.getLogger(__name__)


def _rounded(value: Any) -> Any:
    """Nested lists of floats rounded to the printed number of digits."""
    if isinstance(value, dict):
        return {key: _rounded(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(v) for v in value]
    if hasattr(value, "tolist"):
        return _rounded(value.tolist())
    if isinstance(value, float):
        return float(format_scalar(value))
    return value


def _emit(report: Dict[str, Any], lines: List[str], as_json: bool) -> None:
    if as_json:
        print(json.dumps(_rounded(report), indent=2))
    else:
        print("\n".join(lines))


def _header(inst: LoadedInstance) -> List[str]:
    lines = [f"source: {inst.source}", f"digest: {digest(inst.to_dict())}"]
    if inst.family is not None:
        lines.append(f"family: {inst.family}")
    lines.append(f"n: {inst.n}  signature: {inst.metric.signature}")
    return lines


# =============================================================================
# Commands
# =============================================================================


def cmd_ricci(args: argparse.Namespace) -> int:
    """Print both Ricci blocks, the Einstein verdict and optionally the oracle discrepancy."""
    inst = load_instance(args.file)
    start = time.perf_counter()
    B = dorfman_tensor(inst.basis())
    ric = generalized_ricci(B, inst.delta)
    einstein, residual = is_generalized_einstein(ric)

    report: Dict[str, Any] = {
        "command": "ricci",
        "source": inst.source,
        "digest": digest(inst.to_dict()),
        "n": inst.n,
        "signature": list(inst.metric.signature),
        "Rplus": ric.Rplus,
        "Rminus": ric.Rminus,
        "residual": residual,
        "einstein": einstein,
        "tolerance": get_tolerance(),
    }
    lines = _header(inst)
    lines += ["Ric+ (R_ia):"] + [f"  {row}" for row in format_matrix(ric.Rplus)]
    lines += ["Ric- (R_ai):"] + [f"  {row}" for row in format_matrix(ric.Rminus)]
    lines += [f"residual: {format_scalar(residual)}", f"einstein: {str(einstein).lower()}"]

    status = EXIT_OK
    if args.oracle:
        oracle = ricci_via_curvature(B, inst.delta)
        discrepancy = max(max_abs(ric.Rplus - oracle.Rplus), max_abs(ric.Rminus - oracle.Rminus))
        report["oracle_discrepancy"] = discrepancy
        lines.append(f"oracle discrepancy: {format_scalar(discrepancy)}")
        if discrepancy > ORACLE_TOL:
            status = EXIT_VERIFICATION_FAILED
    logger.debug("ricci finished in %.3fs", time.perf_counter() - start)
    _emit(report, lines, args.json)
    return status


def cmd_classify(args: argparse.Namespace) -> int:
    """Print the Bianchi class, the normal form of L or the unimodular kernel, and delta^g."""
    inst = load_instance(args.file)
    if inst.n != 3:
        raise UnsupportedError(f"Classification needs n = 3, got n = {inst.n}")
    label = identify_bianchi(inst.alg)
    basis = inst.basis()
    report: Dict[str, Any] = {
        "command": "classify",
        "source": inst.source,
        "digest": digest(inst.to_dict()),
        "label": label.label,
        "parameter": label.parameter,
        "unimodular": inst.alg.is_unimodular(),
    }
    lines = _header(inst) + [f"bianchi: {label}"]

    if inst.alg.is_unimodular():
        encoding = l_encoding(basis)
        form = normal_form_of_symmetric_l(encoding.L, encoding.eps)
        values = ", ".join(format_scalar(v) for v in form.params.values())
        report["normal_form"] = {"family": form.family, "params": dict(form.params)}
        lines.append(f"L normal form: {form.family}({values})")
    else:
        kernel = unimodular_kernel(inst.alg, inst.metric)
        report["kernel_degenerate"] = kernel.degenerate
        lines.append(f"unimodular kernel: {'degenerate' if kernel.degenerate else 'nondegenerate'}")

    delta_g = riemannian_divergence(basis).delta
    report["riemannian_divergence"] = delta_g
    lines.append("riemannian divergence: " + "  ".join(format_scalar(d) for d in delta_g))
    _emit(report, lines, args.json)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    """Report every validity check instead of stopping at the first failure."""
    inst = load_instance(args.file, validate=False)
    lie = validate_lie_algebra(inst.alg)
    closedness = inst.three_form.closedness(inst.alg)
    checks = [
        ("antisymmetry", lie.antisymmetry, lie.antisymmetry <= lie.tol),
        ("jacobi", lie.jacobi, lie.jacobi <= lie.tol),
        ("dH", closedness, closedness <= get_tolerance()),
    ]
    if lie.ok:
        courant = check_courant_axioms(dorfman_tensor(inst.basis()))
        checks.append(("courant", courant.max_violation, courant.ok))

    lines = _header(inst)
    for name, value, ok in checks:
        lines.append(f"{name}: {format_scalar(value)} {'ok' if ok else 'FAILED'}")
    print("\n".join(lines))
    if all(ok for _, _, ok in checks):
        return EXIT_OK
    return EXIT_INVALID_INPUT


def cmd_tables(args: argparse.Namespace) -> int:
    """Verify the solution families and write table1.csv, table2.csv and report.md."""
    start = time.perf_counter()
    report = verify_tables(coarse=args.grid == "coarse", seed=args.seed)
    written = report.write(args.out)
    logger.info("Verified tables in %.1fs", time.perf_counter() - start)
    print(f"table 1: {len(report.table1)} rows, table 2: {len(report.table2)} rows")
    for path in written:
        print(f"wrote {path}")
    if report.ok:
        return EXIT_OK
    print(f"{len(report.failures)} failures:", file=sys.stderr)
    for line in report.failures:
        print(f"  {line}", file=sys.stderr)
    return EXIT_VERIFICATION_FAILED


def cmd_families(args: argparse.Namespace) -> int:
    """List the registered solution families."""
    for family_id in list_families(args.table):
        info = get_family_info(family_id)
        aliases = ", ".join(info["aliases"])
        print(f"{family_id:<18} table {info['table']} row {info['row']:>2}  {info['title']}")
        if aliases:
            print(f"{'':<18} aliases: {aliases}")
    return EXIT_OK


# =============================================================================
# Entry point
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gencurv",
        description="Generalized Ricci curvature of left-invariant Courant algebroids.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log debug messages")
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="Zero-test tolerance for this run (default: GENCURV_TOL or 1e-9)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ricci = sub.add_parser("ricci", help="Generalized Ricci tensor of an instance")
    ricci.add_argument("file", help="Instance file or bundled instance name")
    ricci.add_argument("--oracle", action="store_true", help="Cross-check with the curvature trace")
    ricci.add_argument("--json", action="store_true", help="Print the report as JSON")
    ricci.set_defaults(handler=cmd_ricci)

    classify = sub.add_parser("classify", help="Classify a three-dimensional instance")
    classify.add_argument("file", help="Instance file or bundled instance name")
    classify.add_argument("--json", action="store_true", help="Print the report as JSON")
    classify.set_defaults(handler=cmd_classify)

    validate = sub.add_parser("validate", help="Check an instance file")
    validate.add_argument("file", help="Instance file or bundled instance name")
    validate.set_defaults(handler=cmd_validate)

    tables = sub.add_parser("tables", help="Verify every solution family")
    tables.add_argument("--out", default=".", help="Output directory (default: current directory)")
    tables.add_argument("--grid", choices=("coarse", "full"), default="full", help="Parameter grid")
    tables.add_argument("--seed", type=int, default=0, help="Seed for free parameters")
    tables.set_defaults(handler=cmd_tables)

    families = sub.add_parser("families", help="List solution families")
    families.add_argument("--table", type=int, choices=(0, 1, 2), default=None, help="Only this table")
    families.set_defaults(handler=cmd_families)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        with tolerance(args.tol):
            return handler(args)
    except UnsupportedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (GencurvError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


__all__ = [
    "build_parser",
    "main",
    "cmd_ricci",
    "cmd_classify",
    "cmd_validate",
    "cmd_tables",
    "cmd_families",
]


if __name__ == "__main__":
    sys.exit(main())
