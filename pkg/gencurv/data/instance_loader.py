"""Instance file loading utilities for gencurv.

Instance files are JSON objects with 1-based indices:

    {
      "n": 3,
      "kappa": [[a, b, c, value], ...],   # kappa_{ab}^c, partner [b, a, c] implied
      "g": [[...], [...], [...]],          # identity when omitted
      "H": [[a, b, c, value], ...],       # all permutations implied
      "delta": [d_1, ..., d_2n]           # zero when omitted
    }

or {"family": name, "parameters": {...}} to build a registered solution
family instead.

Functions:
    load_instance: Load a bundled instance by name or any file by path
    parse_instance: Build an instance from an already decoded payload
    instance_to_dict: Serialise an instance back to the file schema
    get_data_path: Get path to the data directory
    list_available_instances: List the bundled instances

Examples:
    >>> from gencurv.data import load_instance
    >>>
    >>> inst = load_instance("so3")
    >>> inst.alg.n
    3
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from gencurv.connections import DivergenceForm
from gencurv.exceptions import GencurvError, InvalidInputError
from gencurv.lie import AdaptedBasis, LieAlgebraData, MetricData, ThreeFormData, adapted_basis, validate_lie_algebra
from gencurv.utils import entries_to_tensor, tensor_to_entries

logger = logging.getLogger(__name__)

_PERMUTATIONS = (
    ((0, 1, 2), 1.0),
    ((1, 2, 0), 1.0),
    ((2, 0, 1), 1.0),
    ((1, 0, 2), -1.0),
    ((0, 2, 1), -1.0),
    ((2, 1, 0), -1.0),
)


@dataclass(frozen=True)
class LoadedInstance:
    """Validated instance read from a file or payload.

    Attributes:
        alg, metric, three_form, delta: The data, 0-based
        source: File path or '<payload>'
        family: Registered family the instance was built from, if any
        parameters: Its parameters
    """

    alg: LieAlgebraData
    metric: MetricData
    three_form: ThreeFormData
    delta: DivergenceForm
    source: str = "<payload>"
    family: Optional[str] = None
    parameters: Optional[Dict[str, Any]] = None

    @property
    def n(self) -> int:
        return self.alg.n

    def basis(self) -> AdaptedBasis:
        """Adapted basis on the frame the data is given in when it is orthonormal, else the canonical one."""
        if self.family is not None:
            return AdaptedBasis.from_frame(self.alg, self.metric, self.three_form, np.eye(self.n))
        return adapted_basis(self.alg, self.metric, self.three_form)

    def to_dict(self) -> Dict[str, Any]:
        return instance_to_dict(self.alg, self.metric, self.three_form, self.delta)


def get_data_path() -> Path:
    """Get the path to the data directory.

    Examples:
        >>> get_data_path().name
        'data'
    """
    return Path(__file__).parent


def list_available_instances() -> List[str]:
    """List bundled instance names (file stems).

    Examples:
        >>> "so3" in list_available_instances()
        True
    """
    data_dir = get_data_path()
    if not data_dir.exists():
        return []
    return sorted(f.stem for f in data_dir.glob("*.json"))


def _key_line(text: Optional[str], key: str, source: str) -> str:
    """'source:line' of the first line mentioning "key", or source alone."""
    if text is None:
        return source
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return f"{source}:{number}"
    return source


def _antisymmetric_pairs(rows: Sequence[Sequence[float]], n: int, name: str) -> np.ndarray:
    """kappa from [a, b, c, value] rows, filling kappa[b, a, c] = -value."""
    entries_to_tensor(rows, n, rank=3, name=name)
    K = np.zeros((n, n, n))
    filled = np.zeros((n, n, n), dtype=bool)
    for row_number, row in enumerate(rows, start=1):
        a, b, c = (int(i) - 1 for i in row[:3])
        value = float(row[3])
        if a == b and value != 0.0:
            raise InvalidInputError(f"{name} entry {row_number} is diagonal in its first two indices")
        for index, signed in (((a, b, c), value), ((b, a, c), -value)):
            if filled[index] and K[index] != signed:
                raise InvalidInputError(f"{name} entry {row_number} contradicts an earlier entry")
            K[index] = signed
            filled[index] = True
    return K


def _alternating(rows: Sequence[Sequence[float]], n: int, name: str) -> np.ndarray:
    """Three-form from [a, b, c, value] rows, filling every permutation with its sign."""
    entries_to_tensor(rows, n, rank=3, name=name)
    H = np.zeros((n, n, n))
    filled = np.zeros((n, n, n), dtype=bool)
    for row_number, row in enumerate(rows, start=1):
        idx = [int(i) - 1 for i in row[:3]]
        value = float(row[3])
        if len(set(idx)) < 3:
            if value != 0.0:
                raise InvalidInputError(f"{name} entry {row_number} repeats an index")
            continue
        for perm, sign in _PERMUTATIONS:
            index = tuple(idx[p] for p in perm)
            if filled[index] and H[index] != sign * value:
                raise InvalidInputError(f"{name} entry {row_number} contradicts an earlier entry")
            H[index] = sign * value
            filled[index] = True
    return H


def _dimension(payload: Dict[str, Any]) -> int:
    n = payload.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidInputError(f"'n' must be a positive integer, got {n!r}")
    return n


def _metric(payload: Dict[str, Any], n: int) -> MetricData:
    g = np.asarray(payload.get("g", np.eye(n)), dtype=float)
    if g.shape != (n, n):
        raise InvalidInputError(f"'g' must be a {n}x{n} matrix, got shape {g.shape}")
    if not np.allclose(g, g.T):
        raise InvalidInputError("'g' must be symmetric")
    return MetricData(g)


def _delta(payload: Dict[str, Any], n: int) -> DivergenceForm:
    delta = np.asarray(payload.get("delta", np.zeros(2 * n)), dtype=float)
    if delta.shape != (2 * n,):
        raise InvalidInputError(f"'delta' must have {2 * n} entries, got {delta.size}")
    return DivergenceForm(delta)


def parse_instance(
    payload: Dict[str, Any],
    source: str = "<payload>",
    text: Optional[str] = None,
    validate: bool = True,
) -> LoadedInstance:
    """Build an instance from a decoded payload.

    Args:
        payload: Decoded JSON object
        source: Name used in error locations
        text: Raw file text, used to anchor errors to a line
        validate: Reject structure constants that violate antisymmetry or Jacobi,
            and a three-form H that is not closed

    Raises:
        InvalidInputError: On schema or validation errors, with a location
    """
    if not isinstance(payload, dict):
        raise InvalidInputError("Instance must be a JSON object", source)

    if "family" in payload:
        from gencurv.families import solution_family

        parameters = payload.get("parameters", {})
        try:
            inst = solution_family(str(payload["family"]), **parameters)
        except GencurvError as exc:
            raise InvalidInputError(str(exc), _key_line(text, "family", source)) from exc
        delta = inst.delta
        if "delta" in payload:
            delta = _delta(payload, inst.alg.n)
        return LoadedInstance(
            inst.alg, inst.metric, inst.three_form, delta, source, inst.family_id, inst.parameters
        )

    try:
        n = _dimension(payload)
    except GencurvError as exc:
        raise InvalidInputError(str(exc), _key_line(text, "n", source)) from exc

    sections = {
        "kappa": lambda: LieAlgebraData(_antisymmetric_pairs(payload.get("kappa", []), n, "kappa")),
        "g": lambda: _metric(payload, n),
        "H": lambda: ThreeFormData(_alternating(payload.get("H", []), n, "H")),
        "delta": lambda: _delta(payload, n),
    }
    built = {}
    for key, build in sections.items():
        try:
            built[key] = build()
        except (GencurvError, TypeError, ValueError) as exc:
            raise InvalidInputError(str(exc), _key_line(text, key, source)) from exc

    alg = built["kappa"]
    if validate:
        report = validate_lie_algebra(alg)
        if not report.ok:
            raise InvalidInputError(
                f"Structure constants are not a Lie algebra "
                f"(antisymmetry {report.antisymmetry:.3g}, Jacobi {report.jacobi:.3g})",
                _key_line(text, "kappa", source),
            )
        closedness = built["H"].closedness(alg)
        if not built["H"].is_closed(alg):
            raise InvalidInputError(
                f"Three-form H is not closed (max |dH| = {closedness:.3g})", _key_line(text, "H", source)
            )
    logger.debug("Loaded instance n=%d from %s", n, source)
    return LoadedInstance(alg, built["g"], built["H"], built["delta"], source)


def load_instance(name_or_path: Union[str, Path], validate: bool = True) -> LoadedInstance:
    """Load a bundled instance by name or an instance file by path.

    Raises:
        FileNotFoundError: If neither a bundled instance nor a file matches
        InvalidInputError: If the file does not parse or validate
    """
    path = Path(name_or_path)
    if not path.exists():
        bundled = get_data_path() / f"{name_or_path}.json"
        if not bundled.exists():
            raise FileNotFoundError(
                f"Instance '{name_or_path}' not found. "
                f"Available instances: {', '.join(list_available_instances())}"
            )
        path = bundled
    text = path.read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"Invalid JSON: {exc.msg}", f"{path}:{exc.lineno}") from exc
    return parse_instance(payload, str(path), text, validate)


def instance_to_dict(
    alg: LieAlgebraData,
    metric: MetricData,
    three_form: Optional[ThreeFormData] = None,
    delta: Optional[DivergenceForm] = None,
    tol: float = 0.0,
) -> Dict[str, Any]:
    """Serialise to the instance file schema (a < b for kappa, a < b < c for H)."""
    n = alg.n
    kappa = [row for row in tensor_to_entries(alg.kappa, tol) if row[0] < row[1]]
    H = three_form.H if three_form is not None else np.zeros((n, n, n))
    payload = {
        "n": n,
        "kappa": kappa,
        "g": metric.g.tolist(),
        "H": [row for row in tensor_to_entries(H, tol) if row[0] < row[1] < row[2]],
        "delta": (delta.delta if delta is not None else np.zeros(2 * n)).tolist(),
    }
    return payload
