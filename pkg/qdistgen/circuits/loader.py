"""
Ansatz-definition files.

Templates are stored as JSON documents of the form::

    {
      "id": "8",
      "n_qubits": 4,
      "family": "PEP",
      "description": "...",
      "ops": [
        {"kind": "RY", "target": 0, "slot": 0},
        {"kind": "CNOT", "control": 0, "target": 1},
        {"kind": "RX", "target": 2, "angle": 1.5707963267948966}
      ]
    }

``family`` and ``description`` are optional; a given family must agree with
the structural classification. See docs/ansatz_schema.md.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

from qdistgen.circuits.template import CircuitTemplate
from qdistgen.errors import GateError, TemplateError
from qdistgen.statevector import FixedAngle, GateKind, GateOp, ParamSlot

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

_TOP_LEVEL_KEYS = {"id", "n_qubits", "family", "description", "ops", "schema_version"}
_OP_KEYS = {"kind", "target", "control", "slot", "angle"}

Document = Union[str, Path, Mapping[str, Any]]


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _read_document(document: Document) -> Dict[str, Any]:
    if isinstance(document, Mapping):
        return dict(document)

    text = None
    source = "<string>"
    if isinstance(document, Path) or (
        isinstance(document, str) and not document.lstrip().startswith("{")
    ):
        path = Path(document)
        source = str(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise TemplateError(f"cannot read template file: {e}", context=source)
    else:
        text = document

    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise TemplateError(
            f"invalid JSON: {e.msg}", context=f"{source} line {e.lineno} column {e.colno}"
        )
    if not isinstance(data, dict):
        raise TemplateError("template document must be a JSON object", context=source)
    if "id" not in data and source != "<string>":
        data["id"] = Path(source).stem
    return data


def _parse_op(raw: Any, index: int) -> GateOp:
    where = f"ops[{index}]"
    if not isinstance(raw, Mapping):
        raise TemplateError("each op must be an object", context=where)

    unknown = set(raw) - _OP_KEYS
    if unknown:
        raise TemplateError(f"unknown fields {sorted(unknown)}", context=where)

    if "kind" not in raw:
        raise TemplateError("missing field 'kind'", context=where)
    try:
        kind = GateKind.parse(raw["kind"])
    except GateError as e:
        raise TemplateError(str(e), context=f"{where}.kind")

    for key in ("target", "control", "slot"):
        if key in raw and not _is_int(raw[key]):
            raise TemplateError(f"must be an integer, got {raw[key]!r}", context=f"{where}.{key}")
    if "target" not in raw:
        raise TemplateError("missing field 'target'", context=where)
    if "angle" in raw and not _is_number(raw["angle"]):
        raise TemplateError(f"must be a number, got {raw['angle']!r}", context=f"{where}.angle")
    if "slot" in raw and "angle" in raw:
        raise TemplateError("give either 'slot' or 'angle', not both", context=where)

    angle_source = None
    if "slot" in raw:
        angle_source = ParamSlot(raw["slot"])
    elif "angle" in raw:
        angle_source = FixedAngle(float(raw["angle"]))

    try:
        return GateOp(kind, raw["target"], raw.get("control"), angle_source)
    except GateError as e:
        raise TemplateError(str(e), context=where)


def load_template(document: Document) -> CircuitTemplate:
    """
    Parse and validate an ansatz definition.

    Args:
        document: A file path, a JSON string, or an already-parsed mapping

    Returns:
        The validated template

    Raises:
        TemplateError: On any schema or invariant violation; the message
            names the offending field
    """
    data = _read_document(document)

    unknown = set(data) - _TOP_LEVEL_KEYS
    if unknown:
        raise TemplateError(f"unknown fields {sorted(unknown)}", context="document")
    if "n_qubits" not in data:
        raise TemplateError("missing field 'n_qubits'", context="document")
    if not _is_int(data["n_qubits"]):
        raise TemplateError(f"must be an integer, got {data['n_qubits']!r}", context="n_qubits")
    if not isinstance(data.get("ops"), list):
        raise TemplateError("missing or non-list field 'ops'", context="document")

    ops = [_parse_op(raw, i) for i, raw in enumerate(data["ops"])]
    template = CircuitTemplate(
        id=str(data.get("id", "custom")),
        n_qubits=data["n_qubits"],
        ops=tuple(ops),
        family=data.get("family"),
        description=str(data.get("description", "")),
    )

    logger.info(f"Loaded template {template.summary()}")
    return template


def _dump_op(op: GateOp) -> Dict[str, Any]:
    out: Dict[str, Any] = {"kind": op.kind.value}
    if op.control is not None:
        out["control"] = op.control
    out["target"] = op.target
    if isinstance(op.angle_source, ParamSlot):
        out["slot"] = op.angle_source.index
    elif isinstance(op.angle_source, FixedAngle):
        out["angle"] = op.angle_source.radians
    return out


def dump_template(template: CircuitTemplate) -> Dict[str, Any]:
    """Serialize a template to a JSON-compatible dictionary."""
    return {
        "schema_version": SCHEMA_VERSION,
        "id": template.id,
        "n_qubits": template.n_qubits,
        "family": template.family.value,
        "description": template.description,
        "ops": [_dump_op(op) for op in template.ops],
    }


def dumps_template(template: CircuitTemplate, indent: int = 2) -> str:
    return json.dumps(dump_template(template), indent=indent)


def save_templates(templates: List[CircuitTemplate], output_dir: Union[str, Path]) -> List[Path]:
    """
    Write one ``circuit_<id>.json`` file per template.

    Returns:
        The written paths
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for template in templates:
        path = output_dir / f"circuit_{template.id}.json"
        path.write_text(dumps_template(template) + "\n", encoding="utf-8")
        paths.append(path)
    logger.info(f"Wrote {len(paths)} template files to {output_dir}")
    return paths
