"""
Result records and their on-disk form.

Records are appended to a newline-delimited JSON file, one object per
finished run, and flushed to disk immediately so an interrupted sweep keeps
every run that completed. Cost histories are stored separately as
``traces/<run key>.json`` next to the records file.
"""

import json
import logging
import os
import re
import threading
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from qdistgen.errors import ConfigError

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_FAILED = "failed"

# Failure categories stored on failed records
ERROR_KIND_NUMERICAL = "numerical"
ERROR_KIND_CONFIG = "config"
ERROR_KIND_UNEXPECTED = "unexpected"

# Fields that legitimately differ between identical reruns
NONDETERMINISTIC_FIELDS = ("wall_time",)


def circuit_sort_key(circuit_id: str) -> Tuple[int, Union[int, str]]:
    """Catalog numbers sort numerically, file-based templates after them by name."""
    return (0, int(circuit_id)) if str(circuit_id).isdigit() else (1, str(circuit_id))


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9.]+", "-", text).strip("-")


@dataclass
class ResultRecord:
    """
    Outcome of one (circuit, target, seed) training run.

    ``final_cost`` equals the last entry of the run's cost history, which is
    stored in the file named by ``trace_path`` (relative to the records file).
    """

    circuit_id: str
    family: str
    n_qubits: int
    target: Dict[str, Any]
    target_label: str
    seed: int
    cost_kind: str
    final_cost: Optional[float] = None
    initial_cost: Optional[float] = None
    iterations_run: int = 0
    converged_at: Optional[int] = None
    wall_time: float = 0.0
    final_dist: List[float] = field(default_factory=list)
    final_params: List[float] = field(default_factory=list)
    trace_path: Optional[str] = None
    status: str = STATUS_OK
    error: Optional[str] = None
    error_kind: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    @property
    def failed_numerically(self) -> bool:
        return not self.ok and self.error_kind == ERROR_KIND_NUMERICAL

    @property
    def key(self) -> str:
        """Stable run identifier, also used for per-run file names."""
        return f"c{_slug(self.circuit_id)}_{_slug(self.target_label)}_s{self.seed}"

    def sort_key(self) -> tuple:
        return (circuit_sort_key(self.circuit_id), self.target_label, self.seed)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ResultRecord":
        return cls(**data)

    def deterministic_view(self) -> Dict[str, Any]:
        """The record without fields that vary between identical reruns."""
        data = self.to_dict()
        for name in NONDETERMINISTIC_FIELDS:
            data.pop(name, None)
        return data


def sort_records(records: Sequence[ResultRecord]) -> List[ResultRecord]:
    return sorted(records, key=lambda r: r.sort_key())


class RecordSink:
    """
    Append-only NDJSON writer shared by concurrent runs.

    Each append is serialized under a lock, flushed and fsynced before the
    call returns.
    """

    def __init__(self, path: Union[str, Path], truncate: bool = False):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._file = open(self.path, "w" if truncate else "a", encoding="utf-8")
        self.count = 0
        logger.info(f"Writing records to {self.path}")

    def append(self, record: ResultRecord) -> None:
        line = json.dumps(record.to_dict(), sort_keys=True, allow_nan=True)
        with self._lock:
            self._file.write(line + "\n")
            self._file.flush()
            os.fsync(self._file.fileno())
            self.count += 1

    def close(self) -> None:
        with self._lock:
            if not self._file.closed:
                self._file.close()

    def __enter__(self) -> "RecordSink":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


def load_records(path: Union[str, Path]) -> List[ResultRecord]:
    """
    Read records from an NDJSON file.

    A malformed final line (an append cut short by a crash) is skipped with a
    warning; malformed lines elsewhere are errors.
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = [line for line in f.read().splitlines() if line.strip()]
    except FileNotFoundError:
        raise ConfigError(f"Records file not found: {path}")

    records = []
    for i, line in enumerate(lines):
        try:
            records.append(ResultRecord.from_dict(json.loads(line)))
        except (json.JSONDecodeError, TypeError) as e:
            if i == len(lines) - 1:
                logger.warning(f"Skipping truncated last record in {path}: {e}")
                continue
            raise ConfigError(f"{path} line {i + 1}: invalid record: {e}")
    logger.info(f"Loaded {len(records)} records from {path}")
    return records


def write_trace(
    root: Union[str, Path], record: ResultRecord, cost_history: Sequence[float]
) -> str:
    """Store a run's cost history and return its path relative to ``root``."""
    relative = Path("traces") / f"{record.key}.json"
    target = Path(root) / relative
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8") as f:
        json.dump({"key": record.key, "cost_history": list(cost_history)}, f)
    return relative.as_posix()


def read_trace(root: Union[str, Path], record: ResultRecord) -> List[float]:
    if not record.trace_path:
        raise ConfigError(f"record {record.key} has no stored trace")
    path = Path(root) / record.trace_path
    try:
        with open(path, "r", encoding="utf-8") as f:
            history = json.load(f)["cost_history"]
    except FileNotFoundError:
        raise ConfigError(f"Trace file not found: {path}")
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise ConfigError(f"{path}: invalid trace file: {e}")
    if record.final_cost is not None and history[-1] != record.final_cost:
        logger.warning(f"Trace of {record.key} does not end at the recorded final cost")
    return history
