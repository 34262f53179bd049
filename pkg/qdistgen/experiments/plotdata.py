"""
Plot-ready CSV data from sweep records.

Only data is emitted; any plotting tool can read the files.

  histogram  histogram_<key>.csv   outcome, model, target (one file per run)
  accuracy   accuracy.csv          circuit_id, family, n_qubits, target, median_final_cost
  trace      trace_<key>.csv       iteration, cost (one file per run)
"""

import logging
from enum import Enum
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd

from qdistgen.costs import TargetSpec, target_pmf
from qdistgen.errors import ConfigError
from qdistgen.experiments.records import ResultRecord, read_trace, sort_records
from qdistgen.experiments.sweep import summarize

logger = logging.getLogger(__name__)


class PlotKind(str, Enum):
    HISTOGRAM = "histogram"
    ACCURACY = "accuracy"
    TRACE = "trace"

    @classmethod
    def parse(cls, value: Union[str, "PlotKind"]) -> "PlotKind":
        if isinstance(value, PlotKind):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(
                f"Unknown plot data kind: {value!r} (expected histogram, accuracy or trace)"
            )


def _histogram(record: ResultRecord) -> pd.DataFrame:
    target = target_pmf(TargetSpec.from_dict(record.target, record.n_qubits))
    return pd.DataFrame(
        {
            "outcome": range(len(record.final_dist)),
            "model": record.final_dist,
            "target": target,
        }
    )


def emit_plotdata(
    records: Sequence[ResultRecord],
    kind: Union[str, PlotKind],
    output_dir: Union[str, Path],
    trace_root: Optional[Union[str, Path]] = None,
) -> List[Path]:
    """
    Write plot data for a set of records.

    Failed runs are skipped.

    Args:
        records: Records from a sweep or load_records()
        kind: histogram, accuracy or trace
        output_dir: Directory receiving the CSV files
        trace_root: Directory the records' trace paths are relative to;
            defaults to ``output_dir``

    Returns:
        Paths of the written files

    Raises:
        ConfigError: If there are no successful records
    """
    kind = PlotKind.parse(kind)
    ok = sort_records([r for r in records if r.ok])
    if not ok:
        raise ConfigError("no successful records to emit plot data for")

    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    trace_root = Path(trace_root) if trace_root is not None else output_dir
    written: List[Path] = []

    if kind is PlotKind.ACCURACY:
        summary = summarize(ok)
        frame = summary[["circuit_id", "family", "n_qubits", "target", "median_final_cost"]]
        path = output_dir / "accuracy.csv"
        frame.to_csv(path, index=False)
        written.append(path)

    elif kind is PlotKind.HISTOGRAM:
        for record in ok:
            path = output_dir / f"histogram_{record.key}.csv"
            _histogram(record).to_csv(path, index=False, float_format="%.17g")
            written.append(path)

    else:
        for record in ok:
            if not record.trace_path:
                logger.warning(f"Record {record.key} has no trace, skipping")
                continue
            history = read_trace(trace_root, record)
            frame = pd.DataFrame({"iteration": range(len(history)), "cost": history})
            path = output_dir / f"trace_{record.key}.csv"
            frame.to_csv(path, index=False, float_format="%.17g")
            written.append(path)

    logger.info(f"Wrote {len(written)} {kind.value} file(s) to {output_dir}")
    return written
