"""
Experiments package for qdistgen.

This package runs training sweeps, persists their records, checks gradients
against finite differences and emits plot-ready data.
"""

from qdistgen.experiments.gradcheck import CircuitCheck, GradcheckReport, gradcheck
from qdistgen.experiments.plotdata import PlotKind, emit_plotdata
from qdistgen.experiments.records import (
    RecordSink,
    ResultRecord,
    load_records,
    read_trace,
    sort_records,
    write_trace,
)
from qdistgen.experiments.sweep import (
    ExperimentConfig,
    check_family_orderings,
    plan_jobs,
    resolve_circuit,
    run_single,
    run_sweep,
    summarize,
    target_for,
)

__all__ = [
    "CircuitCheck",
    "ExperimentConfig",
    "GradcheckReport",
    "PlotKind",
    "RecordSink",
    "ResultRecord",
    "check_family_orderings",
    "emit_plotdata",
    "gradcheck",
    "load_records",
    "plan_jobs",
    "read_trace",
    "resolve_circuit",
    "run_single",
    "run_sweep",
    "sort_records",
    "summarize",
    "target_for",
    "write_trace",
]
