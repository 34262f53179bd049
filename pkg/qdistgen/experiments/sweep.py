"""
Experiment sweeps over circuits, targets and seeds.

A sweep trains every (circuit, target, seed) combination of an
ExperimentConfig, appends one ResultRecord per finished run to
``<output_dir>/records.ndjson`` and finally writes a per-(circuit, target)
summary. Runs may execute in a process pool; records are always returned and
summarized in (circuit, target, seed) order, so serial and parallel sweeps
produce the same artifacts.
"""

import logging
import traceback
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from qdistgen.circuits import CircuitTemplate, Family, catalog_get, load_template
from qdistgen.config import (
    DEFAULT_BINOMIAL_P,
    DEFAULT_POISSON_LAMBDA,
    RECORDS_FILENAME,
    get_default_config,
    merge_config,
)
from qdistgen.costs import TargetKind, TargetSpec, target_pmf
from qdistgen.errors import ConfigError, NumericalError, QDistGenError
from qdistgen.experiments.records import (
    ERROR_KIND_CONFIG,
    ERROR_KIND_NUMERICAL,
    ERROR_KIND_UNEXPECTED,
    STATUS_FAILED,
    RecordSink,
    ResultRecord,
    circuit_sort_key,
    sort_records,
    write_trace,
)
from qdistgen.optimizer import TrainConfig, TrainTrace, train

logger = logging.getLogger(__name__)

SUMMARY_FILENAME = "summary.csv"
# Medians closer than this count as a tie, which resolves in favour of the claim
ORDERING_TIE_TOLERANCE = 1e-6
# Keys a target entry may carry; "lam" is accepted as a spelling of "lambda"
TARGET_ENTRY_KEYS = frozenset({"kind", "p", "lambda", "n_qubits"})

CircuitRef = Union[int, str]


@dataclass
class ExperimentConfig:
    """
    A full sweep description.

    Attributes:
        circuits: Catalog ids and/or template file paths
        targets: Target entries without a register size, e.g.
            ``{"kind": "binomial", "p": 0.1}``; each is instantiated on the
            register size of the circuit it is paired with
        train: Optimizer settings shared by every run
        seeds: Initialization seeds; each run uses ``train.with_seed(seed)``
        output_dir: Directory receiving records, traces and summaries
        workers: Size of the process pool (1 runs in-process)
    """

    circuits: List[CircuitRef]
    targets: List[Dict[str, Any]]
    train: TrainConfig = field(default_factory=TrainConfig)
    seeds: List[int] = field(default_factory=lambda: [0])
    output_dir: Path = Path("results")
    workers: int = 1

    def __post_init__(self):
        self.output_dir = Path(self.output_dir)
        if not self.circuits:
            raise ConfigError("experiment needs at least one circuit")
        if not self.targets:
            raise ConfigError("experiment needs at least one target")
        if not self.seeds:
            raise ConfigError("experiment needs at least one seed")
        for seed in self.seeds:
            if not isinstance(seed, (int, np.integer)) or seed < 0:
                raise ConfigError(f"seeds must be unsigned integers, got {seed!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError(f"workers must be a positive integer, got {self.workers!r}")
        self.targets = [_normalize_target_entry(t) for t in self.targets]

    @classmethod
    def from_dict(cls, data: Optional[Mapping[str, Any]] = None) -> "ExperimentConfig":
        """
        Build a config from a nested dictionary merged over the defaults.

        Args:
            data: Sections ``training``, ``targets`` and ``experiment`` as in
                get_default_config(); missing values fall back to defaults

        Returns:
            The validated experiment configuration
        """
        merged = merge_config(get_default_config(), data)
        experiment = merged["experiment"]
        defaults = merged["targets"]

        targets = []
        for entry in experiment["targets"]:
            entry = _normalize_target_entry(entry)
            if entry["kind"] == TargetKind.BINOMIAL.value:
                entry.setdefault("p", defaults.get("binomial_p", DEFAULT_BINOMIAL_P))
            if entry["kind"] == TargetKind.POISSON.value:
                entry.setdefault("lambda", defaults.get("poisson_lambda", DEFAULT_POISSON_LAMBDA))
            targets.append(entry)

        return cls(
            circuits=list(experiment["circuits"]),
            targets=targets,
            train=TrainConfig.from_dict(merged["training"]),
            seeds=list(experiment["seeds"]),
            output_dir=Path(experiment["output_dir"]),
            workers=int(experiment["workers"]),
        )

    def resolve_circuits(self) -> List[CircuitTemplate]:
        """Load every referenced template, failing before any run starts."""
        return [resolve_circuit(ref) for ref in self.circuits]


def _normalize_target_entry(entry: Union[str, Mapping[str, Any]]) -> Dict[str, Any]:
    if isinstance(entry, TargetSpec):
        return entry.to_dict()
    if isinstance(entry, str):
        entry = {"kind": entry}
    if not isinstance(entry, Mapping) or "kind" not in entry:
        raise ConfigError(f"invalid target entry {entry!r}")
    out = dict(entry)
    kind = out["kind"]
    out["kind"] = kind.value if isinstance(kind, TargetKind) else str(kind).lower()
    if out["kind"] not in {k.value for k in TargetKind}:
        raise ConfigError(f"Unknown target {entry['kind']!r}")
    if "lam" in out:
        lam = out.pop("lam")
        if "lambda" in out and out["lambda"] != lam:
            raise ConfigError(f"target entry {dict(entry)!r} gives both lam and lambda")
        out["lambda"] = lam
    unknown = sorted(set(out) - TARGET_ENTRY_KEYS)
    if unknown:
        raise ConfigError(
            f"target entry {dict(entry)!r} has unknown key(s) {', '.join(unknown)} "
            f"(allowed: {', '.join(sorted(TARGET_ENTRY_KEYS))})"
        )
    return out


def resolve_circuit(ref: CircuitRef) -> CircuitTemplate:
    """A catalog id (int or numeric string) or a path to a template file."""
    if isinstance(ref, CircuitTemplate):
        return ref
    if isinstance(ref, int) or (isinstance(ref, str) and ref.strip().isdigit()):
        return catalog_get(ref)
    path = Path(ref)
    if not path.exists():
        raise ConfigError(f"circuit {ref!r} is neither a catalog id nor an existing file")
    return load_template(path)


def target_for(template: CircuitTemplate, entry: Mapping[str, Any]) -> TargetSpec:
    """Instantiate a target entry on the template's register size."""
    declared = entry.get("n_qubits")
    if declared is not None and declared != template.n_qubits:
        raise ConfigError(
            f"target {entry['kind']} is declared for {declared} qubits but circuit "
            f"{template.id} has {template.n_qubits}"
        )
    return TargetSpec.from_dict(entry, template.n_qubits)


def run_single(
    template: CircuitTemplate,
    target: TargetSpec,
    train_config: TrainConfig,
    seed: int,
) -> Tuple[ResultRecord, TrainTrace]:
    """
    Train one circuit towards one target from one seed.

    Returns:
        The result record (without a trace path) and the full training trace
    """
    config = train_config.with_seed(seed)
    trace = train(template, target_pmf(target), config)
    record = ResultRecord(
        circuit_id=template.id,
        family=template.family.value,
        n_qubits=template.n_qubits,
        target=target.to_dict(),
        target_label=target.label,
        seed=int(seed),
        cost_kind=config.cost.value,
        final_cost=trace.final_cost,
        initial_cost=trace.cost_history[0],
        iterations_run=trace.iterations_run,
        converged_at=trace.converged_at,
        wall_time=trace.wall_time,
        final_dist=trace.final_dist.tolist(),
        final_params=trace.final_params.tolist(),
    )
    return record, trace


def _execute_job(job: Tuple[CircuitTemplate, TargetSpec, TrainConfig, int]):
    """Worker entry point; converts a failing run into a failed record."""
    template, target, train_config, seed = job
    try:
        record, trace = run_single(template, target, train_config, seed)
        return record, trace.cost_history
    except NumericalError as e:
        error_kind = ERROR_KIND_NUMERICAL
        exc = e
    except QDistGenError as e:
        error_kind = ERROR_KIND_CONFIG
        exc = e
    except Exception as e:
        logger.warning(
            f"Unexpected error in run c{template.id} {target.label} seed {seed}:\n"
            f"{traceback.format_exc()}"
        )
        error_kind = ERROR_KIND_UNEXPECTED
        exc = e
    record = ResultRecord(
        circuit_id=template.id,
        family=template.family.value,
        n_qubits=template.n_qubits,
        target=target.to_dict(),
        target_label=target.label,
        seed=int(seed),
        cost_kind=train_config.cost.value,
        status=STATUS_FAILED,
        error=f"{type(exc).__name__}: {exc}",
        error_kind=error_kind,
    )
    return record, None


def plan_jobs(config: ExperimentConfig) -> List[Tuple[CircuitTemplate, TargetSpec, TrainConfig, int]]:
    """Every (circuit, target, seed) job, validated and in sorted order."""
    jobs = []
    for template in config.resolve_circuits():
        for entry in config.targets:
            target = target_for(template, entry)
            for seed in config.seeds:
                jobs.append((template, target, config.train, int(seed)))
    jobs.sort(key=lambda j: (circuit_sort_key(j[0].id), j[1].label, j[3]))
    return jobs


def run_sweep(config: ExperimentConfig) -> List[ResultRecord]:
    """
    Run a full sweep and persist its results.

    Configuration errors surface before any run starts. A run that raises is
    logged and recorded with status ``failed`` and an ``error_kind``; the
    sweep carries on.

    Args:
        config: The experiment configuration

    Returns:
        All records, sorted by (circuit, target, seed)
    """
    jobs = plan_jobs(config)
    output_dir = config.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    logger.info(
        f"Starting sweep: {len(jobs)} runs ({len(config.circuits)} circuits x "
        f"{len(config.targets)} targets x {len(config.seeds)} seeds), "
        f"{config.workers} worker(s), output in {output_dir}"
    )

    records: List[ResultRecord] = []

    def finish(record: ResultRecord, history: Optional[List[float]]) -> None:
        if history is not None:
            record.trace_path = write_trace(output_dir, record, history)
        else:
            logger.warning(f"Run {record.key} failed: {record.error}")
        sink.append(record)
        records.append(record)

    with RecordSink(output_dir / RECORDS_FILENAME, truncate=True) as sink:
        if config.workers == 1:
            for job in jobs:
                finish(*_execute_job(job))
        else:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                futures = [pool.submit(_execute_job, job) for job in jobs]
                for future in as_completed(futures):
                    finish(*future.result())

    records = sort_records(records)
    summary = summarize(records)
    if not summary.empty:
        summary.to_csv(output_dir / SUMMARY_FILENAME, index=False)

    failed = sum(1 for r in records if not r.ok)
    logger.info(f"Sweep finished: {len(records) - failed} ok, {failed} failed")
    return records


def summarize(records: Sequence[ResultRecord]) -> pd.DataFrame:
    """
    Median, minimum and maximum final cost per (circuit, target) over seeds.

    The result does not depend on the order of ``records``.
    """
    rows = [
        {
            "circuit_id": r.circuit_id,
            "family": r.family,
            "n_qubits": r.n_qubits,
            "target": r.target_label,
            "target_kind": r.target["kind"],
            "final_cost": r.final_cost,
        }
        for r in records
        if r.ok
    ]
    columns = [
        "circuit_id", "family", "n_qubits", "target", "target_kind",
        "median_final_cost", "min_final_cost", "max_final_cost", "n_seeds",
    ]
    if not rows:
        return pd.DataFrame(columns=columns)

    frame = pd.DataFrame(rows)
    summary = (
        frame.groupby(["circuit_id", "family", "n_qubits", "target", "target_kind"])["final_cost"]
        .agg(
            median_final_cost="median",
            min_final_cost="min",
            max_final_cost="max",
            n_seeds="count",
        )
        .reset_index()
    )
    summary["_order"] = summary["circuit_id"].map(circuit_sort_key)
    summary = summary.sort_values(["_order", "target"]).drop(columns="_order")
    return summary.reset_index(drop=True)[columns]


def check_family_orderings(summary: pd.DataFrame, n_qubits: int) -> List[str]:
    """
    Check the architecture-family orderings on one register size.

    Claims, on median final cost:
      * normal target: every PE circuit beats every P circuit;
      * binomial and Poisson targets: every P circuit beats every PE circuit;
      * every PEP circuit is at least as good as the best P/PE circuit on
        every target;
      * every HZ circuit is worse than the best PEP circuit on the normal,
        binomial and Poisson targets.
    Families missing from the summary make their claims vacuous.

    Args:
        summary: Output of summarize()
        n_qubits: Register size to check

    Returns:
        Human-readable descriptions of the violated claims (empty if none)
    """
    tol = ORDERING_TIE_TOLERANCE
    frame = summary[summary["n_qubits"] == n_qubits]
    violations: List[str] = []

    def medians(family: Family, kind: TargetKind) -> Dict[str, float]:
        rows = frame[(frame["family"] == family.value) & (frame["target_kind"] == kind.value)]
        return dict(zip(rows["circuit_id"], rows["median_final_cost"]))

    def beats(winners: Dict[str, float], losers: Dict[str, float], label: str) -> None:
        for w_id, w in winners.items():
            for l_id, lose in losers.items():
                if not w <= lose + tol:
                    violations.append(
                        f"{label}: circuit {w_id} ({w:.3e}) does not beat circuit {l_id} ({lose:.3e})"
                    )

    beats(medians(Family.PE, TargetKind.NORMAL), medians(Family.P, TargetKind.NORMAL),
          f"{n_qubits}q normal, PE over P")
    for kind in (TargetKind.BINOMIAL, TargetKind.POISSON):
        beats(medians(Family.P, kind), medians(Family.PE, kind),
              f"{n_qubits}q {kind.value}, P over PE")

    for kind in TargetKind:
        baseline = {**medians(Family.P, kind), **medians(Family.PE, kind)}
        pep = medians(Family.PEP, kind)
        if baseline and pep:
            best_id = min(baseline, key=baseline.get)
            beats(pep, {best_id: baseline[best_id]}, f"{n_qubits}q {kind.value}, PEP over best P/PE")

    for kind in (TargetKind.NORMAL, TargetKind.BINOMIAL, TargetKind.POISSON):
        pep = medians(Family.PEP, kind)
        hz = medians(Family.HZ, kind)
        if pep and hz:
            best_id = min(pep, key=pep.get)
            for hz_id, value in hz.items():
                if not value > pep[best_id] - tol:
                    violations.append(
                        f"{n_qubits}q {kind.value}, HZ below PEP: circuit {hz_id} "
                        f"({value:.3e}) is not worse than circuit {best_id} ({pep[best_id]:.3e})"
                    )

    return violations
