"""
Tests for experiment sweeps.
"""

import json
import os

import pandas as pd
import pytest

from qdistgen.circuits import catalog_get, dumps_template
from qdistgen.config import RECORDS_FILENAME
from qdistgen.costs import TargetSpec
from qdistgen.errors import ConfigError, DomainError
from qdistgen.experiments import (
    ExperimentConfig,
    ResultRecord,
    check_family_orderings,
    load_records,
    run_single,
    run_sweep,
    summarize,
    target_for,
)
from qdistgen.experiments import sweep
from qdistgen.experiments.sweep import SUMMARY_FILENAME


class TestExperimentConfig:
    """Tests for ExperimentConfig."""

    def test_defaults(self):
        config = ExperimentConfig.from_dict({})
        assert config.circuits == list(range(1, 23))
        assert [t["kind"] for t in config.targets] == ["uniform", "normal", "binomial", "poisson"]
        assert config.targets[2]["p"] == 0.1
        assert config.targets[3]["lambda"] == 1.0
        assert config.seeds == [0, 1, 2, 3, 4]
        assert config.train.iterations == 1000

    def test_overrides(self, quick_experiment_dict):
        quick_experiment_dict["targets"] = {"binomial_p": 0.3}
        config = ExperimentConfig.from_dict(quick_experiment_dict)
        assert config.circuits == [19, 22]
        assert config.targets[1] == {"kind": "binomial", "p": 0.3}
        assert config.train.iterations == 15

    def test_lam_spelling_reaches_the_runs(self, quick_experiment_dict):
        quick_experiment_dict["experiment"]["targets"] = [{"kind": "poisson", "lam": 2.5}]
        config = ExperimentConfig.from_dict(quick_experiment_dict)
        assert config.targets == [{"kind": "poisson", "lambda": 2.5}]
        jobs = sweep.plan_jobs(config)
        assert {job[1].lam for job in jobs} == {2.5}

    @pytest.mark.parametrize(
        "entry",
        [
            {"kind": "poisson", "rate": 2.0},
            {"kind": "binomial", "prob": 0.3},
            {"kind": "poisson", "lam": 2.0, "lambda": 3.0},
        ],
    )
    def test_bad_target_keys_rejected(self, quick_experiment_dict, entry):
        quick_experiment_dict["experiment"]["targets"] = [entry]
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(quick_experiment_dict)

    @pytest.mark.parametrize(
        "experiment",
        [
            {"circuits": []},
            {"seeds": [-1]},
            {"seeds": []},
            {"targets": ["gaussian"]},
            {"workers": 0},
        ],
    )
    def test_invalid(self, experiment):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"experiment": experiment})

    def test_unknown_circuit_fails_before_running(self, temp_test_dir):
        config = ExperimentConfig.from_dict(
            {"experiment": {"circuits": [8, 99], "output_dir": temp_test_dir}}
        )
        with pytest.raises(ConfigError):
            run_sweep(config)
        assert not os.path.exists(os.path.join(temp_test_dir, RECORDS_FILENAME))

    def test_template_file_circuit(self, temp_test_dir):
        path = os.path.join(temp_test_dir, "mine.json")
        with open(path, "w") as f:
            f.write(dumps_template(catalog_get(20)))
        config = ExperimentConfig.from_dict({"experiment": {"circuits": [path]}})
        (template,) = config.resolve_circuits()
        assert template.ops == catalog_get(20).ops


def test_target_for_uses_circuit_size():
    spec = target_for(catalog_get(12), {"kind": "poisson", "lambda": 2.0})
    assert spec == TargetSpec.from_name("poisson", 3, lam=2.0)


def test_target_for_rejects_size_mismatch():
    with pytest.raises(ConfigError):
        target_for(catalog_get(12), {"kind": "normal", "n_qubits": 4})


def test_run_single(quick_train_config):
    template = catalog_get(22)
    record, trace = run_single(template, TargetSpec.from_name("normal", 2), quick_train_config, seed=4)
    assert record.ok
    assert record.circuit_id == "22"
    assert record.family == "PE"
    assert record.seed == 4
    assert record.final_cost == trace.cost_history[-1]
    assert record.initial_cost == trace.cost_history[0]
    assert record.iterations_run == 20
    assert len(record.final_dist) == 4


class TestRunSweep:
    """Tests for run_sweep."""

    def test_one_record_per_combination(self, quick_experiment_dict):
        config = ExperimentConfig.from_dict(quick_experiment_dict)
        records = run_sweep(config)
        assert len(records) == 2 * 2 * 2
        assert all(r.ok for r in records)
        keys = [(r.circuit_id, r.target_label, r.seed) for r in records]
        assert keys == sorted(keys, key=lambda k: (int(k[0]), k[1], k[2]))

    def test_artifacts_written(self, quick_experiment_dict):
        config = ExperimentConfig.from_dict(quick_experiment_dict)
        records = run_sweep(config)
        out = config.output_dir
        on_disk = load_records(out / RECORDS_FILENAME)
        assert sorted(r.key for r in on_disk) == sorted(r.key for r in records)
        for record in records:
            with open(out / record.trace_path) as f:
                history = json.load(f)["cost_history"]
            assert history[-1] == record.final_cost
        summary = pd.read_csv(out / SUMMARY_FILENAME)
        assert len(summary) == 4

    def test_rerun_is_deterministic(self, quick_experiment_dict):
        config = ExperimentConfig.from_dict(quick_experiment_dict)
        first = [r.deterministic_view() for r in run_sweep(config)]
        second = [r.deterministic_view() for r in run_sweep(config)]
        assert first == second

    def test_parallel_matches_serial(self, quick_experiment_dict):
        serial = [r.deterministic_view() for r in run_sweep(ExperimentConfig.from_dict(quick_experiment_dict))]
        quick_experiment_dict["experiment"]["workers"] = 2
        parallel = [r.deterministic_view() for r in run_sweep(ExperimentConfig.from_dict(quick_experiment_dict))]
        assert serial == parallel

    def test_failed_run_is_recorded(self, quick_experiment_dict, monkeypatch):
        real_run_single = sweep.run_single

        def flaky(template, target, train_config, seed):
            if seed == 1:
                raise DomainError("KL undefined: model has zero mass where target has mass")
            return real_run_single(template, target, train_config, seed)

        monkeypatch.setattr(sweep, "run_single", flaky)
        config = ExperimentConfig.from_dict(quick_experiment_dict)
        records = run_sweep(config)
        assert len(records) == 8
        failed = [r for r in records if not r.ok]
        assert [r.seed for r in failed] == [1, 1, 1, 1]
        assert all(r.error.startswith("DomainError: ") for r in failed)
        assert all(r.error_kind == "numerical" for r in failed)
        assert all(r.final_cost is None and r.trace_path is None for r in failed)
        assert len(load_records(config.output_dir / RECORDS_FILENAME)) == 8
        summary = summarize(records)
        assert summary["n_seeds"].tolist() == [1, 1, 1, 1]

    def test_unexpected_error_is_recorded(self, quick_experiment_dict, monkeypatch):
        real_run_single = sweep.run_single

        def broken(template, target, train_config, seed):
            if template.id == "22":
                raise RuntimeError("worker blew up")
            return real_run_single(template, target, train_config, seed)

        monkeypatch.setattr(sweep, "run_single", broken)
        records = run_sweep(ExperimentConfig.from_dict(quick_experiment_dict))
        assert len(records) == 8
        failed = [r for r in records if not r.ok]
        assert {r.circuit_id for r in failed} == {"22"}
        assert len(failed) == 4
        assert all(r.error == "RuntimeError: worker blew up" for r in failed)
        assert all(r.error_kind == "unexpected" and not r.failed_numerically for r in failed)
        assert all(r.ok for r in records if r.circuit_id == "19")


def _records_for_summary():
    def make(cid, family, label, seed, value, n_qubits=4):
        return ResultRecord(
            circuit_id=str(cid), family=family, n_qubits=n_qubits,
            target={"kind": label.split("(")[0]}, target_label=label, seed=seed,
            cost_kind="js", final_cost=value,
        )

    return [
        make(1, "P", "normal", 0, 0.30), make(1, "P", "normal", 1, 0.10), make(1, "P", "normal", 2, 0.20),
        make(3, "PE", "normal", 0, 0.05), make(3, "PE", "normal", 1, 0.01), make(3, "PE", "normal", 2, 0.02),
        make(8, "PEP", "normal", 0, 0.001),
        make(6, "HZ", "normal", 0, 0.4),
        make(1, "P", "binomial(p=0.1)", 0, 0.01),
        make(3, "PE", "binomial(p=0.1)", 0, 0.2),
        make(8, "PEP", "binomial(p=0.1)", 0, 0.5),
        make(6, "HZ", "binomial(p=0.1)", 0, 0.6),
    ]


class TestSummarize:
    """Tests for summarize and check_family_orderings."""

    def test_medians(self):
        summary = summarize(_records_for_summary())
        row = summary[(summary["circuit_id"] == "1") & (summary["target"] == "normal")].iloc[0]
        assert row["median_final_cost"] == pytest.approx(0.20)
        assert row["min_final_cost"] == pytest.approx(0.10)
        assert row["max_final_cost"] == pytest.approx(0.30)
        assert row["n_seeds"] == 3

    def test_order_independent(self):
        records = _records_for_summary()
        assert summarize(records).equals(summarize(list(reversed(records))))

    def test_failed_records_ignored(self):
        records = _records_for_summary()
        records[0].status = "failed"
        records[0].final_cost = None
        summary = summarize(records)
        row = summary[(summary["circuit_id"] == "1") & (summary["target"] == "normal")].iloc[0]
        assert row["n_seeds"] == 2

    def test_empty(self):
        assert summarize([]).empty

    def test_orderings(self):
        violations = check_family_orderings(summarize(_records_for_summary()), 4)
        # PEP circuit 8 loses to P circuit 1 on the binomial target
        assert len(violations) == 1
        assert "PEP over best P/PE" in violations[0]
        assert "binomial" in violations[0]

    def test_orderings_other_register_is_vacuous(self):
        assert check_family_orderings(summarize(_records_for_summary()), 3) == []
