"""
End-to-end tests for the qdistgen command line.

These tests drive main() the way the console script does and check exit
codes and the files each subcommand leaves behind.
"""

import json
import logging
import os
import shutil

import pandas as pd
import pytest

from qdistgen import main as cli
from qdistgen.config import RECORDS_FILENAME
from qdistgen.errors import DomainError
from qdistgen.experiments import load_records, sweep
from qdistgen.main import EXIT_CONFIG, EXIT_GRADCHECK, EXIT_NUMERICAL, EXIT_OK, main


@pytest.fixture(autouse=True)
def restore_logging():
    """main() reconfigures the root logger; undo it after each test."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers = handlers
    root.setLevel(level)


class TestCatalogCommand:
    """Tests for the catalog subcommand."""

    def test_one_file_per_circuit(self, temp_test_dir):
        out = os.path.join(temp_test_dir, "circuits")
        assert main(["-q", "catalog", "--out", out]) == EXIT_OK
        files = sorted(os.listdir(out))
        assert len(files) == 22
        with open(os.path.join(out, "circuit_8.json")) as f:
            document = json.load(f)
        assert document["family"] == "PEP"
        assert document["n_qubits"] == 4

    def test_combined(self, temp_test_dir):
        assert main(["-q", "catalog", "--out", temp_test_dir, "--combined"]) == EXIT_OK
        with open(os.path.join(temp_test_dir, "catalog.json")) as f:
            document = json.load(f)
        assert [t["id"] for t in document["templates"]] == [str(i) for i in range(1, 23)]

    def test_written_file_runs(self, temp_test_dir, capsys):
        main(["-q", "catalog", "--out", temp_test_dir])
        path = os.path.join(temp_test_dir, "circuit_20.json")
        assert main(["-q", "run", "--circuit", path, "--target", "uniform", "--iters", "5"]) == EXIT_OK


class TestRunCommand:
    """Tests for the run subcommand."""

    def test_prints_result(self, capsys):
        code = main(["-q", "run", "--circuit", "20", "--target", "binomial", "--p", "0.3", "--iters", "10"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "circuit 20 (P) -> binomial(p=0.3), seed 0" in out
        assert "after 10 iterations" in out
        assert out.count("distribution:") == 1

    def test_writes_record(self, temp_test_dir):
        code = main([
            "-q", "run", "--circuit", "22", "--target", "poisson", "--lambda", "2",
            "--iters", "10", "--seed", "3", "--momentum", "--out", temp_test_dir,
        ])
        assert code == EXIT_OK
        (record,) = load_records(os.path.join(temp_test_dir, RECORDS_FILENAME))
        assert record.seed == 3
        assert record.target["lambda"] == 2.0
        assert os.path.exists(os.path.join(temp_test_dir, record.trace_path))

    def test_log_flag_writes_default_log_file(self, temp_test_dir, monkeypatch):
        log_file = os.path.join(temp_test_dir, "logs", "qdistgen.log")
        monkeypatch.setattr(cli, "DEFAULT_LOG_FILE", log_file)
        assert main(["--log", "run", "--circuit", "19", "--iters", "3"]) == EXIT_OK
        with open(log_file) as f:
            assert "INFO" in f.read()

    def test_config_file(self, temp_test_dir, capsys):
        path = os.path.join(temp_test_dir, "cfg.yaml")
        with open(path, "w") as f:
            f.write("training:\n  iterations: 7\n")
        assert main(["-q", "--config", path, "run", "--circuit", "19"]) == EXIT_OK
        assert "after 7 iterations" in capsys.readouterr().out

    def test_numerical_failure(self, monkeypatch):
        def fail(*args, **kwargs):
            raise DomainError("KL divergence undefined")

        monkeypatch.setattr(cli, "run_single", fail)
        assert main(["-q", "run", "--circuit", "20", "--cost", "kl"]) == EXIT_NUMERICAL


class TestSweepAndPlotdata:
    """A short sweep followed by plot data emission."""

    def test_sweep_then_plotdata(self, temp_test_dir, capsys):
        out = os.path.join(temp_test_dir, "results")
        code = main([
            "-q", "sweep", "--circuit", "19", "21", "--target", "uniform", "normal",
            "--seeds", "0", "1", "--iters", "10", "--out", out,
        ])
        assert code == EXIT_OK
        assert len(load_records(os.path.join(out, RECORDS_FILENAME))) == 8
        assert "median_final_cost" in capsys.readouterr().out

        records = os.path.join(out, RECORDS_FILENAME)
        assert main(["-q", "plotdata", "--records", records, "--kind", "accuracy"]) == EXIT_OK
        frame = pd.read_csv(os.path.join(out, "plotdata", "accuracy.csv"))
        assert len(frame) == 4
        assert main(["-q", "plotdata", "--records", records, "--kind", "trace"]) == EXIT_OK
        assert len([f for f in os.listdir(os.path.join(out, "plotdata")) if f.startswith("trace_")]) == 8

    def test_numerical_run_failures_exit_2(self, temp_test_dir, monkeypatch):
        def fail(*args, **kwargs):
            raise DomainError("KL divergence undefined")

        monkeypatch.setattr(sweep, "run_single", fail)
        out = os.path.join(temp_test_dir, "results")
        code = main(["-q", "sweep", "--circuit", "19", "--target", "uniform", "--seeds", "0", "--out", out])
        assert code == EXIT_NUMERICAL
        (record,) = load_records(os.path.join(out, RECORDS_FILENAME))
        assert not record.ok

    def test_unexpected_run_failures_exit_1(self, temp_test_dir, monkeypatch):
        def fail(*args, **kwargs):
            raise RuntimeError("NumericalError: text that only looks numerical")

        monkeypatch.setattr(sweep, "run_single", fail)
        out = os.path.join(temp_test_dir, "results")
        code = main(["-q", "sweep", "--circuit", "19", "--target", "uniform", "--seeds", "0", "--out", out])
        assert code == EXIT_CONFIG
        (record,) = load_records(os.path.join(out, RECORDS_FILENAME))
        assert record.error_kind == "unexpected"

    def test_plotdata_trace_without_trace_file(self, temp_test_dir):
        out = os.path.join(temp_test_dir, "results")
        assert main(["-q", "sweep", "--circuit", "19", "--target", "uniform", "--seeds", "0",
                     "--iters", "5", "--out", out]) == EXIT_OK
        shutil.rmtree(os.path.join(out, "traces"))
        records = os.path.join(out, RECORDS_FILENAME)
        assert main(["-q", "plotdata", "--records", records, "--kind", "trace"]) == EXIT_CONFIG

    def test_plotdata_missing_records(self, temp_test_dir):
        missing = os.path.join(temp_test_dir, RECORDS_FILENAME)
        assert main(["-q", "plotdata", "--records", missing, "--kind", "histogram"]) == EXIT_CONFIG


class TestGradcheckCommand:
    """Tests for the gradcheck subcommand."""

    def test_pass_with_report(self, temp_test_dir, capsys):
        report = os.path.join(temp_test_dir, "gradcheck.json")
        code = main(["-q", "gradcheck", "--circuit", "20", "22", "--points", "2", "--out", report])
        assert code == EXIT_OK
        with open(report) as f:
            data = json.load(f)
        assert data["passed"] is True
        assert "overall max deviation" in capsys.readouterr().out

    def test_failure_exit_code(self):
        code = main(["-q", "gradcheck", "--circuit", "20", "--points", "1", "--tolerance", "1e-15"])
        assert code == EXIT_GRADCHECK


class TestUsageErrors:
    """Bad invocations exit with the configuration code."""

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["run"],
            ["run", "--circuit", "99"],
            ["run", "--circuit", "20", "--stepsize", "-1"],
            ["run", "--circuit", "20", "--frobnicate"],
            ["sweep", "--workers", "0"],
            ["gradcheck", "--points", "0"],
            ["plotdata", "--records", "x.ndjson", "--kind", "scatter"],
        ],
    )
    def test_exit_1(self, argv):
        assert main(["-q"] + argv) == EXIT_CONFIG

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["--version"])
        assert excinfo.value.code == 0
        assert "qdistgen" in capsys.readouterr().out
