"""
Configuration module for qdistgen.

This module contains the default settings for simulation, training, target
distributions and experiment sweeps, plus helpers to read user configuration
files and merge them over the defaults.
"""

import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from qdistgen.errors import ConfigError

# Application paths
APP_DIR = Path(os.environ.get("QDISTGEN_HOME", Path.home() / ".qdistgen"))
LOG_DIR = APP_DIR / "logs"
LOG_LEVEL = os.environ.get("QDISTGEN_LOG_LEVEL", "INFO")
DEFAULT_LOG_FILE = LOG_DIR / "qdistgen.log"

# Simulator configuration
MAX_QUBITS = int(os.environ.get("QDISTGEN_MAX_QUBITS", "24"))
INGEST_TOLERANCE = 1e-9

# Divergences: logarithms clamp their argument at this floor, probabilities never
LOG_EPSILON = 1e-12

# Training configuration
DEFAULT_STEPSIZE = 0.1
DEFAULT_ITERATIONS = 1000
DEFAULT_MOMENTUM = 0.0
MOMENTUM_VARIANT_BETA = 0.9
DEFAULT_COST = "js"
DEFAULT_INIT = "uniform"
CONVERGENCE_THRESHOLD = 1e-3

# Target distributions
DEFAULT_BINOMIAL_P = 0.1
NORMAL_P = 0.5
DEFAULT_POISSON_LAMBDA = 1.0

# Experiment configuration
DEFAULT_SEEDS = [0, 1, 2, 3, 4]
DEFAULT_FD_STEP = 1e-5
DEFAULT_GRADCHECK_TOLERANCE = 1e-6
DEFAULT_GRADCHECK_POINTS = 5
DEFAULT_WORKERS = 1
DEFAULT_OUTPUT_DIR = Path(os.environ.get("QDISTGEN_OUTPUT_DIR", "results"))
RECORDS_FILENAME = "records.ndjson"

# Top-level sections a configuration file may contain
CONFIG_SECTIONS = ("training", "targets", "experiment")


def get_default_config() -> Dict[str, Any]:
    """Return the default configuration."""
    return {
        "training": {
            "stepsize": DEFAULT_STEPSIZE,
            "iterations": DEFAULT_ITERATIONS,
            "momentum": DEFAULT_MOMENTUM,
            "cost": DEFAULT_COST,
            "init": DEFAULT_INIT,
            "convergence_threshold": CONVERGENCE_THRESHOLD,
            "early_stop": None,
        },
        "targets": {
            "binomial_p": DEFAULT_BINOMIAL_P,
            "poisson_lambda": DEFAULT_POISSON_LAMBDA,
        },
        "experiment": {
            "circuits": list(range(1, 23)),
            "targets": ["uniform", "normal", "binomial", "poisson"],
            "seeds": list(DEFAULT_SEEDS),
            "workers": DEFAULT_WORKERS,
            "output_dir": str(DEFAULT_OUTPUT_DIR),
        },
    }


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a YAML (or JSON) configuration file.

    Args:
        path: Path to the configuration file

    Returns:
        The parsed configuration as a nested dictionary

    Raises:
        ConfigError: If the file is missing, unparsable, not a mapping or has
            sections other than CONFIG_SECTIONS
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError(f"Config file not found: {path}")
    except yaml.YAMLError as e:
        raise ConfigError(f"Could not parse config file {path}: {e}")

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must contain a mapping at top level")
    unknown = sorted(set(data) - set(CONFIG_SECTIONS))
    if unknown:
        raise ConfigError(
            f"Config file {path} has unknown section(s) {', '.join(unknown)} "
            f"(expected {', '.join(CONFIG_SECTIONS)})"
        )
    return data


def merge_config(
    base: Dict[str, Any], overrides: Optional[Dict[str, Any]]
) -> Dict[str, Any]:
    """
    Deep-merge user overrides into a base configuration.

    Nested mappings are merged key by key; any other value replaces the base
    value. Neither input is modified.

    Args:
        base: The base configuration, usually get_default_config()
        overrides: User-supplied sections

    Returns:
        A new merged configuration dictionary
    """
    merged = copy.deepcopy(base)
    for key, value in (overrides or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged
