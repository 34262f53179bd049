"""
Circuits package for qdistgen.

This package holds parameterized circuit templates, their evaluation, the
22-circuit ansatz catalog and the ansatz-definition file format.
"""

from qdistgen.circuits.catalog import CATALOG_IDS, catalog_all, catalog_get, catalog_ids
from qdistgen.circuits.loader import (
    dump_template,
    dumps_template,
    load_template,
    save_templates,
)
from qdistgen.circuits.template import (
    CircuitTemplate,
    Family,
    ParamVector,
    check_params,
    classify_family,
    evaluate,
    simulate,
    template_unitary,
    terminal_rz_slots,
)

__all__ = [
    "CATALOG_IDS",
    "CircuitTemplate",
    "Family",
    "ParamVector",
    "catalog_all",
    "catalog_get",
    "catalog_ids",
    "check_params",
    "classify_family",
    "dump_template",
    "dumps_template",
    "evaluate",
    "load_template",
    "save_templates",
    "simulate",
    "template_unitary",
    "terminal_rz_slots",
]
