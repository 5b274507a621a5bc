"""Experiment grids and statistics: bound verification, achievability,
leak stress test, estimator-level data-processing sanity, estimator
audits, and multi-step accumulation."""

from .achievability import evaluate_cell_max, evaluate_policy_pair, run_achievability_sweep
from .dpi import run_dpi_check
from .grid import Cell, CellResult, GroupStats, SweepGrid, derive_seed, group_stats
from .leak import run_leak_sweep
from .multistep import run_multistep
from .stats import holm_bonferroni, one_sided_t
from .verify import run_verification_sweep

from . import achievability, audits, dpi, leak, multistep, verify

__all__ = [
    "SweepGrid",
    "Cell",
    "CellResult",
    "GroupStats",
    "derive_seed",
    "group_stats",
    "holm_bonferroni",
    "one_sided_t",
    "run_verification_sweep",
    "run_achievability_sweep",
    "evaluate_policy_pair",
    "evaluate_cell_max",
    "run_leak_sweep",
    "run_dpi_check",
    "run_multistep",
    "achievability",
    "audits",
    "dpi",
    "leak",
    "multistep",
    "verify",
]


def run_estimator_audit(kind, **kwargs):
    from .audits import run_estimator_audit as _run

    return _run(kind, **kwargs)
