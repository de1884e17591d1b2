"""Asymptotics and simulation of the multiscale scan statistic of a random walk."""

from __future__ import annotations

__version__ = "0.1.0"

from .cgf import CaseReport, classify, cramer_lambda, duality_report, psi, rate
from .distributions import Distribution, make_distribution, sample
from .errors import ScanlawError
from .harness import argmax_length_profile, ks_statistic, run_hitting_experiment, run_mn_experiment
from .laws import (
    GumbelLaw,
    gumbel_law,
    gumbel_location,
    hitting_cdf,
    intensity,
    intensity_integral,
    limit_cdf_msq,
    optimal_length,
    pvalue_m,
)
from .pickands import hstar_direct, hstar_spitzer, reconcile, tilt
from .scan import ScanResult, hitting_time, scan_full, scan_restricted, scan_two_sided
from .tails import TailQuery, bahadur_rao_tail, chernoff_bound, cramer_tail, exact_tail, importance_tail

__all__ = [
    "__version__",
    "CaseReport",
    "Distribution",
    "GumbelLaw",
    "ScanResult",
    "ScanlawError",
    "TailQuery",
    "argmax_length_profile",
    "bahadur_rao_tail",
    "chernoff_bound",
    "classify",
    "cramer_lambda",
    "cramer_tail",
    "duality_report",
    "exact_tail",
    "gumbel_law",
    "gumbel_location",
    "hitting_cdf",
    "hitting_time",
    "hstar_direct",
    "hstar_spitzer",
    "importance_tail",
    "intensity",
    "intensity_integral",
    "ks_statistic",
    "limit_cdf_msq",
    "make_distribution",
    "optimal_length",
    "psi",
    "pvalue_m",
    "rate",
    "reconcile",
    "run_hitting_experiment",
    "run_mn_experiment",
    "sample",
    "scan_full",
    "scan_restricted",
    "scan_two_sided",
    "tilt",
]
