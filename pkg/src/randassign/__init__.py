"""Exact-rational random assignment mechanisms and their analysis.

Computes the Random Serial Dictatorship (RSD) and Probabilistic Serial (PS)
assignments of indivisible objects to agents with strict ordinal
preferences, compares them under stochastic and lexicographic dominance,
classifies envy and manipulability, and runs seeded profile-space
experiments. Every probability is an exact rational; nothing is compared
with a tolerance.
"""

from .dominance import (
    EnvyReport,
    Verdict,
    dps_check,
    dps_reverse_check,
    envy_report,
    ld_compare,
    profile_dominance,
    row_verdicts,
    sd_compare,
    surplus,
    ups_check,
)
from .experiments import (
    CellConfig,
    CellMetrics,
    CellResult,
    envy_distribution,
    run_cell,
    run_grid,
)
from .manipulation import (
    ManipulationReport,
    MisreportFlags,
    Witness,
    classify_misreport,
    ps_manipulability,
    rsd_strategyproofness_audit,
)
from .mechanisms import ps, rsd, rsd_bruteforce, serial_dictatorship
from .model import (
    AssignmentMatrix,
    CapExceededError,
    Profile,
    ProfileParseError,
    RandAssignError,
    Violation,
    derive_rng,
    derive_seed,
    enumerate_profiles,
    load_profile,
    parse_profile,
    profile_count,
    profile_from_index,
    rank,
    sample_profile,
    upper_contour,
    validate,
)
from .rational import Rat, decimal_str, parse_rat, rat_str

__version__ = "0.1.0"

__all__ = [
    "AssignmentMatrix",
    "CapExceededError",
    "CellConfig",
    "CellMetrics",
    "CellResult",
    "EnvyReport",
    "ManipulationReport",
    "MisreportFlags",
    "Profile",
    "ProfileParseError",
    "RandAssignError",
    "Rat",
    "Verdict",
    "Violation",
    "Witness",
    "classify_misreport",
    "decimal_str",
    "derive_rng",
    "derive_seed",
    "dps_check",
    "dps_reverse_check",
    "enumerate_profiles",
    "envy_distribution",
    "envy_report",
    "ld_compare",
    "load_profile",
    "parse_profile",
    "parse_rat",
    "profile_count",
    "profile_dominance",
    "profile_from_index",
    "ps",
    "ps_manipulability",
    "rank",
    "rat_str",
    "row_verdicts",
    "rsd",
    "rsd_bruteforce",
    "rsd_strategyproofness_audit",
    "run_cell",
    "run_grid",
    "sample_profile",
    "sd_compare",
    "serial_dictatorship",
    "surplus",
    "upper_contour",
    "validate",
]
