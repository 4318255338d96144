"""Profile-space experiment harness.

One cell = one (n, m) combination evaluated over either the full profile
space (exact fractions) or a seeded uniform sample. Per profile we compare
the PS and RSD assignments (equality, sd and ld dominance in both the
weak-rowwise and all-strict readings), measure weak envy under RSD, and run
the PS misreport search. Aggregates are exact rationals either way; sampled
cells just estimate the population values.

Profiles are addressed by index (enumeration index in exhaustive mode,
sample index otherwise), with per-profile RNGs derived from
(master_seed, n, m, index), so chunked parallel evaluation reduces to the
same counts in any schedule.
"""

import csv
import io
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .dominance import Verdict, envy_report, row_verdicts
from .manipulation import ps_manipulability
from .mechanisms import ps, rsd
from .model import (
    CapExceededError,
    Profile,
    derive_rng,
    profile_count,
    profile_from_index,
    sample_profile,
)
from .rational import Rat, ZERO, decimal_str, rat_str

DEFAULT_SAMPLES = 1000
DEFAULT_AUTO_EXHAUSTIVE_LIMIT = 100_000

CSV_HEADER = [
    "n", "m", "mode", "samples",
    "frac_equal",
    "frac_ps_sd_dom", "frac_ps_sd_dom_strict", "frac_ps_ld_dom",
    "mean_envy_frac",
    "frac_manip", "frac_sd_manip", "frac_ld_manip",
    "seed",
]

ENVY_CSV_HEADER = ["n", "fraction", "multiplicity"]


@dataclass(frozen=True)
class CellConfig:
    """How to evaluate one (n, m) cell.

    mode "auto" runs exhaustively when (m!)^n fits under
    ``auto_exhaustive_limit`` and otherwise samples ``samples`` profiles
    (with replacement) from the seeded uniform distribution.
    ``misreport_samples=None`` scans all m!-1 misreports per agent.
    """

    n: int
    m: int
    mode: str = "auto"  # "auto" | "exhaustive" | "sampled"
    samples: int = DEFAULT_SAMPLES
    master_seed: int = 0
    misreport_samples: int | None = None
    auto_exhaustive_limit: int = DEFAULT_AUTO_EXHAUSTIVE_LIMIT
    enumeration_cap: int = DEFAULT_AUTO_EXHAUSTIVE_LIMIT

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be >= 1")
        if self.mode not in ("auto", "exhaustive", "sampled"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")

    def resolved_mode(self) -> str:
        if self.mode == "auto":
            if profile_count(self.n, self.m) <= self.auto_exhaustive_limit:
                return "exhaustive"
            return "sampled"
        return self.mode

    def profile_total(self) -> int:
        if self.resolved_mode() == "exhaustive":
            total = profile_count(self.n, self.m)
            if total > self.enumeration_cap:
                raise CapExceededError(
                    f"exhaustive cell ({self.n},{self.m}) has {total} profiles, "
                    f"over the cap {self.enumeration_cap}; sample instead"
                )
            return total
        return self.samples


@dataclass(frozen=True)
class CellMetrics:
    """Aggregate fractions for one cell. All values are exact rationals;
    for sampled cells they are sample estimates with the given count."""

    n: int
    m: int
    mode: str
    samples: int
    seed: int
    frac_equal: Rat
    frac_ps_sd_dominates_rsd: Rat
    frac_ps_sd_dominates_rsd_strict: Rat
    frac_ps_ld_dominates_rsd: Rat
    mean_envy_fraction: Rat
    envy_distribution: tuple  # sorted ((fraction, multiplicity), ...)
    frac_manipulable: Rat
    frac_sd_manipulable: Rat
    frac_ld_manipulable: Rat
    misreports_exhaustive: bool

    def __post_init__(self):
        assert self.frac_ps_sd_dominates_rsd <= self.frac_ps_ld_dominates_rsd
        assert (
            self.frac_sd_manipulable
            <= self.frac_ld_manipulable
            <= self.frac_manipulable
        )


def _profile_for_index(config: CellConfig, mode: str, index: int) -> Profile:
    if mode == "exhaustive":
        return profile_from_index(config.n, config.m, index)
    rng = derive_rng(config.master_seed, config.n, config.m, index)
    return sample_profile(config.n, config.m, rng)


def _evaluate_chunk(args):
    """Worker: evaluate profiles [start, stop) of a cell, return raw counts.

    Rationals cross the process boundary as (numerator, denominator) int
    pairs so the result is backend-agnostic and cheap to pickle.
    """
    config, mode, start, stop = args
    counts = dict.fromkeys(
        ("equal", "sd_dom", "sd_dom_strict", "ld_dom", "manip", "sd_manip", "ld_manip"),
        0,
    )
    envy_sum = ZERO
    envy_dist = Counter()
    for index in range(start, stop):
        profile = _profile_for_index(config, mode, index)
        ps_matrix = ps(profile)
        rsd_matrix = rsd(profile)
        if ps_matrix.rows == rsd_matrix.rows:
            counts["equal"] += 1
        else:
            sd_rows = row_verdicts(ps_matrix, rsd_matrix, profile, "sd")
            if all(v in (Verdict.FIRST_DOMINATES, Verdict.EQUAL) for v in sd_rows):
                counts["sd_dom"] += 1
                if all(v is Verdict.FIRST_DOMINATES for v in sd_rows):
                    counts["sd_dom_strict"] += 1
            ld_rows = row_verdicts(ps_matrix, rsd_matrix, profile, "ld")
            if all(v in (Verdict.FIRST_DOMINATES, Verdict.EQUAL) for v in ld_rows):
                counts["ld_dom"] += 1
        envy = envy_report(rsd_matrix, profile).envy_fraction
        envy_sum += envy
        envy_dist[(int(envy.numerator), int(envy.denominator))] += 1
        if config.misreport_samples is None:
            report = ps_manipulability(profile)
        else:
            mis_rng = derive_rng(config.master_seed, config.n, config.m, index, "mis")
            report = ps_manipulability(
                profile, misreport_samples=config.misreport_samples, rng=mis_rng
            )
        counts["manip"] += report.manipulable
        counts["sd_manip"] += report.sd_manipulable
        counts["ld_manip"] += report.ld_manipulable
    return counts, (int(envy_sum.numerator), int(envy_sum.denominator)), envy_dist


def _chunk_ranges(total: int, threads: int):
    chunk = max(1, -(-total // (threads * 4)))
    return [(start, min(start + chunk, total)) for start in range(0, total, chunk)]


def run_cell(config: CellConfig, threads: int = 1) -> CellMetrics:
    """Evaluate one cell, optionally across worker processes.

    The aggregation is a commutative sum of per-chunk counts, so the result
    is byte-for-byte identical for every thread count.
    """
    mode = config.resolved_mode()
    total = config.profile_total()
    jobs = [(config, mode, start, stop) for start, stop in _chunk_ranges(total, threads)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_evaluate_chunk, jobs))
    else:
        results = [_evaluate_chunk(job) for job in jobs]
    counts = Counter()
    envy_sum = ZERO
    envy_dist = Counter()
    for chunk_counts, (num, den), chunk_dist in results:
        counts.update(chunk_counts)
        envy_sum += Rat(num, den)
        envy_dist.update(chunk_dist)
    frac = lambda key: Rat(counts[key], total)
    return CellMetrics(
        n=config.n,
        m=config.m,
        mode=mode,
        samples=total,
        seed=config.master_seed,
        frac_equal=frac("equal"),
        frac_ps_sd_dominates_rsd=frac("sd_dom"),
        frac_ps_sd_dominates_rsd_strict=frac("sd_dom_strict"),
        frac_ps_ld_dominates_rsd=frac("ld_dom"),
        mean_envy_fraction=envy_sum / total,
        envy_distribution=tuple(
            sorted((Rat(num, den), mult) for (num, den), mult in envy_dist.items())
        ),
        frac_manipulable=frac("manip"),
        frac_sd_manipulable=frac("sd_manip"),
        frac_ld_manipulable=frac("ld_manip"),
        misreports_exhaustive=config.misreport_samples is None,
    )


def envy_distribution(n: int, config: CellConfig, threads: int = 1):
    """Multiset of per-profile weakly-envious fractions at n = m.

    Returns the sorted ((fraction, multiplicity), ...) tuple used for
    boxplot rendering.
    """
    if config.n != n or config.m != n:
        raise ValueError("envy distribution is defined for square cells (n = m)")
    return run_cell(config, threads=threads).envy_distribution


@dataclass(frozen=True)
class CellResult:
    """Outcome of one grid cell: metrics, or the error that stopped it."""

    config: CellConfig
    metrics: CellMetrics | None = None
    error: str | None = None


def run_grid(n_values, m_values, template: CellConfig, threads: int = 1):
    """Independent run_cell per (n, m); failed cells are recorded and do not
    stop the rest of the grid."""
    n_values = list(n_values)
    m_values = list(m_values)
    if not n_values or not m_values:
        raise ValueError("n and m ranges must be non-empty")
    results = []
    for n in n_values:
        for m in m_values:
            config = replace(template, n=n, m=m)
            try:
                results.append(CellResult(config, metrics=run_cell(config, threads=threads)))
            except (CapExceededError, ValueError) as exc:
                results.append(CellResult(config, error=str(exc)))
    return results


def _format_fraction(value, mode: str) -> str:
    if mode == "exhaustive":
        return rat_str(value)
    return decimal_str(value, 6)


def metrics_csv_row(metrics: CellMetrics):
    f = lambda v: _format_fraction(v, metrics.mode)
    return [
        str(metrics.n), str(metrics.m), metrics.mode, str(metrics.samples),
        f(metrics.frac_equal),
        f(metrics.frac_ps_sd_dominates_rsd),
        f(metrics.frac_ps_sd_dominates_rsd_strict),
        f(metrics.frac_ps_ld_dominates_rsd),
        f(metrics.mean_envy_fraction),
        f(metrics.frac_manipulable),
        f(metrics.frac_sd_manipulable),
        f(metrics.frac_ld_manipulable),
        str(metrics.seed),
    ]


def grid_to_csv(results) -> str:
    """Render grid results into the cell CSV schema.

    Failed cells keep their (n, m) coordinates with mode "failed" and empty
    metric columns so partial runs stay machine-readable.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for result in results:
        if result.metrics is not None:
            writer.writerow(metrics_csv_row(result.metrics))
        else:
            writer.writerow(
                [str(result.config.n), str(result.config.m), "failed", "0"]
                + [""] * 8
                + [str(result.config.master_seed)]
            )
    return buf.getvalue()


def envy_distribution_to_csv(per_n) -> str:
    """Distribution dump: one row per (n, fraction, multiplicity).

    ``per_n`` maps n to a ((fraction, multiplicity), ...) tuple. Fractions
    stay exact p/q regardless of sampling mode.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ENVY_CSV_HEADER)
    for n in sorted(per_n):
        for fraction, mult in per_n[n]:
            writer.writerow([str(n), rat_str(fraction), str(mult)])
    return buf.getvalue()
