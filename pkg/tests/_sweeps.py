"""Chunked exhaustive sweeps backing the acceptance property suites.

Workers are module-level so ProcessPoolExecutor can dispatch them; each
checks a contiguous range of profile indices of one (n, m) cell and returns
(number checked, first failure message or None). Every check is a
must-hold property, so chunk order cannot change the verdict.
"""

from concurrent.futures import ProcessPoolExecutor
from math import factorial

from randassign import (
    Verdict,
    dps_check,
    dps_reverse_check,
    envy_report,
    profile_count,
    profile_dominance,
    profile_from_index,
    ps,
    ps_manipulability,
    rsd,
    rsd_bruteforce,
    rsd_strategyproofness_audit,
    ups_check,
    validate,
)

EXHAUSTIVE_CELL_LIMIT = 100_000
MAX_AGENTS = 12
MAX_OBJECTS = 8
AUDIT_WORK_LIMIT = 4_000_000


def exhaustive_cells():
    """Cells whose whole profile space fits the exhaustive-suite budget."""
    return [
        (n, m)
        for n in range(1, MAX_AGENTS + 1)
        for m in range(1, MAX_OBJECTS + 1)
        if profile_count(n, m) <= EXHAUSTIVE_CELL_LIMIT
    ]


def audit_cells():
    """Exhaustive cells where the full misreport-by-misreport RSD audit is
    affordable: misreport scan within the per-agent cap and total mechanism
    runs bounded."""
    cells = []
    for n, m in exhaustive_cells():
        if factorial(m) > factorial(7):
            continue
        work = profile_count(n, m) * n * (factorial(m) - 1)
        if 0 < work <= AUDIT_WORK_LIMIT:
            cells.append((n, m))
    return cells


def misreport_scan_cells():
    """Cells whose PS misreport scan the suite runs in full: every n >= m
    cell (no sd/ld witness may exist) plus every m = 2 cell (no witness of
    any kind may exist)."""
    return [(n, m) for n, m in exhaustive_cells() if m > 1 and (n >= m or m == 2)]


def _mechanism_properties_chunk(args):
    n, m, start, stop = args
    for index in range(start, stop):
        profile = profile_from_index(n, m, index)
        ps_matrix = ps(profile)
        rsd_matrix = rsd(profile)
        where = f"cell ({n},{m}) profile {index}"
        if validate(ps_matrix) is not None:
            return index - start + 1, f"{where}: PS output infeasible"
        if validate(rsd_matrix) is not None:
            return index - start + 1, f"{where}: RSD output infeasible"
        if any(envy_report(rsd_matrix, profile).ld_envious):
            return index - start + 1, f"{where}: RSD produced ld-envy"
        if any(envy_report(ps_matrix, profile).weakly_envious):
            return index - start + 1, f"{where}: PS produced weak envy"
        for mode in ("sd", "ld"):
            verdict = profile_dominance(rsd_matrix, ps_matrix, profile, mode)
            if verdict is Verdict.FIRST_DOMINATES:
                return index - start + 1, f"{where}: RSD {mode}-dominated PS"
        if not dps_check(rsd_matrix, profile):
            return index - start + 1, f"{where}: RSD violates DPS"
        # the DPS converse is a single-pick dictatorship property: n >= m only
        if n >= m and not dps_reverse_check(rsd_matrix, profile):
            return index - start + 1, f"{where}: RSD violates the DPS converse"
        if not (dps_check(ps_matrix, profile) and ups_check(ps_matrix, profile)):
            return index - start + 1, f"{where}: PS violates DPS/UPS"
        if m <= 2 and n <= 3 and ps_matrix != rsd_matrix:
            return index - start + 1, f"{where}: PS != RSD on a tiny cell"
    return stop - start, None


def _audit_chunk(args):
    n, m, start, stop = args
    for index in range(start, stop):
        profile = profile_from_index(n, m, index)
        if not rsd_strategyproofness_audit(profile):
            return index - start + 1, f"cell ({n},{m}) profile {index}: audit failed"
    return stop - start, None


def _misreport_scan_chunk(args):
    n, m, start, stop = args
    expect_truthful = m == 2
    for index in range(start, stop):
        profile = profile_from_index(n, m, index)
        report = ps_manipulability(profile)
        where = f"cell ({n},{m}) profile {index}"
        if n >= m and (report.sd_manipulable or report.ld_manipulable):
            return index - start + 1, f"{where}: sd/ld witness with n >= m"
        if expect_truthful and report.manipulable:
            return index - start + 1, f"{where}: manipulable with m = 2"
    return stop - start, None


def _bruteforce_chunk(args):
    n, m, start, stop = args
    for index in range(start, stop):
        profile = profile_from_index(n, m, index)
        if rsd(profile) != rsd_bruteforce(profile):
            return index - start + 1, f"cell ({n},{m}) profile {index}: DP != brute force"
    return stop - start, None


WORKERS = {
    "mechanism_properties": _mechanism_properties_chunk,
    "audit": _audit_chunk,
    "misreport_scan": _misreport_scan_chunk,
    "bruteforce": _bruteforce_chunk,
}


def sweep_cell(worker: str, n: int, m: int, threads: int = 1):
    """Run one worker over every profile of a cell; returns the first
    failure message or None."""
    fn = WORKERS[worker]
    total = profile_count(n, m)
    chunk = max(1, -(-total // (threads * 4)))
    jobs = [(n, m, s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(fn, jobs))
    else:
        results = [fn(job) for job in jobs]
    checked = sum(count for count, _ in results)
    for _, failure in results:
        if failure is not None:
            return checked, failure
    assert checked == total
    return checked, None
