"""Misreport search over the PS mechanism, plus an RSD honesty audit.

A misreport is judged against the agent's TRUE ranking, comparing the row
she gets by lying with the row she gets by telling the truth:

* manipulable: some upper-contour probability strictly improves;
* sd-manipulable: the misreport row stochastically dominates the truth;
* ld-manipulable: the misreport row lexicographically dominates the truth.

sd-manipulable implies ld-manipulable implies manipulable, and every report
produced here asserts that chain.
"""

import itertools
from dataclasses import dataclass
from math import factorial

from .dominance import Verdict, cumulative, ld_compare
from .mechanisms import _ps_rows, _rsd_rows
from .model import CapExceededError, Profile

DEFAULT_MISREPORT_CAP = factorial(7)  # exhaustive scan allowed up to m = 7


@dataclass(frozen=True)
class MisreportFlags:
    manipulable: bool = False
    sd_manipulable: bool = False
    ld_manipulable: bool = False

    def __post_init__(self):
        assert (not self.sd_manipulable or self.ld_manipulable) and (
            not self.ld_manipulable or self.manipulable
        ), "flag chain violated: sd implies ld implies manipulable"

    def __or__(self, other: "MisreportFlags") -> "MisreportFlags":
        return MisreportFlags(
            self.manipulable or other.manipulable,
            self.sd_manipulable or other.sd_manipulable,
            self.ld_manipulable or other.ld_manipulable,
        )

    @property
    def all_set(self) -> bool:
        return self.manipulable and self.sd_manipulable and self.ld_manipulable


def classify_misreport(truth, truthful_row, misreport_row) -> MisreportFlags:
    """Flags for one misreported row versus the truthful row, both evaluated
    under the TRUE preference order."""
    if len(truthful_row) != len(truth) or len(misreport_row) != len(truth):
        raise ValueError("rows must have one entry per object")
    truth_cum = cumulative(truth, truthful_row)
    mis_cum = cumulative(truth, misreport_row)
    manipulable = any(mc > tc for mc, tc in zip(mis_cum, truth_cum))
    sd = tuple(misreport_row) != tuple(truthful_row) and all(
        mc >= tc for mc, tc in zip(mis_cum, truth_cum)
    )
    ld = ld_compare(truth, misreport_row, truthful_row) is Verdict.FIRST_DOMINATES
    return MisreportFlags(manipulable, sd, ld)


@dataclass(frozen=True)
class Witness:
    """First misreport (in scan order) establishing a flag."""

    agent: int
    misreport: tuple


@dataclass(frozen=True)
class ManipulationReport:
    manipulable: bool
    sd_manipulable: bool
    ld_manipulable: bool
    manipulable_witness: Witness | None
    sd_witness: Witness | None
    ld_witness: Witness | None
    # Per-agent flags; once a profile-level flag is witnessed its search
    # stops, so later agents' entries for that flag are lower bounds.
    per_agent: tuple
    # False when misreports were sampled rather than exhaustively scanned;
    # all flags are then "found within budget" lower bounds.
    exhaustive: bool

    def __post_init__(self):
        assert (not self.sd_manipulable or self.ld_manipulable) and (
            not self.ld_manipulable or self.manipulable
        ), "flag chain violated: sd implies ld implies manipulable"


def _exhaustive_misreports(truth, m: int):
    """All m!-1 alternative rankings, lexicographic (Lehmer-code) order."""
    for perm in itertools.permutations(range(m)):
        if perm != truth:
            yield perm


def _sampled_misreports(truth, m: int, count: int, rng):
    for _ in range(count):
        while True:
            perm = list(range(m))
            rng.shuffle(perm)
            perm = tuple(perm)
            if perm != truth:
                yield perm
                break


def ps_manipulability(
    profile: Profile,
    misreport_samples: int | None = None,
    rng=None,
    misreport_cap: int = DEFAULT_MISREPORT_CAP,
) -> ManipulationReport:
    """Search misreports of PS, agent by agent, classifying each one.

    Exhaustive by default (all m!-1 alternative rankings per agent, in
    lexicographic order, agents in index order); pass ``misreport_samples``
    to sample that many uniform misreports per agent instead, which makes
    every flag a found-within-budget lower bound. The search for a flag
    stops at its first witness; the scan ends when all three flags are
    witnessed.
    """
    n, m = profile.n, profile.m
    exhaustive = misreport_samples is None
    if exhaustive and factorial(m) > misreport_cap:
        raise CapExceededError(
            f"exhaustive misreport scan needs m! = {factorial(m)} rankings per agent "
            f"(cap {misreport_cap}); pass misreport_samples to sample instead"
        )
    if not exhaustive and rng is None:
        raise ValueError("sampled misreport scan needs an rng")
    truthful = _ps_rows(profile.prefs, m)
    found = MisreportFlags()
    witnesses = {"manipulable": None, "sd": None, "ld": None}
    per_agent = [MisreportFlags() for _ in range(n)]
    prefs = list(profile.prefs)
    for agent in range(n):
        if found.all_set:
            break
        truth = profile.prefs[agent]
        truth_row = truthful[agent]
        if exhaustive:
            candidates = _exhaustive_misreports(truth, m)
        else:
            candidates = _sampled_misreports(truth, m, misreport_samples, rng)
        for mis in candidates:
            prefs[agent] = mis
            mis_row = _ps_rows(prefs, m)[agent]
            flags = classify_misreport(truth, truth_row, mis_row)
            per_agent[agent] = per_agent[agent] | flags
            if flags.manipulable and witnesses["manipulable"] is None:
                witnesses["manipulable"] = Witness(agent, mis)
            if flags.sd_manipulable and witnesses["sd"] is None:
                witnesses["sd"] = Witness(agent, mis)
            if flags.ld_manipulable and witnesses["ld"] is None:
                witnesses["ld"] = Witness(agent, mis)
            found = found | flags
            if found.all_set:
                break
        prefs[agent] = truth
    return ManipulationReport(
        manipulable=found.manipulable,
        sd_manipulable=found.sd_manipulable,
        ld_manipulable=found.ld_manipulable,
        manipulable_witness=witnesses["manipulable"],
        sd_witness=witnesses["sd"],
        ld_witness=witnesses["ld"],
        per_agent=tuple(per_agent),
        exhaustive=exhaustive,
    )


def rsd_strategyproofness_audit(
    profile: Profile, misreport_cap: int = DEFAULT_MISREPORT_CAP
) -> bool:
    """Exhaustively confirm that no RSD misreport ever helps.

    True means every agent's truthful row weakly dominates her row under
    every possible misreport. RSD is strategyproof, so False signals an
    implementation bug rather than a property of the profile.
    """
    n, m = profile.n, profile.m
    if factorial(m) > misreport_cap:
        raise CapExceededError(
            f"exhaustive misreport scan needs m! = {factorial(m)} rankings per agent "
            f"(cap {misreport_cap})"
        )
    truthful = _rsd_rows(profile.prefs, m)
    prefs = list(profile.prefs)
    for agent in range(n):
        truth = profile.prefs[agent]
        truth_cum = cumulative(truth, truthful[agent])
        for mis in _exhaustive_misreports(truth, m):
            prefs[agent] = mis
            mis_row = _rsd_rows(prefs, m)[agent]
            mis_cum = cumulative(truth, mis_row)
            if any(mc > tc for mc, tc in zip(mis_cum, truth_cum)):
                prefs[agent] = truth
                return False
        prefs[agent] = truth
    return True
