"""Dominance relations, envy classification, and partial-symmetry checks.

Two ways to compare allocation rows under one agent's ranking:

* stochastic dominance (sd): cumulative probability over every upper
  contour set weakly higher; a partial order.
* lexicographic dominance (ld): more probability on the first object, in
  preference order, where the rows differ; total on distinct rows.

All comparisons are exact; rows of equal surplus everywhere are equal rows.
"""

import enum
from dataclasses import dataclass

from .model import AssignmentMatrix, Profile, rank
from .rational import Rat, ZERO


class Verdict(enum.Enum):
    EQUAL = "equal"
    FIRST_DOMINATES = "first-dominates"
    SECOND_DOMINATES = "second-dominates"
    INCOMPARABLE = "incomparable"


def _check_row(pref, row):
    if len(row) != len(pref):
        raise ValueError(f"row has {len(row)} entries for {len(pref)} objects")


def cumulative(pref, row):
    """Surpluses down the preference order: entry k is the probability of
    getting something at least as good as the k-th ranked object."""
    _check_row(pref, row)
    out = []
    acc = ZERO
    for obj in pref:
        acc = acc + row[obj]
        out.append(acc)
    return out


def surplus(pref, obj: int, row):
    """Total probability on objects weakly preferred to ``obj``."""
    _check_row(pref, row)
    return cumulative(pref, row)[rank(pref, obj)]


def sd_compare(pref, row_a, row_b) -> Verdict:
    """Stochastic-dominance verdict between two rows under one ranking."""
    _check_row(pref, row_a)
    _check_row(pref, row_b)
    if tuple(row_a) == tuple(row_b):
        return Verdict.EQUAL
    a_cum = cumulative(pref, row_a)
    b_cum = cumulative(pref, row_b)
    a_ge = all(a >= b for a, b in zip(a_cum, b_cum))
    if a_ge:
        return Verdict.FIRST_DOMINATES
    if all(b >= a for a, b in zip(a_cum, b_cum)):
        return Verdict.SECOND_DOMINATES
    return Verdict.INCOMPARABLE


def ld_compare(pref, row_a, row_b) -> Verdict:
    """Lexicographic-dominance verdict: first differing object decides."""
    _check_row(pref, row_a)
    _check_row(pref, row_b)
    for obj in pref:
        if row_a[obj] != row_b[obj]:
            return Verdict.FIRST_DOMINATES if row_a[obj] > row_b[obj] else Verdict.SECOND_DOMINATES
    return Verdict.EQUAL


_ROW_COMPARE = {"sd": sd_compare, "ld": ld_compare}


def row_verdicts(a: AssignmentMatrix, b: AssignmentMatrix, profile: Profile, mode: str = "sd"):
    """Per-agent row verdicts of matrix ``a`` versus ``b``."""
    if mode not in _ROW_COMPARE:
        raise ValueError(f"mode must be 'sd' or 'ld', got {mode!r}")
    if not (a.n == b.n == profile.n and a.m == b.m == profile.m):
        raise ValueError("matrix and profile dimensions do not match")
    compare = _ROW_COMPARE[mode]
    return tuple(
        compare(profile.prefs[i], a.rows[i], b.rows[i]) for i in range(profile.n)
    )


def profile_dominance(
    a: AssignmentMatrix, b: AssignmentMatrix, profile: Profile, mode: str = "sd"
) -> Verdict:
    """Does one whole assignment dominate the other, agent by agent?

    First dominates when the matrices differ and every agent's own-row
    verdict is FIRST_DOMINATES or EQUAL; incomparable when agents disagree.
    """
    verdicts = row_verdicts(a, b, profile, mode)
    if a.rows == b.rows:
        return Verdict.EQUAL
    if all(v in (Verdict.FIRST_DOMINATES, Verdict.EQUAL) for v in verdicts):
        return Verdict.FIRST_DOMINATES
    if all(v in (Verdict.SECOND_DOMINATES, Verdict.EQUAL) for v in verdicts):
        return Verdict.SECOND_DOMINATES
    return Verdict.INCOMPARABLE


@dataclass(frozen=True)
class EnvyReport:
    """Per-agent envy flags for one assignment matrix.

    An agent is weakly envious when some other agent's row gives strictly
    more probability to one of her upper contour sets; she is ld-envious
    when some other row lexicographically dominates hers. ld-envy implies
    weak envy, and sd-envyfreeness is exactly the absence of weak envy.
    """

    weakly_envious: tuple
    ld_envious: tuple

    def __post_init__(self):
        assert all(
            not ld or weak for ld, weak in zip(self.ld_envious, self.weakly_envious)
        ), "ld-envy must imply weak envy"

    @property
    def sd_envyfree(self) -> tuple:
        return tuple(not w for w in self.weakly_envious)

    @property
    def envy_fraction(self):
        return Rat(sum(self.weakly_envious), len(self.weakly_envious))


def envy_report(matrix: AssignmentMatrix, profile: Profile) -> EnvyReport:
    if not (matrix.n == profile.n and matrix.m == profile.m):
        raise ValueError("matrix and profile dimensions do not match")
    n = profile.n
    weakly = []
    lexi = []
    for i in range(n):
        pref = profile.prefs[i]
        own = cumulative(pref, matrix.rows[i])
        weak = False
        ld = False
        for k in range(n):
            if k == i:
                continue
            other_row = matrix.rows[k]
            if not weak:
                other = cumulative(pref, other_row)
                weak = any(o > s for o, s in zip(other, own))
            if not ld:
                ld = ld_compare(pref, other_row, matrix.rows[i]) is Verdict.FIRST_DOMINATES
            if weak and ld:
                break
        weakly.append(weak)
        lexi.append(ld)
    return EnvyReport(weakly_envious=tuple(weakly), ld_envious=tuple(lexi))


def _common_prefix_len(p, q) -> int:
    k = 0
    for a, b in zip(p, q):
        if a != b:
            break
        k += 1
    return k


def _common_suffix_len(p, q) -> int:
    k = 0
    for a, b in zip(reversed(p), reversed(q)):
        if a != b:
            break
        k += 1
    return k


def dps_check(matrix: AssignmentMatrix, profile: Profile) -> bool:
    """Downward partial symmetry: agents sharing a preference prefix get
    identical probabilities on every object in that prefix."""
    if not (matrix.n == profile.n and matrix.m == profile.m):
        raise ValueError("matrix and profile dimensions do not match")
    for i in range(profile.n):
        for k in range(i + 1, profile.n):
            p, q = profile.prefs[i], profile.prefs[k]
            shared = _common_prefix_len(p, q)
            for obj in p[:shared]:
                if matrix.rows[i][obj] != matrix.rows[k][obj]:
                    return False
    return True


def ups_check(matrix: AssignmentMatrix, profile: Profile) -> bool:
    """Upward partial symmetry: same as DPS but on shared suffixes of the
    rankings (the least-preferred ends)."""
    if not (matrix.n == profile.n and matrix.m == profile.m):
        raise ValueError("matrix and profile dimensions do not match")
    for i in range(profile.n):
        for k in range(i + 1, profile.n):
            p, q = profile.prefs[i], profile.prefs[k]
            shared = _common_suffix_len(p, q)
            for obj in p[len(p) - shared:]:
                if matrix.rows[i][obj] != matrix.rows[k][obj]:
                    return False
    return True


def dps_reverse_check(matrix: AssignmentMatrix, profile: Profile) -> bool:
    """Diagnostic converse of DPS: once two agents' rankings part ways,
    their allocations must already differ within the disagreeing prefix.

    Not part of the DPS pass/fail test. Holds for RSD outputs when every
    dictator takes a single object (n >= m); with n < m the first dictator's
    multi-object take can give agents with different first choices identical
    rows (e.g. rankings (abc) and (bac) with two agents both yield
    (1/2, 1/2, 1/2)), so the converse genuinely fails there.
    """
    if not (matrix.n == profile.n and matrix.m == profile.m):
        raise ValueError("matrix and profile dimensions do not match")
    for i in range(profile.n):
        for k in range(profile.n):
            if k == i:
                continue
            p, q = profile.prefs[i], profile.prefs[k]
            shared = _common_prefix_len(p, q)
            if shared == len(p):
                continue
            head = p[: shared + 1]
            if all(matrix.rows[i][obj] == matrix.rows[k][obj] for obj in head):
                return False
    return True
