"""The two random assignment mechanisms, computed exactly.

Both mechanisms map a preference profile to an n x m rational assignment
matrix. Serial dictatorship resolves one priority ordering greedily; RSD
averages it over all n! orderings (via a state-space dynamic program rather
than literal enumeration); PS simulates simultaneous eating in exact
rational time.

When objects outnumber agents, the first dictator in an ordering takes her
m-n+1 favourite objects and everyone later takes one; when agents outnumber
objects, dictators beyond the m-th receive nothing. Either way every object
is fully assigned and every agent's expected total is m/n.
"""

import itertools
from math import factorial

from .model import AssignmentMatrix, CapExceededError, Profile
from .rational import ONE, Rat, ZERO

DEFAULT_RSD_AGENT_LIMIT = 12
DEFAULT_BRUTEFORCE_AGENT_LIMIT = 8


def _first_take(n: int, m: int) -> int:
    return m - n + 1 if n < m else 1


def serial_dictatorship(profile: Profile, ordering) -> AssignmentMatrix:
    """Deterministic 0/1 assignment for one priority ordering.

    Dictators pick in order, each taking her most-preferred objects among
    those still available (the first takes m-n+1 of them when n < m).
    """
    n, m = profile.n, profile.m
    ordering = tuple(ordering)
    if sorted(ordering) != list(range(n)):
        raise ValueError("ordering must be a permutation of the agent indices")
    available = [True] * m
    left = m
    rows = [[ZERO] * m for _ in range(n)]
    for pos, agent in enumerate(ordering):
        if left == 0:
            break
        take = _first_take(n, m) if pos == 0 else 1
        got = 0
        for obj in profile.prefs[agent]:
            if available[obj]:
                available[obj] = False
                rows[agent][obj] = ONE
                left -= 1
                got += 1
                if got == take:
                    break
    return AssignmentMatrix(tuple(tuple(r) for r in rows))


def _rsd_rows(prefs, m: int):
    """Expected RSD allocation as a list of lists of rationals.

    Forward dynamic program over (remaining-agents, remaining-objects)
    bitmask states. The reach probability of a state splits evenly over its
    remaining agents; each agent's greedy picks are credited with that share
    and the successor state absorbs it. States where every object is gone
    are dropped: the agents still in them receive nothing.
    """
    n = len(prefs)
    rows = [[ZERO] * m for _ in range(n)]
    full_agents = (1 << n) - 1
    first_take = _first_take(n, m)
    level = {(full_agents, (1 << m) - 1): ONE}
    while level:
        nxt = {}
        for (amask, omask), p in level.items():
            if omask == 0:
                continue
            agents = [i for i in range(n) if amask >> i & 1]
            share = p / len(agents)
            take = first_take if amask == full_agents else 1
            for i in agents:
                taken = 0
                got = 0
                row = rows[i]
                for obj in prefs[i]:
                    if omask >> obj & 1:
                        row[obj] += share
                        taken |= 1 << obj
                        got += 1
                        if got == take:
                            break
                key = (amask & ~(1 << i), omask & ~taken)
                if key in nxt:
                    nxt[key] += share
                else:
                    nxt[key] = share
        level = nxt
    return rows


def rsd(profile: Profile, agent_limit: int = DEFAULT_RSD_AGENT_LIMIT) -> AssignmentMatrix:
    """Exact RSD assignment: the uniform average of serial dictatorship
    over all n! priority orderings."""
    if profile.n > agent_limit:
        raise CapExceededError(
            f"RSD state space grows too fast beyond n={agent_limit} agents "
            f"(got n={profile.n}); raise agent_limit explicitly to force it"
        )
    return AssignmentMatrix(tuple(tuple(r) for r in _rsd_rows(profile.prefs, profile.m)))


def rsd_bruteforce(
    profile: Profile, agent_limit: int = DEFAULT_BRUTEFORCE_AGENT_LIMIT
) -> AssignmentMatrix:
    """Oracle RSD: literally enumerate all n! orderings and average.

    Bit-identical to :func:`rsd`; exists so the dynamic program has an
    independent check.
    """
    n, m = profile.n, profile.m
    if n > agent_limit:
        raise CapExceededError(
            f"brute-force RSD enumerates n! orderings; n={n} exceeds limit {agent_limit}"
        )
    totals = [[ZERO] * m for _ in range(n)]
    for ordering in itertools.permutations(range(n)):
        outcome = serial_dictatorship(profile, ordering)
        for i in range(n):
            row = outcome.rows[i]
            trow = totals[i]
            for j in range(m):
                if row[j] is not ZERO:
                    trow[j] += row[j]
    count = factorial(n)
    return AssignmentMatrix(tuple(tuple(x / count for x in row) for row in totals))


def _ps_rows(prefs, m: int):
    """Simultaneous eating in exact rational time.

    Every agent eats her most-preferred unexhausted object at unit speed.
    Each event advances to the earliest exhaustion instant, credits all
    eaters, and retires every object that hits zero at that instant
    (simultaneous exhaustions retire together before anyone moves on).
    """
    n = len(prefs)
    remaining = [ONE] * m
    active = [True] * m
    cursor = [0] * n
    rows = [[ZERO] * m for _ in range(n)]
    active_count = m
    elapsed = ZERO
    while active_count:
        eaters = [0] * m
        target = [0] * n
        for i in range(n):
            pref = prefs[i]
            k = cursor[i]
            while not active[pref[k]]:
                k += 1
            cursor[i] = k
            j = pref[k]
            eaters[j] += 1
            target[i] = j
        dt = None
        for j in range(m):
            if eaters[j]:
                t = remaining[j] / eaters[j]
                if dt is None or t < dt:
                    dt = t
        for i in range(n):
            rows[i][target[i]] += dt
        for j in range(m):
            if eaters[j]:
                left = remaining[j] - dt * eaters[j]
                remaining[j] = left
                if left == ZERO:
                    active[j] = False
                    active_count -= 1
        elapsed += dt
    # Unit speeds and a simultaneous start force exhaustion at exactly m/n.
    assert elapsed == Rat(m, n)
    return rows


def ps(profile: Profile) -> AssignmentMatrix:
    """Exact PS assignment via the simultaneous eating simulation."""
    return AssignmentMatrix(tuple(tuple(r) for r in _ps_rows(profile.prefs, profile.m)))
