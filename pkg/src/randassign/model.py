"""Problem-instance types and the profile space.

A problem instance pairs n agents with m indivisible objects; each agent
reports a strict complete ranking of all objects. Objects and agents are
dense integer indices internally; symbolic object names appear only in the
text/JSON formats. The profile space of size (m!)^n can be enumerated in a
fixed order, addressed by index, or sampled uniformly.
"""

import hashlib
import itertools
import json
import random
import string
from dataclasses import dataclass
from math import factorial

from .rational import ONE, Rat, ZERO

# A preference order is a tuple of object indices, most preferred first.
PreferenceOrder = tuple
# A priority ordering is a permutation of agent indices, first dictator first.
PriorityOrdering = tuple

DEFAULT_ENUMERATION_CAP = 10_000_000


class RandAssignError(Exception):
    """Base class for package errors."""


class ProfileParseError(RandAssignError):
    """Malformed profile input; carries the 1-based offending line when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapExceededError(RandAssignError):
    """A combinatorial sweep would exceed its configured size cap."""


def default_object_names(m: int) -> tuple:
    """Letter names a, b, c, ... for small m; o0, o1, ... beyond z."""
    if m <= 26:
        return tuple(string.ascii_lowercase[:m])
    return tuple(f"o{j}" for j in range(m))


@dataclass(frozen=True)
class Profile:
    """Strict complete preference orders of n agents over m objects.

    ``prefs[i]`` is agent i's ranking as a tuple of object indices, most
    preferred first; every ranking must be a permutation of range(m).
    ``object_names`` fixes the external name of each object index (and thus
    the column order of assignment matrices).
    """

    prefs: tuple
    object_names: tuple = ()

    def __post_init__(self):
        if not self.prefs:
            raise ValueError("profile needs at least one agent")
        prefs = tuple(tuple(p) for p in self.prefs)
        object.__setattr__(self, "prefs", prefs)
        m = len(prefs[0])
        if m < 1:
            raise ValueError("profile needs at least one object")
        names = tuple(self.object_names) or default_object_names(m)
        object.__setattr__(self, "object_names", names)
        if len(names) != m or len(set(names)) != m:
            raise ValueError("object_names must be m distinct names")
        expected = frozenset(range(m))
        for i, pref in enumerate(prefs):
            if len(pref) != m or set(pref) != expected:
                raise ValueError(
                    f"agent {i}: ranking must be a permutation of all {m} objects"
                )

    @property
    def n(self) -> int:
        return len(self.prefs)

    @property
    def m(self) -> int:
        return len(self.prefs[0])

    @classmethod
    def from_names(cls, rankings, object_names=None) -> "Profile":
        """Build a profile from rankings given as object-name sequences.

        When ``object_names`` is omitted, the universe is the sorted set of
        names in the first ranking (so letter examples get alphabetical
        column order).
        """
        rankings = [list(r) for r in rankings]
        if not rankings:
            raise ValueError("profile needs at least one agent")
        if object_names is None:
            object_names = sorted(set(rankings[0]))
        index = {name: j for j, name in enumerate(object_names)}
        prefs = []
        for i, ranking in enumerate(rankings):
            try:
                prefs.append(tuple(index[name] for name in ranking))
            except KeyError as exc:
                raise ValueError(f"agent {i}: unknown object {exc.args[0]!r}") from None
        return cls(prefs=tuple(prefs), object_names=tuple(object_names))

    def pref_names(self, agent: int) -> tuple:
        """Agent's ranking as object names, most preferred first."""
        return tuple(self.object_names[j] for j in self.prefs[agent])

    def replace_pref(self, agent: int, pref) -> "Profile":
        """Copy of the profile with one agent's ranking swapped out."""
        prefs = list(self.prefs)
        prefs[agent] = tuple(pref)
        return Profile(prefs=tuple(prefs), object_names=self.object_names)


def rank(pref, obj: int) -> int:
    """0-based position of ``obj`` in the ranking (0 = most preferred)."""
    try:
        return pref.index(obj)
    except ValueError:
        raise ValueError(f"object {obj} does not appear in the preference order") from None


def upper_contour(pref, obj: int) -> frozenset:
    """All objects weakly preferred to ``obj``, including ``obj`` itself."""
    return frozenset(pref[: rank(pref, obj) + 1])


@dataclass(frozen=True)
class AssignmentMatrix:
    """n x m matrix of exact rational assignment probabilities.

    Row i is agent i's allocation; column j is object j's split across
    agents. Feasible matrices have entries in [0, 1], column sums exactly 1,
    and row sums exactly m/n (each agent expects m/n objects in total).
    """

    rows: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "rows", tuple(tuple(Rat(x) for x in row) for row in self.rows)
        )
        if not self.rows or not self.rows[0]:
            raise ValueError("matrix must be non-empty")
        m = len(self.rows[0])
        if any(len(row) != m for row in self.rows):
            raise ValueError("all rows must have equal length")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0])

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def column_sum(self, j: int):
        return sum((row[j] for row in self.rows), ZERO)

    def row_sum(self, i: int):
        return sum(self.rows[i], ZERO)


@dataclass(frozen=True)
class Violation:
    """First feasibility violation found by :func:`validate`."""

    kind: str  # "entry-range" | "column-sum" | "row-sum"
    index: int  # offending row (entry-range, row-sum) or column (column-sum)
    detail: str

    def __str__(self):
        return f"{self.kind} at index {self.index}: {self.detail}"


def validate(matrix: AssignmentMatrix) -> Violation | None:
    """Check feasibility: entries in [0,1], column sums 1, row sums m/n.

    Returns None when the matrix is feasible, otherwise the first violation
    in row-major scan order (entry bounds, then column sums, then row sums).
    """
    n, m = matrix.n, matrix.m
    for i, row in enumerate(matrix.rows):
        for j, x in enumerate(row):
            if x < ZERO or x > ONE:
                return Violation("entry-range", i, f"entry ({i},{j}) = {x} outside [0,1]")
    for j in range(m):
        total = matrix.column_sum(j)
        if total != ONE:
            return Violation("column-sum", j, f"column {j} sums to {total}, expected 1")
    expected = Rat(m, n)
    for i in range(n):
        total = matrix.row_sum(i)
        if total != expected:
            return Violation("row-sum", i, f"row {i} sums to {total}, expected {expected}")
    return None


def profile_count(n: int, m: int) -> int:
    """Size of the profile space, (m!)^n."""
    return factorial(m) ** n


def enumerate_profiles(n: int, m: int, cap: int = DEFAULT_ENUMERATION_CAP):
    """Yield all (m!)^n profiles exactly once, in index order.

    Rankings are ordered lexicographically (Lehmer-code order) and profiles
    agent-major: agent 0's ranking is the most significant digit, so the
    stream order matches :func:`profile_from_index`.
    """
    total = profile_count(n, m)
    if total > cap:
        raise CapExceededError(
            f"(m!)^n = {total} profiles exceeds the enumeration cap {cap}; "
            "use sample_profile instead"
        )
    names = default_object_names(m)

    def gen():
        perms = list(itertools.permutations(range(m)))
        for combo in itertools.product(perms, repeat=n):
            yield Profile(prefs=combo, object_names=names)

    return gen()


def permutation_from_index(m: int, index: int) -> tuple:
    """The ``index``-th permutation of range(m) in lexicographic order."""
    if not 0 <= index < factorial(m):
        raise ValueError(f"permutation index {index} out of range for m={m}")
    items = list(range(m))
    out = []
    f = factorial(m)
    for left in range(m, 0, -1):
        f //= left
        pos, index = divmod(index, f)
        out.append(items.pop(pos))
    return tuple(out)


def profile_from_index(n: int, m: int, index: int) -> Profile:
    """The ``index``-th profile in the enumeration order (agent-major)."""
    total = profile_count(n, m)
    if not 0 <= index < total:
        raise ValueError(f"profile index {index} out of range for (n,m)=({n},{m})")
    base = factorial(m)
    digits = []
    for _ in range(n):
        index, d = divmod(index, base)
        digits.append(d)
    digits.reverse()
    prefs = tuple(permutation_from_index(m, d) for d in digits)
    return Profile(prefs=prefs, object_names=default_object_names(m))


def sample_profile(n: int, m: int, rng: random.Random, object_names=None) -> Profile:
    """Uniform profile: each agent's ranking is an iid uniform permutation."""
    prefs = []
    for _ in range(n):
        order = list(range(m))
        rng.shuffle(order)
        prefs.append(tuple(order))
    return Profile(
        prefs=tuple(prefs),
        object_names=tuple(object_names) if object_names else default_object_names(m),
    )


def derive_seed(master_seed: int, *components) -> int:
    """Stable per-task seed from a master seed plus task coordinates.

    SHA-256 based, so results are identical across platforms and independent
    of the order tasks are executed in.
    """
    payload = ":".join(str(c) for c in (master_seed, *components)).encode()
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")


def derive_rng(master_seed: int, *components) -> random.Random:
    return random.Random(derive_seed(master_seed, *components))


# ---------------------------------------------------------------------------
# Profile serialization.
#
# Text format: first line "n m", then n lines each holding a space-separated
# permutation of the object names. Column order is the sorted name order.
# JSON format: {"agents": n, "objects": [names...], "prefs": [[names...]...]}
# with the explicit objects list fixing the column order.
# ---------------------------------------------------------------------------


def parse_profile_text(text: str) -> Profile:
    lines = text.splitlines()
    stripped = [(i + 1, ln.strip()) for i, ln in enumerate(lines)]
    rows = [(no, ln) for no, ln in stripped if ln and not ln.startswith("#")]
    if not rows:
        raise ProfileParseError("empty profile file")
    head_no, head = rows[0]
    parts = head.split()
    if len(parts) != 2:
        raise ProfileParseError("expected header 'n m'", line=head_no)
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ProfileParseError("expected header 'n m' with integers", line=head_no) from None
    if n < 1 or m < 1:
        raise ProfileParseError("n and m must be >= 1", line=head_no)
    body = rows[1:]
    if len(body) != n:
        raise ProfileParseError(
            f"expected {n} ranking lines, found {len(body)}", line=head_no
        )
    rankings = []
    for no, ln in body:
        names = ln.split()
        if len(names) != m:
            raise ProfileParseError(
                f"ranking has {len(names)} entries, expected {m}", line=no
            )
        if len(set(names)) != m:
            dup = next(x for x in names if names.count(x) > 1)
            raise ProfileParseError(f"duplicate object {dup!r} in ranking", line=no)
        rankings.append(names)
    universe = sorted(set(rankings[0]))
    for no, ranking in zip((no for no, _ in body), rankings):
        if sorted(set(ranking)) != universe:
            raise ProfileParseError(
                "ranking does not cover the same objects as the first agent", line=no
            )
    try:
        return Profile.from_names(rankings, object_names=universe)
    except ValueError as exc:
        raise ProfileParseError(str(exc)) from None


def parse_profile_json(text: str) -> Profile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileParseError(f"invalid JSON: {exc}") from None
    for key in ("agents", "objects", "prefs"):
        if key not in doc:
            raise ProfileParseError(f"missing field {key!r}")
    objects = list(doc["objects"])
    prefs = doc["prefs"]
    if len(prefs) != doc["agents"]:
        raise ProfileParseError(
            f"'agents' is {doc['agents']} but 'prefs' has {len(prefs)} rankings"
        )
    for i, ranking in enumerate(prefs):
        if len(ranking) != len(objects) or set(ranking) != set(objects):
            raise ProfileParseError(
                f"agent {i}: ranking must be a permutation of the objects list"
            )
    try:
        return Profile.from_names(prefs, object_names=objects)
    except ValueError as exc:
        raise ProfileParseError(str(exc)) from None


def parse_profile(text: str) -> Profile:
    """Parse either format, sniffing JSON by a leading brace."""
    if text.lstrip().startswith("{"):
        return parse_profile_json(text)
    return parse_profile_text(text)


def load_profile(path) -> Profile:
    with open(path, encoding="utf-8") as fh:
        return parse_profile(fh.read())


def profile_to_text(profile: Profile) -> str:
    lines = [f"{profile.n} {profile.m}"]
    for i in range(profile.n):
        lines.append(" ".join(profile.pref_names(i)))
    return "\n".join(lines) + "\n"


def profile_to_json(profile: Profile) -> str:
    doc = {
        "agents": profile.n,
        "objects": list(profile.object_names),
        "prefs": [list(profile.pref_names(i)) for i in range(profile.n)],
    }
    return json.dumps(doc, indent=2) + "\n"
