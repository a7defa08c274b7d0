"""Election data model: ballots, profiles, voting situations, advantages.

A ballot is a strict linear order over m alternatives, stored as a tuple of
alternative indices, best first.  A Profile keeps one ballot per agent; a
VotingSituation is the anonymous multiset (ballot -> count).  All types are
immutable after construction and every operation here is a pure function, so
everything is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

LinearOrder = tuple[int, ...]


class ParseError(ValueError):
    """Raised on malformed election files; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CapExceededError(RuntimeError):
    """Raised when an enumeration or search exceeds its configured cap."""


def default_labels(m: int) -> tuple[str, ...]:
    """Deterministic labels for generated elections: a..z, then c0, c1, ..."""
    if m <= 26:
        return tuple(string.ascii_lowercase[:m])
    return tuple(f"c{i}" for i in range(m))


def _check_ranking(ranking: LinearOrder, m: int) -> None:
    if sorted(ranking) != list(range(m)):
        raise ValueError(f"ballot {ranking!r} is not a permutation of 0..{m - 1}")


def _check_labels(labels: tuple[str, ...]) -> None:
    seen = set()
    for lab in labels:
        if not lab or ":" in lab or any(c.isspace() for c in lab):
            raise ValueError(f"invalid alternative label {lab!r}")
        if lab in seen:
            raise ValueError(f"duplicate alternative label {lab!r}")
        seen.add(lab)


@dataclass(frozen=True)
class Alternative:
    """One alternative: its index in the declared list and its display label."""

    index: int
    label: str


@dataclass(frozen=True)
class Profile:
    """Agent-indexed election: one linear order per agent."""

    m: int
    votes: tuple[LinearOrder, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one alternative")
        if not self.votes:
            raise ValueError("a profile needs at least one agent")
        if not self.labels:
            object.__setattr__(self, "labels", default_labels(self.m))
        _check_labels(self.labels)
        if len(self.labels) != self.m:
            raise ValueError("label count does not match m")
        for v in self.votes:
            _check_ranking(v, self.m)

    @property
    def n(self) -> int:
        return len(self.votes)


@dataclass(frozen=True)
class VotingSituation:
    """Anonymous election: multiset of linear orders with positive counts."""

    m: int
    counts: Mapping[LinearOrder, int]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one alternative")
        if not self.counts:
            raise ValueError("an election needs at least one ballot")
        if not self.labels:
            object.__setattr__(self, "labels", default_labels(self.m))
        _check_labels(self.labels)
        if len(self.labels) != self.m:
            raise ValueError("label count does not match m")
        for ranking, count in self.counts.items():
            _check_ranking(ranking, self.m)
            if count <= 0:
                raise ValueError(f"non-positive count {count} for ballot {ranking!r}")
        object.__setattr__(self, "counts", dict(self.counts))

    @property
    def n(self) -> int:
        return sum(self.counts.values())

    @property
    def alternatives(self) -> tuple[Alternative, ...]:
        return tuple(Alternative(i, lab) for i, lab in enumerate(self.labels))

    def alternative(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown alternative {label!r}") from None

    def ballot_labels(self, ranking: LinearOrder) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in ranking)


@dataclass(frozen=True)
class VotingRatio:
    """Ballot-frequency vector: weights over linear orders summing to one."""

    m: int
    weights: Mapping[LinearOrder, Fraction]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", default_labels(self.m))
        _check_labels(self.labels)
        total = Fraction(0)
        for ranking, w in self.weights.items():
            _check_ranking(ranking, self.m)
            if not 0 <= w <= 1:
                raise ValueError(f"weight {w} outside [0, 1]")
            total += w
        if total != 1:
            raise ValueError(f"weights sum to {total}, expected 1")
        object.__setattr__(self, "weights", dict(self.weights))

    def realize(self, n: int) -> VotingSituation:
        """The voting situation with n agents reducing to this ratio.

        Every weight times n must be an integer, otherwise no profile with
        n agents reduces to the ratio.
        """
        counts: dict[LinearOrder, int] = {}
        for ranking, w in self.weights.items():
            c = w * n
            if c.denominator != 1:
                raise ValueError(f"n={n} does not realize weight {w} integrally")
            if c > 0:
                counts[ranking] = int(c)
        return VotingSituation(self.m, counts, self.labels)


@dataclass(frozen=True)
class AdvantageMatrix:
    """Pairwise advantages adv(a, b) = max(0, n_ab - n_ba), diagonal zero."""

    m: int
    n: int
    entries: tuple[tuple[int, ...], ...]

    def adv(self, a: int, b: int) -> int:
        return self.entries[a][b]

    def incoming(self, a: int) -> list[int]:
        """adv(b, a) for every rival b, in index order (a's own slot is 0)."""
        return [self.entries[b][a] for b in range(self.m)]


@dataclass(frozen=True)
class DEquivClassTable:
    """Ballots grouped by the sequence of alternatives ranked above the focus.

    Keys are the above-focus prefixes (top first, focus excluded); the focus
    alternative sits at position len(prefix) in every ballot of the class.
    """

    m: int
    focus: int
    classes: Mapping[LinearOrder, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "classes", dict(self.classes))

    @property
    def n(self) -> int:
        return sum(self.classes.values())


def advantage_matrix(e: VotingSituation) -> AdvantageMatrix:
    """Pairwise advantage counts over all ballots with multiplicity."""
    m = e.m
    above = [[0] * m for _ in range(m)]  # above[a][b] = # ballots ranking a over b
    for ranking, count in e.counts.items():
        for i in range(m):
            for j in range(i + 1, m):
                above[ranking[i]][ranking[j]] += count
    entries = tuple(
        tuple(max(0, above[a][b] - above[b][a]) for b in range(m)) for a in range(m)
    )
    return AdvantageMatrix(m, e.n, entries)


def condorcet_tie_winners(e: VotingSituation) -> set[int]:
    """Alternatives with zero incoming advantage from every rival (may be empty)."""
    adv = advantage_matrix(e)
    return {
        a
        for a in range(e.m)
        if all(adv.adv(b, a) == 0 for b in range(e.m) if b != a)
    }


def clone_electorate(e: VotingSituation, k: int) -> VotingSituation:
    """Replace every agent with k identical clones."""
    if k < 1:
        raise ValueError("clone factor must be a positive integer")
    if k == 1:
        return e
    return VotingSituation(e.m, {r: c * k for r, c in e.counts.items()}, e.labels)


def d_equiv_reduce(e: VotingSituation, d: int) -> DEquivClassTable:
    """Group ballots that share the same above-d prefix (including d's position)."""
    if not 0 <= d < e.m:
        raise ValueError(f"alternative index {d} out of range")
    classes: dict[LinearOrder, int] = {}
    for ranking, count in e.counts.items():
        prefix = ranking[: ranking.index(d)]
        classes[prefix] = classes.get(prefix, 0) + count
    return DEquivClassTable(e.m, d, classes)


def profile_to_situation(p: Profile) -> VotingSituation:
    counts: dict[LinearOrder, int] = {}
    for v in p.votes:
        counts[v] = counts.get(v, 0) + 1
    return VotingSituation(p.m, counts, p.labels)


def situation_to_profile(e: VotingSituation) -> Profile:
    """Expand to a profile; agents ordered by ballot lexicographic order."""
    votes: list[LinearOrder] = []
    for ranking in sorted(e.counts):
        votes.extend([ranking] * e.counts[ranking])
    return Profile(e.m, tuple(votes), e.labels)


def parse_election(text: str | bytes) -> VotingSituation:
    """Parse the line-oriented election format.

    Comment lines start with '#'.  The first payload line is
    ``alternatives: <label> ...``; every further payload line is
    ``<positive count> : <label> ... <label>`` listing all m labels best
    first.  Ballot lines with equal orders are merged by summing counts.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    labels: tuple[str, ...] | None = None
    index: dict[str, int] = {}
    counts: dict[LinearOrder, int] = {}
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if labels is None:
            head, sep, rest = line.partition(":")
            if head.strip() != "alternatives" or not sep:
                raise ParseError("expected 'alternatives: <label> ...'", lineno)
            labels = tuple(rest.split())
            if not labels:
                raise ParseError("empty alternative list", lineno)
            try:
                _check_labels(labels)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            index = {lab: i for i, lab in enumerate(labels)}
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ParseError("missing ':' between count and ballot", lineno)
        try:
            count = int(head.strip())
        except ValueError:
            raise ParseError(f"bad ballot count {head.strip()!r}", lineno) from None
        if count <= 0:
            raise ParseError(f"non-positive ballot count {count}", lineno)
        toks = rest.split()
        ranking: list[int] = []
        seen: set[str] = set()
        for tok in toks:
            if tok not in index:
                raise ParseError(f"unknown alternative {tok!r}", lineno)
            if tok in seen:
                raise ParseError(f"duplicate alternative {tok!r} in ballot", lineno)
            seen.add(tok)
            ranking.append(index[tok])
        if len(ranking) != len(labels):
            missing = sorted(set(labels) - seen)
            raise ParseError(f"ballot missing alternatives {missing}", lineno)
        key = tuple(ranking)
        counts[key] = counts.get(key, 0) + count
    if labels is None:
        raise ParseError("no 'alternatives:' line found", max(last_line, 1))
    if not counts:
        raise ParseError("no ballots found", last_line)
    return VotingSituation(len(labels), counts, labels)


def serialize_election(e: VotingSituation) -> str:
    """Inverse of parse_election; counts descending, ties lexicographic."""
    lines = ["alternatives: " + " ".join(e.labels)]
    order = sorted(e.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    for ranking, count in order:
        lines.append(f"{count}: " + " ".join(e.labels[i] for i in ranking))
    return "\n".join(lines) + "\n"


def elections_from_stream(text: str) -> Iterator[VotingSituation]:
    """Parse a multi-election stream with '---' separator lines."""
    chunk: list[str] = []
    for raw in text.splitlines():
        if raw.strip() == "---":
            if any(l.strip() and not l.strip().startswith("#") for l in chunk):
                yield parse_election("\n".join(chunk))
            chunk = []
        else:
            chunk.append(raw)
    if any(l.strip() and not l.strip().startswith("#") for l in chunk):
        yield parse_election("\n".join(chunk))
