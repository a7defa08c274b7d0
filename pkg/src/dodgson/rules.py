"""Closed-form scores, winner sets, score reports and the gap certificate.

Winner convention: for every rule the winners are the alternatives with the
lowest score, returned as the full tie set; no tie-breaking ever happens here.

A note on Simpson: this package defines the Simpson score of a as the maximum
incoming advantage max_b adv(b, a) (a maximin-style reading).  That choice
makes the documented hierarchy Simpson <= Tideman literally true, since a
maximum of non-negative terms never exceeds their sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import engine
from .elections import VotingSituation, advantage_matrix

#: Rational upper bound on Euler's constant e, rounded up in the last digit.
#: The certificate threshold only needs *some* upper bound on e to stay sound,
#: because the underlying score-gap inequality is strict.
E_UPPER = Fraction(27_182_818_285, 10**10)

ALL_RULES = ("simpson", "tideman", "dq", "dc", "dr", "damp", "dodgson")

DEFINITELY = "definitely"
MAYBE = "maybe"


def simpson_score(e: VotingSituation, a: int) -> int:
    """Maximum incoming advantage (see module note on this definition)."""
    adv = advantage_matrix(e)
    return max((adv.adv(b, a) for b in range(e.m) if b != a), default=0)


def tideman_score(e: VotingSituation, a: int) -> int:
    """Sum of incoming advantages."""
    adv = advantage_matrix(e)
    return sum(adv.adv(b, a) for b in range(e.m) if b != a)


def dq_score(e: VotingSituation, a: int) -> int:
    """Sum of ceil(adv(b, a) / 2) over all rivals b."""
    adv = advantage_matrix(e)
    return sum(-(-adv.adv(b, a) // 2) for b in range(e.m) if b != a)


def _scores_for_rule(
    e: VotingSituation, rule: str, dodgson_backend: str = "auto"
) -> list:
    if rule == "simpson":
        adv = advantage_matrix(e)
        return [max(adv.incoming(a), default=0) for a in range(e.m)]
    if rule == "tideman":
        adv = advantage_matrix(e)
        return [sum(adv.incoming(a)) for a in range(e.m)]
    if rule == "dq":
        adv = advantage_matrix(e)
        return [sum(-(-v // 2) for v in adv.incoming(a)) for a in range(e.m)]
    if rule == "dc":
        return [engine.dc_score(e, a) for a in range(e.m)]
    if rule == "dr":
        return [engine.dr_score(e, a) for a in range(e.m)]
    if rule == "damp":
        return [math.ceil(engine.dr_score(e, a)) for a in range(e.m)]
    if rule == "dodgson":
        return [engine.dodgson_score(e, a, backend=dodgson_backend) for a in range(e.m)]
    raise ValueError(f"unknown rule {rule!r}")


def winners(e: VotingSituation, rule: str, dodgson_backend: str = "auto") -> frozenset[int]:
    """Argmin set of the rule's scores; computes all m scores."""
    scores = _scores_for_rule(e, rule, dodgson_backend)
    lo = min(scores)
    return frozenset(a for a, s in enumerate(scores) if s == lo)


def certificate_threshold(m: int) -> int:
    """Score gap above which the clone relaxation pins the Dodgson winner."""
    return math.ceil(math.factorial(m - 1) * (m - 1) * E_UPPER)


@dataclass(frozen=True)
class Certificate:
    verdict: str  # DEFINITELY or MAYBE
    gap: Fraction | None  # second-best minus best score of the basis rule
    winner: int | None  # unique basis-rule winner when Definitely


def certificate_from_scores(scores: list, m: int) -> Certificate:
    if m == 1:
        # a single alternative is trivially the Dodgson winner
        return Certificate(DEFINITELY, None, 0)
    order = sorted(range(m), key=lambda a: (scores[a], a))
    best, second = order[0], order[1]
    gap = Fraction(scores[second]) - Fraction(scores[best])
    unique = scores[second] != scores[best]
    if unique and gap >= certificate_threshold(m):
        return Certificate(DEFINITELY, gap, best)
    return Certificate(MAYBE, gap, None)


def certificate(e: VotingSituation, basis: str = "dc") -> Certificate:
    """Definitely/Maybe verdict from the gap of a relaxation's scores.

    The default basis is the clone relaxation; 'dr' and 'damp' are accepted
    and use the same threshold.
    """
    if basis not in ("dc", "dr", "damp"):
        raise ValueError(f"certificate basis must be dc, dr or damp, not {basis!r}")
    return certificate_from_scores(_scores_for_rule(e, basis), e.m)


def certificate_verdict_fast(e: VotingSituation, basis: str = "dc") -> str:
    """Certificate verdict, skipping the solve when no gap could reach the
    threshold (every score lies in [0, n*(m-1)], so neither can the gap)."""
    if e.m >= 2 and e.n * (e.m - 1) < certificate_threshold(e.m):
        return MAYBE
    return certificate(e, basis).verdict


@dataclass(frozen=True)
class ScoreReport:
    """Per-alternative scores for the requested rules, winners, certificate."""

    m: int
    n: int
    labels: tuple[str, ...]
    rules: tuple[str, ...]
    scores: dict[str, list]
    winner_sets: dict[str, frozenset[int]]
    certificate: Certificate | None

    def to_csv(self) -> str:
        cols = [r for r in ALL_RULES if r in self.rules]
        lines = ["alternative," + ",".join(cols)]
        for a in range(self.m):
            cells = [self.labels[a]]
            for r in cols:
                cells.append(str(self.scores[r][a]))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        cols = [r for r in ALL_RULES if r in self.rules]
        header = ["alternative"]
        for r in cols:
            header.append(r)
            if r in ("dc", "dr"):
                header.append(f"{r}~")
        body = []
        for a in range(self.m):
            row = [self.labels[a]]
            for r in cols:
                v = self.scores[r][a]
                row.append(str(v))
                if r in ("dc", "dr"):
                    row.append(f"{float(v):.6g}")
            body.append(row)
        widths = [max(len(h), *(len(row[i]) for row in body)) for i, h in enumerate(header)]
        out = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
        for row in body:
            out.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        winner_lines = []
        for r in cols:
            labs = sorted(self.labels[a] for a in self.winner_sets[r])
            winner_lines.append(f"{r} winner: " + " ".join(labs))
        cert = ""
        if self.certificate is not None:
            cert = f"certificate: {self.certificate.verdict}"
            if self.certificate.gap is not None:
                cert += f" (gap {self.certificate.gap})"
        return "\n".join(out + winner_lines + ([cert] if cert else [])) + "\n"


def compute_score_report(
    e: VotingSituation,
    rules: tuple[str, ...] = ALL_RULES,
    dodgson_backend: str = "auto",
) -> ScoreReport:
    for r in rules:
        if r not in ALL_RULES:
            raise ValueError(f"unknown rule {r!r}")
    scores: dict[str, list] = {}
    winner_sets: dict[str, frozenset[int]] = {}
    for r in ALL_RULES:
        if r not in rules:
            continue
        s = _scores_for_rule(e, r, dodgson_backend)
        scores[r] = s
        lo = min(s)
        winner_sets[r] = frozenset(a for a, v in enumerate(s) if v == lo)
    cert = certificate_from_scores(scores["dc"], e.m) if "dc" in scores else None
    return ScoreReport(e.m, e.n, e.labels, tuple(rules), scores, winner_sets, cert)
