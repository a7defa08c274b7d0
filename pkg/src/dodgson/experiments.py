"""Batch studies: winner agreement, exact counting audits, certificate sweeps.

Trials are pure functions of (config, seed, trial index) and aggregation is a
deterministic fold in trial order, so a run replays bit-exactly and trials can
be generated independently.  Capability problems (an oracle or enumeration cap)
never down-scale a study silently: affected trials are counted as skips.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterator

from . import __version__
from .elections import (
    CapExceededError,
    VotingSituation,
    profile_to_situation,
    serialize_election,
)
from .engine import dodgson_score
from .generate import enumerate_situations, gen_iac, gen_ic, gen_pe
from .rules import (
    ALL_RULES,
    DEFINITELY,
    certificate_from_scores,
    certificate_verdict_fast,
    _scores_for_rule,
)

_RELAXATIONS = ("dc", "dr", "damp")


class SoundnessError(RuntimeError):
    """A Definitely verdict disagreed with the exact Dodgson winner."""

    def __init__(self, message: str, election_text: str):
        super().__init__(message + "\n" + election_text)
        self.election_text = election_text


@dataclass(frozen=True)
class ExperimentConfig:
    model: str  # "ic" | "iac" | "pe"
    m: int
    ns: tuple[int, ...]
    trials: int
    rules: tuple[str, ...]
    seed: int
    a: int = 0  # urn reinforcement, pe only
    dodgson_backend: str = "auto"

    def __post_init__(self):
        if self.model not in ("ic", "iac", "pe"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        unknown = [r for r in self.rules if r not in ALL_RULES]
        if unknown:
            raise ValueError(f"unknown rules {unknown}")
        object.__setattr__(self, "ns", tuple(self.ns))
        object.__setattr__(self, "rules", tuple(self.rules))

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        raw = json.loads(text)
        return cls(
            model=raw["model"],
            m=int(raw["m"]),
            ns=tuple(int(v) for v in raw["ns"]),
            trials=int(raw["trials"]),
            rules=tuple(raw["rules"]),
            seed=int(raw["seed"]),
            a=int(raw.get("a", 0)),
            dodgson_backend=raw.get("dodgson_backend", "auto"),
        )


def trial_election(cfg: ExperimentConfig, n_index: int, trial: int) -> VotingSituation:
    """The election of one trial; stream index is n_index * trials + trial."""
    n = cfg.ns[n_index]
    t = n_index * cfg.trials + trial
    if cfg.model == "ic":
        return profile_to_situation(gen_ic(cfg.m, n, cfg.seed, trial=t))
    if cfg.model == "iac":
        return gen_iac(cfg.m, n, cfg.seed, trial=t)
    return gen_pe(cfg.m, n, cfg.seed, a=cfg.a, trial=t)


def _trial_scores(e: VotingSituation, rules: tuple[str, ...], backend: str) -> dict[str, list]:
    scores: dict[str, list] = {}
    for r in ALL_RULES:
        if r not in rules:
            continue
        if r == "damp" and "dr" in scores:
            scores[r] = [math.ceil(v) for v in scores["dr"]]
        elif r == "dodgson":
            scores[r] = _scores_for_rule(e, r, backend)
        else:
            scores[r] = _scores_for_rule(e, r)
    return scores


def _argmin_set(scores: list) -> frozenset[int]:
    lo = min(scores)
    return frozenset(a for a, s in enumerate(scores) if s == lo)


def _gap(scores: list) -> Fraction:
    if len(scores) < 2:
        return Fraction(0)
    lo = sorted(scores)
    return Fraction(lo[1]) - Fraction(lo[0])


@dataclass
class AgreementRow:
    """Aggregate of one electorate size within an agreement study."""

    n: int
    trials: int
    skips: int = 0
    disagree: dict = field(default_factory=dict)  # (rule1, rule2) -> count
    resolute_disagree: dict = field(default_factory=dict)  # same pairs, resolute
    relaxations_vs_dodgson: int = 0  # trials where any of dc/dr/damp differs from dodgson
    ties: dict = field(default_factory=dict)  # rule -> count of tied winner sets
    definitely: int = 0
    gap_total: dict = field(default_factory=dict)  # rule -> summed gap (Fraction)

    def disagree_fraction(self, r1: str, r2: str) -> Fraction:
        key = (r1, r2) if (r1, r2) in self.disagree else (r2, r1)
        return Fraction(self.disagree[key], self.trials)

    def resolute_fraction(self, r1: str, r2: str) -> Fraction:
        key = (r1, r2) if (r1, r2) in self.resolute_disagree else (r2, r1)
        return Fraction(self.resolute_disagree[key], self.trials)

    def mean_gap(self, rule: str) -> Fraction:
        return self.gap_total[rule] / self.trials


def agreement_study(cfg: ExperimentConfig) -> Iterator[AgreementRow]:
    """Per-n winner agreement rates across the configured rules.

    Two disagreement counters are kept per rule pair.  `disagree` is
    winner-set inequality, the strict reading: a different set of tied
    winners counts even when the sets overlap.  `resolute_disagree` compares
    one deterministic representative per rule (the first-listed alternative
    of the tie set), the convention of resolute implementations that pick a
    single winner.
    """
    pairs = [
        (r1, r2)
        for i, r1 in enumerate(cfg.rules)
        for r2 in cfg.rules[i + 1 :]
    ]
    for n_index in range(len(cfg.ns)):
        row = AgreementRow(n=cfg.ns[n_index], trials=cfg.trials)
        row.disagree = {p: 0 for p in pairs}
        row.resolute_disagree = {p: 0 for p in pairs}
        row.ties = {r: 0 for r in cfg.rules}
        row.gap_total = {r: Fraction(0) for r in cfg.rules}
        relax = [r for r in _RELAXATIONS if r in cfg.rules]
        for t in range(cfg.trials):
            e = trial_election(cfg, n_index, t)
            try:
                scores = _trial_scores(e, cfg.rules, cfg.dodgson_backend)
            except CapExceededError:
                row.skips += 1
                continue
            wins = {r: _argmin_set(s) for r, s in scores.items()}
            for r1, r2 in pairs:
                if wins[r1] != wins[r2]:
                    row.disagree[(r1, r2)] += 1
                if min(wins[r1]) != min(wins[r2]):
                    row.resolute_disagree[(r1, r2)] += 1
            if "dodgson" in wins and relax:
                if any(wins[r] != wins["dodgson"] for r in relax):
                    row.relaxations_vs_dodgson += 1
            for r in cfg.rules:
                if len(wins[r]) > 1:
                    row.ties[r] += 1
                row.gap_total[r] += _gap(scores[r])
            if "dc" in scores:
                cert = certificate_from_scores(scores["dc"], e.m)
                if cert.verdict == DEFINITELY:
                    row.definitely += 1
            elif certificate_verdict_fast(e) == DEFINITELY:
                row.definitely += 1
        yield row


def agreement_csv(rows: list[AgreementRow], cfg: ExperimentConfig) -> str:
    pairs = list(rows[0].disagree) if rows else []
    header = ["n", "trials", "skips", "definitely", "relaxations_vs_dodgson"]
    header += [f"disagree_{a}_vs_{b}" for a, b in pairs]
    header += [f"resolute_{a}_vs_{b}" for a, b in pairs]
    header += [f"ties_{r}" for r in cfg.rules]
    header += [f"mean_gap_{r}" for r in cfg.rules]
    lines = [",".join(header)]
    for row in rows:
        cells = [
            str(row.n),
            str(row.trials),
            str(row.skips),
            str(row.definitely),
            str(row.relaxations_vs_dodgson),
        ]
        cells += [str(row.disagree[p]) for p in pairs]
        cells += [str(row.resolute_disagree[p]) for p in pairs]
        cells += [str(row.ties[r]) for r in cfg.rules]
        cells += [str(row.mean_gap(r)) for r in cfg.rules]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_manifest(path: str, cfg: ExperimentConfig, kind: str) -> None:
    """Config + seed + code version, written alongside every output file."""
    manifest = {"kind": kind, "version": __version__, "config": asdict(cfg)}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def counting_bound(m: int, n: int) -> Fraction:
    """Ceiling on the share of situations with any fixed score difference."""
    big_m = math.factorial(m)
    return Fraction(big_m - 2, n + big_m - 2)


def counting_bound_table(
    m: int,
    n: int,
    ks: range,
    rules: tuple[str, ...] = ("tideman", "dodgson"),
    cap: int = 10**6,
) -> tuple[dict, int]:
    """Exact census of score differences over every voting situation.

    Returns ({(a, z, rule, k): count}, total situations).  Requires m >= 3;
    with two alternatives the bound degenerates to zero.
    """
    if m < 3:
        raise ValueError("counting audit requires m >= 3")
    counts: dict = {}
    total = 0
    for e in enumerate_situations(m, n, cap):
        total += 1
        per_rule: dict[str, list] = {}
        for rule in rules:
            if rule == "tideman":
                per_rule[rule] = _scores_for_rule(e, "tideman")
            elif rule == "dodgson":
                per_rule[rule] = [dodgson_score(e, d) for d in range(m)]
            else:
                raise ValueError(f"audit rule must be tideman or dodgson, not {rule!r}")
        for a in range(m):
            for z in range(m):
                if a == z:
                    continue
                for rule in rules:
                    k = per_rule[rule][a] - per_rule[rule][z]
                    if k in ks:
                        key = (a, z, rule, k)
                        counts[key] = counts.get(key, 0) + 1
    return counts, total


def counting_bound_audit(
    m: int, n: int, k: int, pair: tuple[int, int], rule: str, cap: int = 10**6
) -> tuple[Fraction, Fraction]:
    """(measured fraction of situations with score difference k, bound)."""
    counts, total = counting_bound_table(m, n, range(k, k + 1), (rule,), cap)
    hit = counts.get((pair[0], pair[1], rule, k), 0)
    return Fraction(hit, total), counting_bound(m, n)


@dataclass
class CertificateRow:
    n: int
    trials: int
    definitely: int
    skips: int = 0

    @property
    def definitely_rate(self) -> Fraction:
        return Fraction(self.definitely, self.trials)


def check_certificate_soundness(e: VotingSituation, backend: str = "auto") -> bool:
    """Definitely implies DC winners = Dodgson winners = one alternative.

    Returns True when the verdict was Definitely (and the check passed);
    raises SoundnessError with the offending election otherwise.
    """
    scores = _scores_for_rule(e, "dc")
    cert = certificate_from_scores(scores, e.m)
    if cert.verdict != DEFINITELY:
        return False
    dc_winners = _argmin_set(scores)
    dodgson = [dodgson_score(e, d, backend=backend) for d in range(e.m)]
    dodgson_winners = _argmin_set(dodgson)
    if dc_winners != dodgson_winners or len(dc_winners) != 1:
        raise SoundnessError(
            "certificate said Definitely but winners differ "
            f"(dc={sorted(dc_winners)}, dodgson={sorted(dodgson_winners)})",
            serialize_election(e),
        )
    return True


def certificate_sweep(cfg: ExperimentConfig) -> list[CertificateRow]:
    """Definitely-rate per n; every Definitely is verified against exact
    Dodgson and any violation aborts with the offending election attached."""
    out = []
    for n_index in range(len(cfg.ns)):
        row = CertificateRow(n=cfg.ns[n_index], trials=cfg.trials, definitely=0)
        for t in range(cfg.trials):
            e = trial_election(cfg, n_index, t)
            try:
                if check_certificate_soundness(e, cfg.dodgson_backend):
                    row.definitely += 1
            except CapExceededError:
                row.skips += 1
        out.append(row)
    return out


def certificate_csv(rows: list[CertificateRow]) -> str:
    lines = ["n,trials,skips,definitely"]
    for r in rows:
        lines.append(f"{r.n},{r.trials},{r.skips},{r.definitely}")
    return "\n".join(lines) + "\n"
