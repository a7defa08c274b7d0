"""Dodgson score family: exact Dodgson, DC, DR, D& and k-clone scores.

Everything is computed over d-equivalence classes: two ballots are
interchangeable for a focus alternative d when they rank the same sequence
of alternatives above d, because d is only ever swapped upward.  A lift of
j positions in a class whose above-d prefix is (c_1, ..., c_p) crosses the
j alternatives nearest d, i.e. c_p, c_{p-1}, ..., c_{p-j+1}.

Three independent backends compute the exact Dodgson score:

* ``ilp``        -- the lift-count program below, solved by exact-rational
                    branch and bound; handles any electorate size.
* ``search``     -- depth-first search over per-ballot lifts with sound
                    incumbent pruning; fast when there are few ballots.
* ``bruteforce`` -- plain exhaustive enumeration of every lift vector,
                    guarded by a cap on the product search space.  Kept
                    deliberately naive so it can serve as a test oracle.

All functions are pure; per-alternative computations are independent and may
run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .elections import (
    CapExceededError,
    LinearOrder,
    VotingSituation,
    advantage_matrix,
    clone_electorate,
    d_equiv_reduce,
)
from .lp import OPTIMAL, LpModel, LpSolution, solve_ilp, solve_lp

BRUTEFORCE_CAP = 10**6
SEARCH_NODE_CAP = 20_000_000
_AUTO_SEARCH_MAX_BALLOTS = 64


class ProgramMode(Enum):
    """Deficit convention of the lift-count program."""

    INTEGER_DODGSON = "integer-dodgson"
    CLONE_RELAXATION = "clone-relaxation"
    RELAXED_WITH_CEIL = "relaxed-with-ceil"


@dataclass(frozen=True)
class SwapVector:
    """Per-ballot lift amounts for a focus alternative; cost = total swaps."""

    focus: int
    lifts: tuple[int, ...]

    @property
    def cost(self) -> int:
        return sum(self.lifts)


@dataclass(frozen=True)
class DodgsonProgram:
    """The transformed lift-count program for one focus alternative.

    Variables y[i][j] count ballots of class i in which the focus is lifted
    at least j positions; y[i][0] is pinned to the class size, consecutive
    lift counts are chained (y[i][j] <= y[i][j-1]), and each rival k must be
    crossed at least ``deficits[k]`` times.
    """

    focus: int
    mode: ProgramMode
    classes: tuple[tuple[LinearOrder, int], ...]
    deficits: dict[int, Fraction]
    model: LpModel
    var_index: dict[tuple[int, int], int]


def deficit(e: VotingSituation, k: int, d: int) -> int:
    """Crossings of k needed before d ties-or-beats k: ceil(adv(k, d) / 2)."""
    if k == d:
        raise ValueError("deficit is defined for rivals only")
    adv = advantage_matrix(e).adv(k, d)
    return -(-adv // 2)


def build_program(e: VotingSituation, d: int, mode: ProgramMode) -> DodgsonProgram:
    if not 0 <= d < e.m:
        raise ValueError(f"alternative index {d} out of range")
    adv = advantage_matrix(e)
    classes = tuple(sorted(d_equiv_reduce(e, d).classes.items()))
    rivals = [k for k in range(e.m) if k != d]
    deficits: dict[int, Fraction] = {}
    for k in rivals:
        if mode is ProgramMode.CLONE_RELAXATION:
            deficits[k] = Fraction(adv.adv(k, d), 2)
        else:
            deficits[k] = Fraction(-(-adv.adv(k, d) // 2))

    var_index: dict[tuple[int, int], int] = {}
    for i, (prefix, _) in enumerate(classes):
        for j in range(len(prefix) + 1):
            var_index[(i, j)] = len(var_index)
    nvars = len(var_index)

    objective = [Fraction(0)] * nvars
    for (i, j), col in var_index.items():
        if j > 0:
            objective[col] = Fraction(1)

    rows = []
    for i, (prefix, count) in enumerate(classes):
        base = [Fraction(0)] * nvars
        base[var_index[(i, 0)]] = Fraction(1)
        rows.append((tuple(base), "=", Fraction(count)))
        for j in range(1, len(prefix) + 1):
            chain = [Fraction(0)] * nvars
            chain[var_index[(i, j)]] = Fraction(1)
            chain[var_index[(i, j - 1)]] = Fraction(-1)
            rows.append((tuple(chain), "<=", Fraction(0)))
    for k in rivals:
        cover = [Fraction(0)] * nvars
        for i, (prefix, _) in enumerate(classes):
            p = len(prefix)
            for j in range(1, p + 1):
                if prefix[p - j] == k:  # the j-th swap crosses this rival
                    cover[var_index[(i, j)]] = Fraction(1)
        rows.append((tuple(cover), ">=", deficits[k]))

    flags = [mode is ProgramMode.INTEGER_DODGSON] * nvars
    model = LpModel.build(objective, rows, integer=flags)
    return DodgsonProgram(d, mode, classes, deficits, model, var_index)


def dodgson_score_ilp(e: VotingSituation, d: int) -> int:
    """Exact Dodgson score via the integer lift-count program."""
    prog = build_program(e, d, ProgramMode.INTEGER_DODGSON)
    sol = solve_ilp(prog.model)
    if sol.status != OPTIMAL:
        raise RuntimeError(f"Dodgson program unexpectedly {sol.status}")
    assert sol.value.denominator == 1
    return int(sol.value)


def _expanded_prefixes(e: VotingSituation, d: int) -> list[LinearOrder]:
    """Above-d prefix of every individual ballot, sorted for determinism."""
    out: list[LinearOrder] = []
    for ranking, count in sorted(e.counts.items()):
        prefix = ranking[: ranking.index(d)]
        out.extend([prefix] * count)
    return out


def _needed(e: VotingSituation, d: int) -> dict[int, int]:
    adv = advantage_matrix(e)
    need = {}
    for k in range(e.m):
        if k != d:
            f = -(-adv.adv(k, d) // 2)
            if f > 0:
                need[k] = f
    return need


def dodgson_score_bruteforce(
    e: VotingSituation, d: int, cap: int = BRUTEFORCE_CAP
) -> int:
    """Exhaustive oracle: try every per-ballot lift vector.

    The full product space of lift amounts is enumerated, so the guard
    refuses inputs where prod(position of d + 1) over ballots exceeds cap.
    """
    prefixes = _expanded_prefixes(e, d)
    space = 1
    for prefix in prefixes:
        space *= len(prefix) + 1
        if space > cap:
            raise CapExceededError(
                f"lift space {space}+ exceeds cap {cap}: too large for oracle"
            )
    need = _needed(e, d)
    if not need:
        return 0
    rivals = sorted(need)
    slot = {k: t for t, k in enumerate(rivals)}
    # crossings[i][j] = rival slots crossed when ballot i is lifted j positions
    crossings: list[list[list[int]]] = []
    for prefix in prefixes:
        p = len(prefix)
        per = [[]]
        for j in range(1, p + 1):
            step = list(per[j - 1])
            if prefix[p - j] in slot:
                step.append(slot[prefix[p - j]])
            per.append(step)
        crossings.append(per)

    rem = [need[k] for k in rivals]
    best = math.inf

    def walk(i: int, cost: int) -> None:
        nonlocal best
        if all(r <= 0 for r in rem):
            if cost < best:
                best = cost
            return
        if i == len(prefixes):
            return
        for j, crossed in enumerate(crossings[i]):
            for t in crossed:
                rem[t] -= 1
            walk(i + 1, cost + j)
            for t in crossed:
                rem[t] += 1

    walk(0, 0)
    assert best < math.inf, "lifting d to the top of every ballot is feasible"
    return int(best)


def dodgson_score_search(
    e: VotingSituation, d: int, max_nodes: int = SEARCH_NODE_CAP
) -> int:
    """Exact Dodgson score by pruned depth-first search over ballot lifts.

    Sound prunes only: a cost lower bound of one swap per still-needed
    crossing, suffix feasibility counts, non-increasing lifts within runs of
    identical ballots, and per-node dominance (of the lifts reaching a given
    number of still-needed crossings, only the cheapest can be optimal,
    because deficits never grow back along a branch).  Intended for
    elections with few ballots; raises CapExceededError past max_nodes.
    """
    need = _needed(e, d)
    if not need:
        return 0
    rivals = sorted(need)
    slot = {k: t for t, k in enumerate(rivals)}
    nr = len(rivals)

    # Per ballot: the lift stops that end on a deficit rival, ascending, as
    # (cost j, rival slot crossed at j, all slots crossed by a lift of j).
    ballots: list[tuple[LinearOrder, list[tuple[int, int, tuple[int, ...]]]]] = []
    for prefix in _expanded_prefixes(e, d):
        p = len(prefix)
        steps = []
        upto: list[int] = []
        for j in range(1, p + 1):
            t = slot.get(prefix[p - j])
            if t is not None:
                upto.append(t)
                steps.append((j, t, tuple(upto)))
        if steps:
            ballots.append((prefix, steps))
    ballots.sort(key=lambda b: b[0])

    nb = len(ballots)
    avail = [[0] * nr for _ in range(nb + 1)]
    for i in range(nb - 1, -1, -1):
        row = avail[i + 1][:]
        for _, t, _u in ballots[i][1]:
            row[t] += 1
        avail[i] = row

    rem = [need[k] for k in rivals]
    best = math.inf
    nodes = 0

    def walk(i: int, cost: int, rem_total: int, prev_lift: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > max_nodes:
            raise CapExceededError(f"search exceeded {max_nodes} nodes")
        if rem_total == 0:
            if cost < best:
                best = cost
            return
        if i == nb or cost + rem_total >= best:
            return
        arow = avail[i]
        for t in range(nr):
            if rem[t] > arow[t]:
                return
        prefix, steps = ballots[i]
        # minimal lift per achievable coverage level at the current deficits
        kept = []
        delta = 0
        for j, t, upto in steps:
            if rem[t] > 0:
                delta += 1
                kept.append((j, delta, upto))
        same_as_prev = i > 0 and ballots[i - 1][0] == prefix
        for j, delta, upto in reversed(kept):
            if same_as_prev and j > prev_lift:
                continue
            nt = rem_total - delta
            if cost + j + nt >= best:
                continue
            for t in upto:
                rem[t] -= 1
            walk(i + 1, cost + j, nt, j)
            for t in upto:
                rem[t] += 1
        if cost + rem_total < best:
            walk(i + 1, cost, rem_total, 0)

    walk(0, 0, sum(rem), len(e.labels))
    assert best < math.inf
    return int(best)


def dodgson_swap_vector(e: VotingSituation, d: int) -> SwapVector:
    """One cost-minimal swap vector (brute force; small elections only)."""
    prefixes = _expanded_prefixes(e, d)
    need = _needed(e, d)
    target = dodgson_score_bruteforce(e, d)
    if not need:
        return SwapVector(d, tuple(0 for _ in prefixes))
    rivals = sorted(need)
    slot = {k: t for t, k in enumerate(rivals)}
    rem = [need[k] for k in rivals]
    lifts = [0] * len(prefixes)

    def walk(i: int, cost: int) -> bool:
        if all(r <= 0 for r in rem):
            return cost == target
        if i == len(prefixes) or cost > target:
            return False
        prefix = prefixes[i]
        p = len(prefix)
        for j in range(p + 1):
            crossed = [slot[prefix[p - t]] for t in range(1, j + 1) if prefix[p - t] in slot]
            for t in crossed:
                rem[t] -= 1
            lifts[i] = j
            if walk(i + 1, cost + j):
                return True
            for t in crossed:
                rem[t] += 1
        lifts[i] = 0
        return False

    found = walk(0, 0)
    assert found
    return SwapVector(d, tuple(lifts))


def dodgson_score(e: VotingSituation, d: int, backend: str = "auto") -> int:
    """Exact Dodgson score; backend 'auto' picks search for small electorates
    and the integer program otherwise."""
    if backend == "auto":
        backend = "search" if e.n <= _AUTO_SEARCH_MAX_BALLOTS else "ilp"
    if backend == "search":
        return dodgson_score_search(e, d)
    if backend == "ilp":
        return dodgson_score_ilp(e, d)
    if backend == "bruteforce":
        return dodgson_score_bruteforce(e, d)
    raise ValueError(f"unknown backend {backend!r}")


def dc_solution(e: VotingSituation, d: int) -> LpSolution:
    """Solved clone-relaxation program (rational deficits adv/2)."""
    prog = build_program(e, d, ProgramMode.CLONE_RELAXATION)
    sol = solve_lp(prog.model)
    if sol.status != OPTIMAL:
        raise RuntimeError(f"DC program unexpectedly {sol.status}")
    return sol


def dc_score(e: VotingSituation, d: int) -> Fraction:
    """Dodgson Clone score: fractional ballots, exact rational deficits."""
    return dc_solution(e, d).value


def dr_score(e: VotingSituation, d: int) -> Fraction:
    """Dodgson Relaxed score: fractional ballots, ceiling deficits."""
    prog = build_program(e, d, ProgramMode.RELAXED_WITH_CEIL)
    sol = solve_lp(prog.model)
    if sol.status != OPTIMAL:
        raise RuntimeError(f"DR program unexpectedly {sol.status}")
    return sol.value


def damp_score(e: VotingSituation, d: int) -> int:
    """DR rounded up."""
    return math.ceil(dr_score(e, d))


def k_dodgson_score(e: VotingSituation, d: int, k: int) -> Fraction:
    """Dodgson score of the k-cloned electorate, divided by k."""
    if k < 1:
        raise ValueError("clone factor must be a positive integer")
    return Fraction(dodgson_score(clone_electorate(e, k), d), k)
