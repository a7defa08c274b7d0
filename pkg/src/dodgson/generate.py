"""Random and exhaustive election generation.

Models: Impartial Culture (uniform over profiles), Impartial Anonymous
Culture (uniform over voting situations) and the reinforcing urn model that
interpolates between them (reinforcement 0 gives IC sampling, reinforcement 1
from a one-ball-per-order urn gives IAC).  Every generator is a pure function
of (parameters, seed, trial) and replays bit-identically.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator

from .elections import (
    CapExceededError,
    LinearOrder,
    Profile,
    VotingRatio,
    VotingSituation,
)
from .rng import SplitMix64, derive_seed

ENUMERATION_CAP = 10**6


def perm_unrank(r: int, m: int) -> LinearOrder:
    """Permutation of 0..m-1 with lexicographic rank r (factorial base)."""
    elems = list(range(m))
    out = []
    for i in range(m - 1, -1, -1):
        f = math.factorial(i)
        idx, r = divmod(r, f)
        out.append(elems.pop(idx))
    return tuple(out)


def _unrank_subset(r: int, n: int, k: int) -> list[int]:
    """k-subset of {0..n-1} with colex rank r (binary search per element)."""
    S = [0] * k
    while k > 0:
        lower = k - 1
        while lower < n:
            mid = (lower + n + 1) // 2
            if r < math.comb(mid, k):
                n = mid - 1
            else:
                lower = mid
        r -= math.comb(n, k)
        k -= 1
        S[k] = n
    return S


def count_situations(m: int, n: int) -> int:
    """Number of distinct voting situations: C(n + m! - 1, n)."""
    return math.comb(n + math.factorial(m) - 1, n)


def _counts_from_rank(r: int, m: int, n: int) -> dict[LinearOrder, int]:
    """Voting-situation counts with rank r among all C(n+m!-1, n) multisets.

    Stars and bars: a situation is a choice of either the n star positions or
    the m!-1 bar positions out of n+m!-1; unrank whichever side is smaller.
    """
    big_m = math.factorial(m)
    counts: dict[LinearOrder, int] = {}
    if n <= big_m - 1:
        stars = _unrank_subset(r, n + big_m - 1, n)
        for t, s in enumerate(stars):
            slot = s - t
            key = perm_unrank(slot, m)
            counts[key] = counts.get(key, 0) + 1
    else:
        bars = _unrank_subset(r, n + big_m - 1, big_m - 1)
        prev = -1
        for slot, b in enumerate(bars):
            c = b - prev - 1
            if c:
                counts[perm_unrank(slot, m)] = c
            prev = b
        tail = (n + big_m - 2) - prev
        if tail:
            counts[perm_unrank(big_m - 1, m)] = tail
    return counts


def gen_ic(m: int, n: int, seed: int, trial: int = 0) -> Profile:
    """n ballots drawn independently and uniformly from all m! orders."""
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    rng = SplitMix64(derive_seed(seed, trial))
    return Profile(m, tuple(rng.permutation(m) for _ in range(n)))


def gen_iac(m: int, n: int, seed: int, trial: int = 0, method: str = "unrank") -> VotingSituation:
    """Uniform voting situation.

    The default draws a uniform rank and unranks it combinatorially, so
    uniformity holds by construction; method='urn' goes through the
    reinforcing urn instead (same distribution, kept as a cross-check).
    """
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    if method == "urn":
        return gen_pe(m, n, seed, a=1, trial=trial)
    if method != "unrank":
        raise ValueError(f"unknown IAC method {method!r}")
    rng = SplitMix64(derive_seed(seed, trial))
    r = rng.randbelow(count_situations(m, n))
    return VotingSituation(m, _counts_from_rank(r, m, n))


def gen_pe(
    m: int,
    n: int,
    seed: int,
    a: int,
    initial_urn: dict[LinearOrder, int] | None = None,
    trial: int = 0,
) -> VotingSituation:
    """Reinforcing urn draws: the drawn order returns with `a` extra balls.

    The default urn holds one ball per linear order and is never materialized:
    orders drawn so far carry their explicit ball counts and the remaining
    uniform mass is sampled by rejection.
    """
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    if a < 0:
        raise ValueError("reinforcement must be non-negative")
    rng = SplitMix64(derive_seed(seed, trial))
    drawn: dict[LinearOrder, int] = {}

    if initial_urn is not None:
        urn = [(r, int(c)) for r, c in sorted(initial_urn.items()) if c > 0]
        if not urn:
            raise ValueError("initial urn must be non-empty")
        balls = {r: c for r, c in urn}
        keys = [r for r, _ in urn]
        total = sum(balls.values())
        for _ in range(n):
            u = rng.randbelow(total)
            for key in keys:
                u -= balls[key]
                if u < 0:
                    break
            drawn[key] = drawn.get(key, 0) + 1
            balls[key] += a
            total += a
        return VotingSituation(m, drawn)

    big_m = math.factorial(m)
    total = big_m
    for _ in range(n):
        u = rng.randbelow(total)
        key = None
        for r, times in drawn.items():
            u -= 1 + a * times
            if u < 0:
                key = r
                break
        if key is None:
            # remaining mass is uniform over the orders not yet drawn
            while True:
                key = rng.permutation(m)
                if key not in drawn:
                    break
        drawn[key] = drawn.get(key, 0) + 1
        total += a
    return VotingSituation(m, drawn)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_situations(
    m: int, n: int, cap: int = ENUMERATION_CAP
) -> Iterator[VotingSituation]:
    """Every voting situation with n agents over m alternatives, once each."""
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    total = count_situations(m, n)
    if total > cap:
        raise CapExceededError(
            f"{total} situations exceed the enumeration cap {cap}"
        )
    orders = sorted(itertools.permutations(range(m)))
    for comp in _compositions(n, len(orders)):
        counts = {orders[i]: c for i, c in enumerate(comp) if c}
        yield VotingSituation(m, counts)


_H_LABELS = ("a", "b", "c", "x")
_G_LABELS = ("a", "b", "c", "d", "e")


def _order_of(labels: tuple[str, ...], word: str) -> LinearOrder:
    return tuple(labels.index(ch) for ch in word)


def bad_voting_ratio(which: str) -> VotingRatio:
    """The two ballot-frequency vectors whose every even realization has
    distinct DQ and Dodgson winners."""
    if which == "h":
        labels = _H_LABELS
        weights = {
            _order_of(labels, "abcx"): Fraction(16, 39),
            _order_of(labels, "cxab"): Fraction(12, 39),
            _order_of(labels, "bcxa"): Fraction(10, 39),
            _order_of(labels, "cbax"): Fraction(1, 39),
        }
        return VotingRatio(4, weights, labels)
    if which == "g":
        labels = _G_LABELS
        weights = {
            _order_of(labels, "abcde"): Fraction(7, 18),
            _order_of(labels, "cdabe"): Fraction(6, 18),
            _order_of(labels, "bcead"): Fraction(5, 18),
        }
        return VotingRatio(5, weights, labels)
    raise ValueError(f"unknown bad ratio {which!r}; expected 'g' or 'h'")


def bad_ratio_profile(which: str, scale: int) -> VotingSituation:
    """Smallest even realization of a bad ratio, scaled: n = 78*scale for h
    (so the per-78-agent score table applies at scale 1), 18*scale for g."""
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    ratio = bad_voting_ratio(which)
    base = 78 if which == "h" else 18
    return ratio.realize(base * scale)
