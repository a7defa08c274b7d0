import pytest

from dodgson.elections import VotingSituation, parse_election

H_TEXT = """\
alternatives: a b c x
32: a b c x
24: c x a b
20: b c x a
2: c b a x
"""

G_TEXT = """\
alternatives: a b c d e
7: a b c d e
6: c d a b e
5: b c e a d
"""


@pytest.fixture
def h_election() -> VotingSituation:
    return parse_election(H_TEXT)


@pytest.fixture
def g_election() -> VotingSituation:
    return parse_election(G_TEXT)


@pytest.fixture
def tiny_election() -> VotingSituation:
    # one a>b>c ballot against two b>c>a ballots
    return VotingSituation(3, {(0, 1, 2): 1, (1, 2, 0): 2})


def pairwise_oracle(e: VotingSituation):
    """Independent advantage computation: expand ballots, count positions."""
    m = e.m
    wins = [[0] * m for _ in range(m)]
    for ranking, count in e.counts.items():
        pos = {alt: i for i, alt in enumerate(ranking)}
        for _ in range(count):
            for a in range(m):
                for b in range(m):
                    if a != b and pos[a] < pos[b]:
                        wins[a][b] += 1
    return [[max(0, wins[a][b] - wins[b][a]) for b in range(m)] for a in range(m)]
