import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dodgson.elections import VotingSituation, clone_electorate, profile_to_situation
from dodgson.engine import dodgson_score_search
from dodgson.generate import gen_ic
from dodgson.rules import (
    ALL_RULES,
    DEFINITELY,
    E_UPPER,
    MAYBE,
    certificate,
    certificate_threshold,
    certificate_verdict_fast,
    compute_score_report,
    dq_score,
    simpson_score,
    tideman_score,
    winners,
)


def small_situations(max_m=5, max_ballots=8):
    def build(m, seed_ballots):
        counts = {}
        for perm, c in seed_ballots:
            counts[perm] = counts.get(perm, 0) + c
        return VotingSituation(m, counts)

    return st.integers(2, max_m).flatmap(
        lambda m: st.lists(
            st.tuples(st.permutations(range(m)).map(tuple), st.integers(1, 4)),
            min_size=1,
            max_size=max_ballots,
        ).map(lambda bs: build(m, bs))
    )


class TestClosedFormScores:
    def test_example_h_tideman(self, h_election):
        assert [tideman_score(h_election, a) for a in range(4)] == [24, 34, 26, 108]

    def test_example_h_dq(self, h_election):
        assert [dq_score(h_election, a) for a in range(4)] == [12, 17, 13, 54]

    def test_example_h_simpson(self, h_election):
        assert [simpson_score(h_election, a) for a in range(4)] == [14, 34, 26, 78]

    def test_condorcet_tie_winner_scores_zero(self):
        e = VotingSituation(3, {(0, 1, 2): 1})
        assert tideman_score(e, 0) == dq_score(e, 0) == simpson_score(e, 0) == 0

    def test_tiny(self, tiny_election):
        assert tideman_score(tiny_election, 0) == 2
        assert dq_score(tiny_election, 0) == 2
        assert simpson_score(tiny_election, 0) == 1

    @given(small_situations())
    @settings(max_examples=50, deadline=None)
    def test_tideman_dq_sandwich(self, e):
        # Sc_T <= 2 Sc_Q < Sc_T + m for every alternative
        for a in range(e.m):
            t, q = tideman_score(e, a), dq_score(e, a)
            assert t <= 2 * q < t + e.m


class TestWinners:
    def test_example_h(self, h_election):
        assert winners(h_election, "dq") == {0}
        assert winners(h_election, "dodgson") == {2}
        assert winners(h_election, "tideman") == {0}

    def test_example_g(self, g_election):
        assert winners(g_election, "dq") == {0}
        assert winners(g_election, "dodgson") == {2}

    def test_reversal_everything_ties(self):
        e = VotingSituation(3, {(0, 1, 2): 1, (2, 1, 0): 1})
        for rule in ALL_RULES:
            assert winners(e, rule) == {0, 1, 2}

    def test_unknown_rule(self, h_election):
        with pytest.raises(ValueError):
            winners(h_election, "borda")


class TestCertificate:
    def test_thresholds(self):
        assert certificate_threshold(2) == 3
        assert certificate_threshold(3) == 11
        assert certificate_threshold(4) == 49
        assert certificate_threshold(5) == 261

    def test_e_upper_is_tight_upper_bound(self):
        assert E_UPPER > F(271828182845904523536, 10**20)  # e to 20 digits
        assert E_UPPER - F(271828182845904523536, 10**20) < F(1, 10**9)

    def test_example_h_maybe(self, h_election):
        cert = certificate(h_election)
        assert cert.verdict == MAYBE and cert.gap == 1

    def test_example_h_scaled_definitely(self, h_election):
        big = clone_electorate(h_election, 100)
        cert = certificate(big)
        assert cert.verdict == DEFINITELY
        assert cert.gap == 100 >= certificate_threshold(4)
        assert cert.winner == 2

    def test_single_ballot_m2_maybe(self):
        e = VotingSituation(2, {(0, 1): 1})
        assert certificate(e).verdict == MAYBE

    def test_m1_definitely(self):
        e = VotingSituation(1, {(0,): 1})
        assert certificate(e).verdict == DEFINITELY

    def test_other_bases(self, h_election):
        assert certificate(h_election, basis="dr").verdict == MAYBE
        assert certificate(h_election, basis="damp").verdict == MAYBE
        with pytest.raises(ValueError):
            certificate(h_election, basis="dodgson")

    def test_fast_path_matches_full(self, h_election):
        assert certificate_verdict_fast(h_election) == certificate(h_election).verdict
        big = clone_electorate(h_election, 100)
        assert certificate_verdict_fast(big) == certificate(big).verdict


class TestScoreReport:
    def test_example_h_csv(self, h_election):
        csv = compute_score_report(h_election).to_csv()
        lines = csv.splitlines()
        assert lines[0] == "alternative,simpson,tideman,dq,dc,dr,damp,dodgson"
        assert lines[1] == "a,14,24,12,14,14,14,14"
        assert lines[3] == "c,26,26,13,13,13,13,13"
        assert lines[4] == "x,78,108,54,54,54,54,54"

    def test_csv_byte_stable(self, h_election):
        assert (
            compute_score_report(h_election).to_csv()
            == compute_score_report(h_election).to_csv()
        )

    def test_subset_of_rules(self, h_election):
        rep = compute_score_report(h_election, rules=("dq", "tideman"))
        lines = rep.to_csv().splitlines()
        assert lines[0] == "alternative,tideman,dq"
        assert rep.certificate is None

    def test_rational_columns_exact(self, tiny_election):
        rep = compute_score_report(tiny_election, rules=("dc",))
        assert rep.scores["dc"][0] == F(1)
        table = rep.to_table()
        assert "dc~" in table

    def test_winner_sets_are_argmins(self, h_election):
        rep = compute_score_report(h_election)
        for rule in ALL_RULES:
            lo = min(rep.scores[rule])
            assert rep.winner_sets[rule] == frozenset(
                a for a, s in enumerate(rep.scores[rule]) if s == lo
            )


class TestHierarchy:
    @given(small_situations())
    @settings(max_examples=40, deadline=None)
    def test_full_hierarchy_chain(self, e):
        rep = compute_score_report(e, dodgson_backend="search")
        m = e.m
        slack = math.factorial(m - 1) * (m - 1) * E_UPPER
        for a in range(m):
            s = F(rep.scores["simpson"][a])
            t = F(rep.scores["tideman"][a])
            q = F(rep.scores["dq"][a])
            c = rep.scores["dc"][a]
            r = rep.scores["dr"][a]
            amp = F(rep.scores["damp"][a])
            d = F(rep.scores["dodgson"][a])
            assert s / 2 <= t / 2 <= q <= r <= amp <= d < r + slack
            assert t / 2 <= c <= r
            assert d < c + slack

    def test_certificate_soundness_spot(self, h_election):
        big = clone_electorate(h_election, 100)
        cert = certificate(big)
        assert cert.verdict == DEFINITELY
        dodgson = [dodgson_score_search(h_election, d) for d in range(4)]
        lo = min(dodgson)
        dodgson_winners = {a for a, s in enumerate(dodgson) if s == lo}
        assert {cert.winner} == dodgson_winners
