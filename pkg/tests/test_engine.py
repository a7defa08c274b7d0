import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dodgson.elections import CapExceededError, VotingSituation, clone_electorate
from dodgson.engine import (
    ProgramMode,
    build_program,
    damp_score,
    dc_score,
    dc_solution,
    deficit,
    dodgson_score,
    dodgson_score_bruteforce,
    dodgson_score_ilp,
    dodgson_score_search,
    dodgson_swap_vector,
    dr_score,
    k_dodgson_score,
)
from dodgson.generate import gen_ic, gen_pe
from dodgson.elections import profile_to_situation
from dodgson.lp import solve_lp
from dodgson.rules import E_UPPER


def small_situations(max_m=4, max_ballots=8):
    def build(m, seed_ballots):
        counts = {}
        for perm, c in seed_ballots:
            counts[perm] = counts.get(perm, 0) + c
        return VotingSituation(m, counts)

    return st.integers(2, max_m).flatmap(
        lambda m: st.lists(
            st.tuples(st.permutations(range(m)).map(tuple), st.integers(1, 3)),
            min_size=1,
            max_size=max_ballots,
        ).map(lambda bs: build(m, bs))
    )


class TestDeficit:
    def test_example_h(self, h_election):
        assert deficit(h_election, 2, 0) == 7  # F(c, a)
        assert deficit(h_election, 3, 0) == 5  # F(x, a)
        assert deficit(h_election, 1, 0) == 0  # F(b, a), adv(b,a)=0

    def test_odd_advantage_rounds_up(self):
        e = VotingSituation(2, {(1, 0): 1})
        assert deficit(e, 1, 0) == 1

    def test_self_rejected(self, h_election):
        with pytest.raises(ValueError):
            deficit(h_election, 0, 0)


class TestBuildProgram:
    def test_tiny_structure(self, tiny_election):
        prog = build_program(tiny_election, 0, ProgramMode.INTEGER_DODGSON)
        # class with a on top plus class below b>c; lifts 0..2 on the latter
        assert [p for p, _ in prog.classes] == [(), (1, 2)]
        assert dict(prog.classes) == {(): 1, (1, 2): 2}
        assert max(j for (_, j) in prog.var_index) == 2
        assert all(prog.model.integer)

    def test_example_h_classes_and_deficits(self, h_election):
        prog = build_program(h_election, 0, ProgramMode.RELAXED_WITH_CEIL)
        assert len(prog.classes) == 4
        assert prog.deficits == {1: 0, 2: 7, 3: 5}
        clone = build_program(h_election, 0, ProgramMode.CLONE_RELAXATION)
        # even advantages make the two relaxations coincide
        assert clone.deficits == prog.deficits
        assert not any(clone.model.integer)

    def test_variable_count_under_factorial_e(self, h_election):
        prog = build_program(h_election, 0, ProgramMode.INTEGER_DODGSON)
        m = h_election.m
        assert prog.model.num_vars < math.factorial(m) * math.e


class TestDodgsonScore:
    def test_example_h_all_backends(self, h_election):
        assert [dodgson_score_ilp(h_election, d) for d in range(4)] == [14, 17, 13, 54]
        assert [dodgson_score_search(h_election, d) for d in range(4)] == [14, 17, 13, 54]
        assert [dodgson_score(h_election, d) for d in range(4)] == [14, 17, 13, 54]

    def test_condorcet_tie_winner_scores_zero(self):
        e = VotingSituation(3, {(0, 1, 2): 3, (1, 0, 2): 1})
        assert dodgson_score(e, 0) == 0
        assert dodgson_score_bruteforce(e, 0) == 0

    def test_tiny_example(self, tiny_election):
        assert dodgson_score_ilp(tiny_election, 0) == 2
        assert dodgson_score_search(tiny_election, 0) == 2
        assert dodgson_score_bruteforce(tiny_election, 0) == 2

    def test_bruteforce_cap(self):
        e = profile_to_situation(gen_ic(6, 12, seed=3))
        with pytest.raises(CapExceededError):
            dodgson_score_bruteforce(e, 0, cap=10)

    def test_unknown_backend(self, tiny_election):
        with pytest.raises(ValueError):
            dodgson_score(tiny_election, 0, backend="guess")

    @given(small_situations())
    @settings(max_examples=60, deadline=None)
    def test_backends_agree(self, e):
        from hypothesis import assume

        # keep every focus inside the exhaustive oracle's search space
        space = 1
        for ranking, count in e.counts.items():
            space *= (e.m) ** count  # position of d + 1 <= m per ballot
        assume(space <= 50_000)
        for d in range(e.m):
            brute = dodgson_score_bruteforce(e, d)
            assert dodgson_score_search(e, d) == brute
            assert dodgson_score_ilp(e, d) == brute

    def test_swap_vector_is_minimal_witness(self, tiny_election):
        vec = dodgson_swap_vector(tiny_election, 0)
        assert vec.cost == 2
        assert len(vec.lifts) == tiny_election.n


class TestRelaxations:
    def test_tiny_example_values(self, tiny_election):
        assert dc_score(tiny_election, 0) == 1
        assert dr_score(tiny_election, 0) == 2
        assert damp_score(tiny_election, 0) == 2

    def test_example_h_modes_collapse(self, h_election):
        assert dc_score(h_election, 0) == 14
        assert dr_score(h_election, 0) == 14
        assert damp_score(h_election, 0) == 14

    def test_condorcet_tie_winner_zero(self):
        e = VotingSituation(2, {(0, 1): 2})
        assert dc_score(e, 0) == 0
        assert dr_score(e, 0) == 0
        assert damp_score(e, 0) == 0

    def test_dr_program_lp_equals_brute_force_on_h(self, h_election):
        prog = build_program(h_election, 0, ProgramMode.RELAXED_WITH_CEIL)
        assert solve_lp(prog.model).value == 14

    @given(small_situations())
    @settings(max_examples=40, deadline=None)
    def test_score_chain(self, e):
        m = e.m
        slack = math.factorial(m - 1) * (m - 1) * E_UPPER
        for d in range(m):
            dod = dodgson_score_search(e, d)
            dc = dc_score(e, d)
            dr = dr_score(e, d)
            damp = damp_score(e, d)
            assert dod - slack < dc <= dr <= damp <= dod

    @given(small_situations(max_m=3, max_ballots=5), st.integers(2, 3))
    @settings(max_examples=30, deadline=None)
    def test_dc_clone_invariance(self, e, k):
        for d in range(e.m):
            assert dc_score(clone_electorate(e, k), d) == k * dc_score(e, d)


class TestKDodgson:
    def test_identity_at_one(self, tiny_election):
        assert k_dodgson_score(tiny_election, 0, 1) == dodgson_score(tiny_election, 0)

    def test_doubling_tiny(self, tiny_election):
        assert k_dodgson_score(tiny_election, 0, 2) == 1

    def test_zero_rejected(self, tiny_election):
        with pytest.raises(ValueError):
            k_dodgson_score(tiny_election, 0, 0)

    @given(small_situations(max_m=3, max_ballots=4), st.integers(1, 3))
    @settings(max_examples=25, deadline=None)
    def test_dc_is_lower_bound_for_every_k(self, e, k):
        for d in range(e.m):
            assert dc_score(e, d) <= k_dodgson_score(e, d, k)

    def test_lcm_denominator_clone_recovers_dc(self, tiny_election):
        sol = dc_solution(tiny_election, 0)
        k = math.lcm(*(v.denominator for v in sol.assignment))
        assert k_dodgson_score(tiny_election, 0, k) == dc_score(tiny_election, 0)


class TestRoundUpIncumbent:
    @given(small_situations(max_m=4, max_ballots=6))
    @settings(max_examples=40, deadline=None)
    def test_ceil_of_relaxed_optimum_is_integer_feasible(self, e):
        # the rounded-up relaxation point must satisfy the integer program,
        # which is what seeds branch and bound with its first incumbent
        from dodgson.lp import _feasible, solve_lp

        for d in range(e.m):
            relaxed = build_program(e, d, ProgramMode.RELAXED_WITH_CEIL)
            integer = build_program(e, d, ProgramMode.INTEGER_DODGSON)
            sol = solve_lp(relaxed.model)
            rounded = tuple(F(math.ceil(v)) for v in sol.assignment)
            assert _feasible(integer.model, rounded)
            cost = sum(
                c * x for c, x in zip(integer.model.objective, rounded)
            )
            assert cost >= dodgson_score_search(e, d)


class TestDqDrDodgsonConsistency:
    def test_exhaustive_m3(self):
        # whenever the relaxed score already equals the quick score on every
        # quick winner, the quick and exact winner sets coincide
        from dodgson.generate import enumerate_situations
        from dodgson.rules import _scores_for_rule

        for n in range(1, 6):
            for e in enumerate_situations(3, n):
                dq = _scores_for_rule(e, "dq")
                lo = min(dq)
                dqw = {a for a, s in enumerate(dq) if s == lo}
                if all(dr_score(e, w) == dq[w] for w in dqw):
                    dod = [dodgson_score(e, d) for d in range(3)]
                    lod = min(dod)
                    assert dqw == {a for a, s in enumerate(dod) if s == lod}, e.counts


class TestSearchRobustness:
    def test_duplicated_ballots_symmetry(self):
        e = gen_pe(4, 14, seed=5, a=4)  # reinforcement piles up duplicates
        for d in range(4):
            assert dodgson_score_search(e, d) == dodgson_score_ilp(e, d)

    def test_node_cap_raises(self):
        e = profile_to_situation(gen_ic(8, 30, seed=12))
        with pytest.raises(CapExceededError):
            dodgson_score_search(e, 0, max_nodes=3)

    def test_moderate_m25(self):
        e = profile_to_situation(gen_ic(25, 5, seed=31))
        for d in range(0, 25, 5):
            assert dodgson_score_search(e, d) == dodgson_score_ilp(e, d)
