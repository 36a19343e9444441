import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from replicator_elections.distributions import beta, uniform
from replicator_elections.election_core import (
    Slate,
    TieBreakRule,
    batch_top_h,
    plurality_winner,
    top_h_by_share,
    vote_shares,
)

LR = TieBreakRule.LEFT_RIGHT
ES = TieBreakRule.EQUAL_SPLIT


def rng_for(seed=0):
    return np.random.default_rng(seed)


class TestVoteShares:
    def test_three_distinct_uniform(self):
        shares = vote_shares(Slate([1 / 3, 1 / 2, 2 / 3]), uniform(), LR)
        np.testing.assert_allclose(shares, [5 / 12, 1 / 6, 5 / 12], atol=1e-15)

    def test_single_candidate(self):
        assert vote_shares(Slate([0.7]), uniform(), LR) == pytest.approx([1.0])

    def test_two_candidates_beta22(self):
        # cut at 0.4; Beta(2,2) CDF there is 3(0.4)^2 - 2(0.4)^3 = 0.352
        shares = vote_shares(Slate([0.2, 0.6]), beta(2.0, 2.0), LR)
        np.testing.assert_allclose(shares, [0.352, 0.648], atol=1e-12)

    def test_equal_split_triple(self):
        shares = vote_shares(Slate([0.5, 0.5, 0.5, 0.6]), uniform(), ES)
        np.testing.assert_allclose(shares, [0.55 / 3] * 3 + [0.45], atol=1e-12)

    def test_left_right_assigns_distinct_roles(self):
        # all three coincident at 0.4: left share 0.4, right share 0.6,
        # handed to two different group members
        rng = rng_for(3)
        for _ in range(200):
            shares = vote_shares(Slate([0.4, 0.4, 0.4]), uniform(), LR, rng)
            nonzero = np.sort(shares[shares > 0])
            np.testing.assert_allclose(nonzero, [0.4, 0.6], atol=1e-12)

    def test_left_right_needs_randomness_for_ties(self):
        with pytest.raises(ValueError):
            vote_shares(Slate([0.4, 0.4]), uniform(), LR)

    def test_injected_roles(self):
        # u1 picks the left taker, u2 the right taker among the rest
        shares = vote_shares(Slate([0.4, 0.4, 0.4]), uniform(), LR,
                             u_roles=np.array([0.0, 0.0]))
        np.testing.assert_allclose(shares, [0.4, 0.6, 0.0], atol=1e-12)


class TestWinner:
    def test_middle_candidate_never_wins(self):
        rng = rng_for(1)
        wins = [plurality_winner(Slate([1 / 3, 1 / 2, 2 / 3]), uniform(), LR, rng)[0]
                for _ in range(400)]
        assert set(wins) == {0, 2}
        assert np.mean(np.asarray(wins) == 0) == pytest.approx(0.5, abs=0.1)

    def test_coincident_pair_beats_outsider(self):
        rng = rng_for(2)
        for _ in range(100):
            idx, pos = plurality_winner(Slate([0.5, 0.5, 0.9]), uniform(), LR, rng)
            assert pos == 0.5

    def test_closer_to_half_wins_k2(self):
        rng = rng_for(4)
        for _ in range(500):
            a, b = np.sort(rng.random(2))
            if a == b:
                continue
            idx, _ = plurality_winner(Slate([a, b]), uniform(), LR, rng)
            assert idx == int(np.argmin(np.abs(np.array([a, b]) - 0.5)))


class TestTopH:
    def test_h_range_checked(self):
        with pytest.raises(ValueError):
            top_h_by_share(Slate([0.2, 0.8]), uniform(), 3, LR, rng_for())

    def test_tied_top_pair(self):
        rng = rng_for(5)
        top = top_h_by_share(Slate([1 / 3, 1 / 2, 2 / 3]), uniform(), 2, LR, rng)
        assert set(top) == {1 / 3, 2 / 3}

    def test_descending_order(self):
        rng = rng_for(6)
        top = top_h_by_share(Slate([0.1, 0.5, 0.9]), uniform(), 3, LR, rng)
        assert top[0] == 0.5
        assert set(top[1:]) == {0.1, 0.9}

    def test_h1_matches_winner_distribution(self):
        rng1, rng2 = rng_for(7), rng_for(7)
        slate = Slate([0.2, 0.6, 0.6])
        a = [top_h_by_share(slate, uniform(), 1, LR, rng1)[0] for _ in range(200)]
        b = [plurality_winner(slate, uniform(), LR, rng2)[1] for _ in range(200)]
        assert np.mean(np.asarray(a) == 0.6) == pytest.approx(np.mean(np.asarray(b) == 0.6), abs=0.15)


@st.composite
def slates(draw):
    # dyadic grid: exact under x -> 1 - x, and collisions are common
    k = draw(st.integers(2, 8))
    vals = draw(st.lists(st.integers(0, 1024), min_size=k, max_size=k))
    return np.sort(np.asarray(vals) / 1024.0)


@given(slates(), st.sampled_from([LR, ES]), st.integers(0, 2**32 - 1))
@settings(max_examples=300, deadline=None)
def test_shares_sum_to_one(pos, rule, seed):
    shares = vote_shares(Slate(pos), uniform(), rule, rng_for(seed))
    assert abs(shares.sum() - 1.0) < 1e-12
    assert np.all(shares >= 0.0)


@given(slates(), st.integers(0, 2**32 - 1))
@settings(max_examples=200, deadline=None)
def test_rules_agree_on_distinct_positions(pos, seed):
    if len(np.unique(pos)) != len(pos):
        return
    a = vote_shares(Slate(pos), uniform(), LR, rng_for(seed))
    b = vote_shares(Slate(pos), uniform(), ES, rng_for(seed))
    np.testing.assert_array_equal(a, b)


@given(slates())
@settings(max_examples=200, deadline=None)
def test_reflection_reverses_shares(pos):
    mirrored = np.sort(1.0 - pos)
    a = vote_shares(Slate(pos), uniform(), ES)
    b = vote_shares(Slate(mirrored), uniform(), ES)
    np.testing.assert_allclose(a, b[::-1], atol=1e-12)


def test_flanking_batch():
    # all positions inside (1/4, 3/4): only the outermost candidates can win
    rng = rng_for(8)
    for k in range(2, 11):
        n = 10_000
        pos = 0.25 + 0.5 * rng.random((n, k))
        winners = batch_top_h(pos, uniform(), LR, 1, rng.random((n, k)), rng.random((n, k)))[:, 0]
        lo, hi = pos.min(axis=1), pos.max(axis=1)
        assert np.all((winners == lo) | (winners == hi))


def test_slate_validation():
    with pytest.raises(ValueError):
        Slate([])
    with pytest.raises(ValueError):
        Slate([0.5, 1.1])
    assert Slate([0.9, 0.1]).positions.tolist() == [0.1, 0.9]


def test_groups_run_length():
    s = Slate([0.2, 0.5, 0.5, 0.5, 0.9, 0.9])
    assert s.groups() == [(0, 1), (1, 3), (4, 2)]
