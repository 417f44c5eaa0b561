import random
from fractions import Fraction

import pytest

from disclosure_games.core import (
    BuyerType,
    DiscreteInstance,
    GuardExceeded,
)
from disclosure_games.game import (
    GameEvaluator,
    connected_partitions,
    evaluate_profile,
    rare_lows_regression,
    full_disclosure_profile,
    no_disclosure_profile,
    search_profiles,
    search_to_csv,
)
from disclosure_games.lpmech import joint_prob, joint_types

F = Fraction

TWO_BUYERS_123 = DiscreteInstance.build(
    1,
    [
        [("1/4", ["1"]), ("1/4", ["2"]), ("1/2", ["3"])],
        [("1/4", ["1"]), ("1/4", ["2"]), ("1/2", ["3"])],
    ],
)

TWO_GOODS_INDEPENDENT = DiscreteInstance.build(
    2,
    [
        [
            ("3/50", ["56", "38"]),
            ("9/100", ["56", "69"]),
            ("17/50", ["91", "38"]),
            ("51/100", ["91", "69"]),
        ]
    ],
)


def rand_instance(rng: random.Random) -> DiscreteInstance:
    goods = rng.randint(1, 2)
    buyers = []
    for _ in range(rng.randint(1, 2)):
        n = rng.randint(1, 3)
        weights = [rng.randint(1, 5) for _ in range(n)]
        total = sum(weights)
        types = []
        seen = set()
        for w in weights:
            while True:
                vals = tuple(F(rng.randint(0, 10), rng.choice([1, 2])) for _ in range(goods))
                if vals not in seen:
                    seen.add(vals)
                    break
            types.append(BuyerType(F(w, total), vals))
        buyers.append(tuple(types))
    return DiscreteInstance(goods, tuple(buyers))


class TestEvaluateProfile:
    def test_two_buyer_no_disclosure(self):
        outcome = evaluate_profile(TWO_BUYERS_123, no_disclosure_profile(TWO_BUYERS_123))
        assert outcome.expected_revenue == F(9, 4)
        assert outcome.total_surplus == F(3, 8)
        # the solver resolves the both-bid-3 tie toward buyer 1, so the
        # split is asymmetric even though the total is pinned
        assert outcome.per_buyer_utility == (F(1, 4), F(1, 8))
        assert outcome.unsold_probability(0) == F(1, 16)
        assert not outcome.always_all_sold
        assert not outcome.efficient

    def test_two_buyer_low_high_split(self):
        profile = (((0,), (1, 2)), ((0,), (1, 2)))
        outcome = evaluate_profile(TWO_BUYERS_123, profile)
        assert outcome.total_surplus == F(1, 8)
        # the upper subgame keeps surplus 2/9 of its conditional mass
        prob, sol = outcome.per_message[((1, 2), (1, 2))]
        assert prob == F(3, 4) * F(3, 4)
        assert sol.revenue == F(8, 3)
        assert sol.buyer_surplus == F(2, 9)
        # a buyer known to have value 1 hands the seller an outside option
        # that pushes the other message's price to 3 and surplus to zero
        prob_lo, sol_lo = outcome.per_message[((0,), (1, 2))]
        assert prob_lo == F(1, 4) * F(3, 4)
        assert sol_lo.buyer_surplus == 0

    def test_bid_three_price_rises_to_eleven_quarters(self):
        profile = (((0,), (1, 2)), ((0,), (1, 2)))
        outcome = evaluate_profile(TWO_BUYERS_123, profile)
        _, sol = outcome.per_message[((1, 2), (1, 2))]
        mech = sol.mechanism
        inst = mech.instance
        paid = F(0)
        won = F(0)
        for t, jt in enumerate(joint_types(inst)):
            w = joint_prob(inst, jt)
            for j in range(2):
                if inst.buyers[j][jt[j]].values[0] == 3:
                    paid += w * mech.r[t][j]
                    won += w * mech.q[t][j][0]
        assert paid / won == F(11, 4)

    def test_full_disclosure_extracts_everything(self):
        rng = random.Random(1412)
        for _ in range(20):
            inst = rand_instance(rng)
            outcome = evaluate_profile(inst, full_disclosure_profile(inst))
            assert outcome.total_surplus == 0

    def test_message_probabilities_sum_to_one(self):
        profile = (((0, 1), (2,)), ((0,), (1,), (2,)))
        outcome = evaluate_profile(TWO_BUYERS_123, profile)
        assert sum(p for p, _ in outcome.per_message.values()) == 1
        assert outcome.total_surplus == sum(outcome.per_buyer_utility)

    def test_merging_equivalent_blocks_changes_nothing(self):
        # buyer A never wins, so any refinement of A's messages induces the
        # same mechanism and the outcomes coincide
        inst = DiscreteInstance.build(
            1, [[("1/2", ["1"]), ("1/2", ["2"])], [("1", ["100"])]]
        )
        split = evaluate_profile(inst, (((0,), (1,)), ((0,),)))
        merged = evaluate_profile(inst, (((0, 1),), ((0,),)))
        assert split.expected_revenue == merged.expected_revenue == 100
        assert split.per_buyer_utility == merged.per_buyer_utility
        assert split.total_surplus == merged.total_surplus
        assert split.always_all_sold == merged.always_all_sold
        assert split.efficient == merged.efficient


class TestConnectedPartitions:
    def test_counts_are_powers_of_two(self):
        for n, inst in [
            (3, TWO_BUYERS_123),
            (4, TWO_GOODS_INDEPENDENT),
        ]:
            parts = connected_partitions(inst, 0)
            assert len(parts) == 2 ** (n - 1)
            assert len(set(parts)) == len(parts)

    def test_blocks_are_contiguous_in_value_order(self):
        # types listed out of value order on purpose
        inst = DiscreteInstance.build(
            1, [[("1/3", ["3"]), ("1/3", ["1"]), ("1/3", ["2"])]]
        )
        parts = connected_partitions(inst, 0)
        assert len(parts) == 4
        values = [t.values[0] for t in inst.buyers[0]]
        for part in parts:
            for block in part:
                vals = sorted(values[i] for i in block)
                lo, hi = values.index(vals[0]), values.index(vals[-1])
                span = [v for v in values if vals[0] <= v <= vals[-1]]
                assert sorted(span) == vals  # no value gap inside a block
        assert ((0,), (1, 2)) in parts  # {3} with {1,2}


class TestSearch:
    def test_no_disclosure_ranks_strictly_first(self):
        results = search_profiles(TWO_BUYERS_123)
        assert len(results) == 25
        best_profile, best = results[0]
        assert best_profile == no_disclosure_profile(TWO_BUYERS_123)
        assert best.total_surplus == F(3, 8)
        assert results[1][1].total_surplus < F(3, 8)

    def test_all_sold_profiles_stay_below_no_disclosure(self):
        results = search_profiles(TWO_GOODS_INDEPENDENT)
        assert len(results) == 15
        outcomes = dict(results)
        none = outcomes[no_disclosure_profile(TWO_GOODS_INDEPENDENT)]
        assert none.total_surplus == F(1581, 100)
        assert not none.always_all_sold
        sold = [
            out
            for prof, out in results
            if prof != no_disclosure_profile(TWO_GOODS_INDEPENDENT)
            and out.always_all_sold
        ]
        assert sold  # full disclosure sells everything, so the set is nonempty
        assert all(out.total_surplus < F(1581, 100) for out in sold)

    def test_connected_only_never_beats_unconstrained(self):
        rng = random.Random(555)
        for _ in range(10):
            inst = rand_instance(rng)
            free = search_profiles(inst)
            conn = search_profiles(inst, connected_only=True)
            assert conn[0][1].total_surplus <= free[0][1].total_surplus

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            search_profiles(TWO_BUYERS_123, guard=3)

    def test_csv_round_trip_shape(self):
        results = search_profiles(TWO_BUYERS_123)
        text = search_to_csv(results)
        lines = text.splitlines()
        assert len(lines) == 26
        assert lines[0] == "profile,revenue,u1,u2,total_surplus,always_all_sold,efficient"
        assert lines[1].endswith("false,false")
        assert '"[[[1,2,3]],[[1,2,3]]]"' in lines[1]


class TestRareLowsRegression:
    def test_disclosure_strictly_helps(self):
        report = rare_lows_regression()
        assert report.no_disclosure.total_surplus == 0
        assert report.no_disclosure.expected_revenue == F(9999, 10)
        assert report.low_high.total_surplus == F(1, 40000)
        assert report.low_high.total_surplus > 0
        # disclosure also repairs efficiency here
        assert report.low_high.efficient
        assert report.low_high.always_all_sold
        assert not report.no_disclosure.always_all_sold

    def test_low_low_subgame_values(self):
        report = rare_lows_regression()
        assert report.low_low_probability == F(1, 10000)
        sol = report.low_low_solution
        # optimal revenue beats the literal reserve-1 second-price auction
        # (whose revenue is 5/4); what survives is its allocation: the good
        # is always sold to a highest-value buyer, value-1 winners pay
        # exactly 1, and a value-2 buyer keeps positive utility
        assert sol.revenue == F(3, 2)
        assert sol.buyer_surplus == F(1, 4)
        assert sol.mechanism.unsold_probability(0) == 0
        interim = sol.mechanism.interim_utilities()
        assert interim[0][0] == interim[1][0] == 0
        assert interim[0][1] + interim[1][1] == F(1, 2)
        assert max(interim[0][1], interim[1][1]) > 0
        mech = sol.mechanism
        inst = mech.instance
        for t, jt in enumerate(joint_types(inst)):
            for j in range(2):
                if inst.buyers[j][jt[j]].values[0] == 1 and mech.q[t][j][0] > 0:
                    assert mech.r[t][j] == mech.q[t][j][0]


class TestEvaluatorCache:
    def test_search_reuses_message_solves(self):
        evaluator = GameEvaluator(TWO_BUYERS_123)
        evaluator.evaluate(no_disclosure_profile(TWO_BUYERS_123))
        evaluator.evaluate((((0, 1, 2),), ((0,), (1, 2))))
        # 7 nonempty subsets per buyer at most; far fewer actually used
        assert len(evaluator._cache) == 3
