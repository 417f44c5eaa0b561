import random
from fractions import Fraction

import pytest

from disclosure_games.core import (
    BuyerType,
    DiscreteInstance,
    GuardExceeded,
    ValidationError,
)
from disclosure_games.lpmech import (
    Mechanism,
    build_lp,
    joint_types,
    mechanism_to_csv,
    posted_menu_view,
    solve_instance,
    uniform_grid_instance,
    verify_mechanism,
)
from disclosure_games.uniform2 import myerson_outcome, segment

F = Fraction

# one buyer, two goods, correlated values: the menu mechanism leaves the
# high type a unit of utility and still beats exact disclosure
TWO_GOODS_CORRELATED = DiscreteInstance.build(
    2, [[("1/2", ["3", "4"]), ("1/2", ["4", "9"])]]
)

# one buyer, two goods, independent values on a 2x2 product support
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

# one good, two iid buyers with values 1, 2, 3
TWO_BUYERS_123 = DiscreteInstance.build(
    1,
    [
        [("1/4", ["1"]), ("1/4", ["2"]), ("1/2", ["3"])],
        [("1/4", ["1"]), ("1/4", ["2"]), ("1/2", ["3"])],
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
                vals = tuple(F(rng.randint(0, 12), rng.choice([1, 2, 4])) for _ in range(goods))
                if vals not in seen:
                    seen.add(vals)
                    break
            types.append(BuyerType(F(w, total), vals))
        buyers.append(tuple(types))
    return DiscreteInstance(goods, tuple(buyers))


class TestBuildCounts:
    def test_one_buyer_two_types_one_good(self):
        sys = build_lp(DiscreteInstance.build(1, [[("1/2", ["1"]), ("1/2", ["2"])]]))
        assert sys.n_q_vars == 2
        assert sys.n_r_vars == 2
        assert sys.counts == {"supply": 2, "ir": 2, "ic": 2}

    def test_two_buyers_three_types(self):
        sys = build_lp(TWO_BUYERS_123)
        assert len(sys.joint_types) == 9
        assert sys.n_q_vars == 18
        assert sys.n_r_vars == 18

    def test_one_buyer_two_goods(self):
        sys = build_lp(TWO_GOODS_CORRELATED)
        assert sys.n_q_vars == 4
        assert sys.n_r_vars == 2

    def test_variable_budget(self):
        with pytest.raises(GuardExceeded):
            build_lp(TWO_BUYERS_123, variable_budget=10)


class TestSingleBuyerMenus:
    def test_correlated_two_goods_menu(self):
        sol = solve_instance(TWO_GOODS_CORRELATED)
        assert sol.revenue == F(15, 2)
        assert sol.buyer_surplus == F(1, 2)
        assert sol.mechanism.interim_utilities() == ((F(0), F(1)),)
        menu = posted_menu_view(sol)
        assert menu.splitlines() == [
            "good 1: price 3",
            "good 1 + good 2: price 12",
        ]

    def test_one_type_is_fully_extracted(self):
        inst = DiscreteInstance.build(1, [[("1", ["5"])]])
        sol = solve_instance(inst)
        assert sol.revenue == 5
        assert sol.buyer_surplus == 0

    def test_independent_two_goods_randomized_menu(self):
        sol = solve_instance(TWO_GOODS_INDEPENDENT)
        assert sol.revenue == F(30081, 250)
        assert sol.buyer_surplus == F(1581, 100)
        # only the highest type keeps any utility, worth exactly 31
        assert sol.mechanism.interim_utilities() == ((F(0), F(0), F(0), F(31)),)
        menu = posted_menu_view(sol)
        assert menu.splitlines() == [
            "good 1 w.p. 31/35 + good 2: price 593/5",
            "good 1 + good 2: price 129",
        ]

    def test_zero_mechanism_renders_empty_menu(self):
        inst = DiscreteInstance.build(1, [[("1", ["5"])]])
        sol = solve_instance(inst)
        zero = Mechanism(
            inst,
            tuple((tuple(F(0) for _ in range(inst.goods)),) for _ in sol.mechanism.q),
            tuple((F(0),) for _ in sol.mechanism.r),
        )
        from disclosure_games.lpmech import LPSolution

        fake = LPSolution(zero, F(0), F(0), sol.certificate)
        assert posted_menu_view(fake) == "empty menu\n"


class TestTwoBuyerAuction:
    def test_values_match_hand_calculation(self):
        sol = solve_instance(TWO_BUYERS_123)
        assert sol.revenue == F(9, 4)
        assert sol.buyer_surplus == F(3, 8)
        assert sol.mechanism.unsold_probability(0) == F(1, 16)

    def test_average_winning_prices(self):
        sol = solve_instance(TWO_BUYERS_123)
        mech = sol.mechanism
        inst = mech.instance
        jts = joint_types(inst)

        def average_price(want_value, exclude_value=None):
            paid = F(0)
            won = F(0)
            for t, jt in enumerate(jts):
                vals = [inst.buyers[j][jt[j]].values[0] for j in range(2)]
                if exclude_value is not None and exclude_value in vals:
                    continue
                from disclosure_games.lpmech import joint_prob

                w = joint_prob(inst, jt)
                for j in range(2):
                    if vals[j] == want_value:
                        paid += w * mech.r[t][j]
                        won += w * mech.q[t][j][0]
            return paid / won

        assert average_price(F(3)) == F(5, 2)
        assert average_price(F(2), exclude_value=F(3)) == F(2)

    def test_table_view_lists_every_joint_type(self):
        sol = solve_instance(TWO_BUYERS_123)
        lines = posted_menu_view(sol).splitlines()
        assert len(lines) == 10  # header + 9 joint types
        assert lines[0].startswith("joint type")


class TestVerification:
    def test_accepts_solver_output(self):
        for inst in (TWO_GOODS_CORRELATED, TWO_GOODS_INDEPENDENT, TWO_BUYERS_123):
            sol = solve_instance(inst)
            report = verify_mechanism(inst, sol.mechanism)
            assert report.valid
            assert report.revenue == sol.revenue
            assert report.buyer_surplus == sol.buyer_surplus

    def test_zero_mechanism_is_valid(self):
        inst = TWO_BUYERS_123
        nt = len(joint_types(inst))
        zero = Mechanism(
            inst,
            tuple(((F(0),), (F(0),)) for _ in range(nt)),
            tuple((F(0), F(0)) for _ in range(nt)),
        )
        report = verify_mechanism(inst, zero)
        assert report.valid
        assert report.revenue == 0

    def test_corrupted_payment_fails_ir(self):
        sol = solve_instance(TWO_GOODS_CORRELATED)
        mech = sol.mechanism
        r = [list(row) for row in mech.r]
        r[0][0] += 1
        bad = Mechanism(mech.instance, mech.q, tuple(tuple(row) for row in r))
        report = verify_mechanism(mech.instance, bad)
        assert not report.valid
        assert "IR" in report.failure

    def test_discounted_price_fails_ic(self):
        # selling the bundle cheaper to type 2 alone makes type 1 want to lie
        inst = TWO_GOODS_CORRELATED
        q = (((F(1), F(0)),), ((F(1), F(1)),))
        r = ((F(3),), (F(5),))
        report = verify_mechanism(inst, Mechanism(inst, q, r))
        assert not report.valid
        assert "IC" in report.failure

    def test_dimension_mismatch_raises(self):
        sol = solve_instance(TWO_GOODS_CORRELATED)
        with pytest.raises(ValidationError):
            verify_mechanism(TWO_BUYERS_123, sol.mechanism)

    def test_random_instances_self_consistent(self):
        rng = random.Random(20240411)
        for _ in range(100):
            inst = rand_instance(rng)
            sol = solve_instance(inst)
            report = verify_mechanism(inst, sol.mechanism)
            assert report.valid, report.failure
            assert report.revenue == sol.revenue
            assert report.buyer_surplus == sol.buyer_surplus


class TestInvariants:
    def test_scale_invariance(self):
        rng = random.Random(77)
        lam = F(7, 3)
        for _ in range(25):
            inst = rand_instance(rng)
            scaled = DiscreteInstance(
                inst.goods,
                tuple(
                    tuple(BuyerType(t.prob, tuple(lam * v for v in t.values)) for t in prior)
                    for prior in inst.buyers
                ),
            )
            base = solve_instance(inst)
            big = solve_instance(scaled)
            assert big.revenue == lam * base.revenue
            assert big.buyer_surplus == lam * base.buyer_surplus

    def test_single_buyer_single_good_matches_best_posted_price(self):
        rng = random.Random(99)
        for _ in range(40):
            n = rng.randint(1, 5)
            weights = [rng.randint(1, 4) for _ in range(n)]
            total = sum(weights)
            values = rng.sample(range(1, 40), n)
            inst = DiscreteInstance(
                1,
                (
                    tuple(
                        BuyerType(F(w, total), (F(v),))
                        for w, v in zip(weights, sorted(values))
                    ),
                ),
            )
            sol = solve_instance(inst)
            best = max(
                F(v) * sum(t.prob for t in inst.buyers[0] if t.values[0] >= v)
                for t2 in inst.buyers[0]
                for v in [t2.values[0]]
            )
            assert sol.revenue == best

    def test_grid_allocation_matches_closed_form_winner(self):
        n = 8
        inst = uniform_grid_instance(n)
        sol = solve_instance(inst)
        mech = sol.mechanism
        seg = segment(0, 1)
        agree = 0
        for t, jt in enumerate(joint_types(inst)):
            va = inst.buyers[0][jt[0]].values[0]
            vb = inst.buyers[1][jt[1]].values[0]
            qa, qb = mech.q[t][0][0], mech.q[t][1][0]
            if qa > qb and qa > 0:
                lp_winner = "A"
            elif qb > qa and qb > 0:
                lp_winner = "B"
            else:
                lp_winner = None if qa == 0 else "split"
            closed = myerson_outcome(seg, seg, va, vb).winner
            agree += lp_winner == closed
        assert agree >= F(95, 100) * n * n


class TestExport:
    def test_csv_shape_and_values(self):
        sol = solve_instance(TWO_BUYERS_123)
        lines = mechanism_to_csv(sol.mechanism).splitlines()
        assert lines[0] == "joint_type,buyer,good,q,r"
        assert len(lines) == 1 + 9 * 2
        # joint type (3,3): both bid 3; winner pays 5/2
        rows = [ln for ln in lines if ln.startswith("3-3,")]
        assert len(rows) == 2
        total_q = sum(F(ln.split(",")[3]) for ln in rows)
        assert total_q == 1
