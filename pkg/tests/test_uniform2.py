import random
from fractions import Fraction

import pytest

from disclosure_games.core import IntervalPartition, ValidationError
from disclosure_games.geometry import polygon_area
from disclosure_games.uniform2 import (
    UniformSegment,
    Witness,
    efficiency_witness,
    full_disclosure_vs_silent_limit,
    inverse_virtual,
    myerson_outcome,
    pair_surplus,
    profile_surplus,
    segment,
    surplus_to_csv,
    threshold_partition,
    threshold_surplus,
    virtual_value,
    winner_region,
    zeno_partition,
)

F = Fraction
SILENT = IntervalPartition.from_string("0,1")
HALF = IntervalPartition.from_string("0,1/2,1")


def rand_fraction(rng, lo=F(0), hi=F(1), den=2**24):
    return lo + (hi - lo) * F(rng.randrange(den + 1), den)


def rand_partition(rng, max_blocks=4):
    k = rng.randint(1, max_blocks)
    cuts = sorted({F(rng.randrange(1, 64), 64) for _ in range(k - 1)})
    return IntervalPartition(tuple([F(0)] + cuts + [F(1)]))


class TestVirtualValues:
    def test_formula(self):
        seg = segment("1/2", "1")
        assert virtual_value(F(3, 4), seg) == F(1, 2)
        assert inverse_virtual(F(1, 2), seg) == F(3, 4)

    def test_round_trip(self):
        rng = random.Random(7)
        for _ in range(50):
            seg = segment(0, rand_fraction(rng, F(1, 8), F(1)))
            v = rand_fraction(rng, seg.a, seg.b)
            assert inverse_virtual(virtual_value(v, seg), seg) == v

    def test_reserve_is_half_the_top(self):
        assert inverse_virtual(F(0), segment(0, 1)) == F(1, 2)
        assert inverse_virtual(F(0), segment("1/4", "3/4")) == F(3, 8)


class TestMyersonOutcome:
    def test_mixed_quadrant_point(self):
        out = myerson_outcome(segment(0, "1/2"), segment("1/2", 1), F(3, 8), F(9, 16))
        assert out.winner == "A"
        assert out.payment == F(5, 16)

    def test_tie_goes_to_a(self):
        out = myerson_outcome(segment(0, 1), segment(0, 1), F(3, 4), F(3, 4))
        assert out.winner == "A"
        assert out.payment == F(3, 4)

    def test_no_sale_below_both_reserves(self):
        out = myerson_outcome(segment(0, 1), segment(0, 1), F(1, 4), F(1, 3))
        assert out.winner is None

    def test_payment_clamps_at_segment_bottom(self):
        # B's virtual value is negative, A's reserve b/2 sits below a
        out = myerson_outcome(segment("3/4", 1), segment(0, "1/2"), F(7, 8), F(1, 8))
        assert out.winner == "A"
        assert out.payment == F(3, 4)

    def test_point_mass_acts_as_reserve(self):
        pm = segment("1/2", "1/2")
        u = segment(0, 1)
        win = myerson_outcome(pm, u, F(1, 2), F(7, 8))
        assert win.winner == "B" and win.payment == F(3, 4)
        lose = myerson_outcome(pm, u, F(1, 2), F(5, 8))
        assert lose.winner == "A" and lose.payment == F(1, 2)
        # exact tie: sale goes to the continuous buyer
        tie = myerson_outcome(pm, u, F(1, 2), F(3, 4))
        assert tie.winner == "B" and tie.payment == F(3, 4)

    def test_two_point_masses_extract_fully(self):
        out = myerson_outcome(segment("1/3", "1/3"), segment("2/3", "2/3"), F(1, 3), F(2, 3))
        assert out.winner == "B" and out.payment == F(2, 3)

    def test_winner_never_pays_above_value(self):
        rng = random.Random(11)
        for _ in range(300):
            a, b = sorted(rand_fraction(rng, den=64) for _ in range(2))
            c, d = sorted(rand_fraction(rng, den=64) for _ in range(2))
            sa, sb = UniformSegment(a, b), UniformSegment(c, d)
            va, vb = rand_fraction(rng, a, b), rand_fraction(rng, c, d)
            out = myerson_outcome(sa, sb, va, vb)
            if out.winner == "A":
                assert out.payment <= va and virtual_value(va, sa) >= 0 or sa.is_point_mass
                assert out.payment <= va
            elif out.winner == "B":
                assert out.payment <= vb

    def test_value_outside_segment_rejected(self):
        with pytest.raises(ValidationError):
            myerson_outcome(segment(0, "1/2"), segment(0, 1), F(3, 4), F(1, 2))


class TestPairSurplus:
    def test_silent_pair(self):
        assert pair_surplus(segment(0, 1), segment(0, 1)) == (F(1, 12), F(1, 12))

    def test_low_low(self):
        assert pair_surplus(segment(0, "1/2"), segment(0, "1/2")) == (F(1, 24), F(1, 24))

    def test_high_high(self):
        assert pair_surplus(segment("1/2", 1), segment("1/2", 1)) == (F(1, 12), F(1, 12))

    def test_mixed_quadrant_conditionals(self):
        ua, ub = pair_surplus(segment(0, "1/2"), segment("1/2", 1))
        assert (ua, ub) == (F(1, 96), F(19, 96))
        # mirrored pair swaps the roles
        ua2, ub2 = pair_surplus(segment("1/2", 1), segment(0, "1/2"))
        assert (ua2, ub2) == (F(19, 96), F(1, 96))

    def test_point_mass_pairs(self):
        assert pair_surplus(segment("1/3", "1/3"), segment("3/4", "3/4")) == (F(0), F(0))
        # point at 0 vs U[0,1]: threshold 1/2, utility (1-1/2)^2/2 = 1/8
        assert pair_surplus(segment(0, 0), segment(0, 1)) == (F(0), F(1, 8))
        # point above the top virtual value: no surplus either side
        assert pair_surplus(segment(1, 1), segment(0, 1)) == (F(0), F(0))

    def test_degenerate_threshold_clamps_at_bottom(self):
        # point at 0 vs U[3/4, 1]: every type wins and pays 3/4
        assert pair_surplus(segment(0, 0), segment("3/4", 1)) == (F(0), F(1, 8))


class TestWinnerRegions:
    def test_regions_tile_the_rectangle(self):
        rng = random.Random(23)
        for _ in range(40):
            a, b = sorted(rand_fraction(rng, den=32) for _ in range(2))
            c, d = sorted(rand_fraction(rng, den=32) for _ in range(2))
            if a == b or c == d:
                continue
            sa, sb = UniformSegment(a, b), UniformSegment(c, d)
            areas = sum(polygon_area(winner_region(sa, sb, w)) for w in ("A", "B", None))
            assert areas == (b - a) * (d - c)

    def test_no_disclosure_geometry(self):
        sa = sb = segment(0, 1)
        assert polygon_area(winner_region(sa, sb, None)) == F(1, 4)
        assert polygon_area(winner_region(sa, sb, "A")) == F(3, 8)
        assert polygon_area(winner_region(sa, sb, "B")) == F(3, 8)

    def test_membership_matches_outcomes(self):
        rng = random.Random(29)
        sa, sb = segment(0, "1/2"), segment("1/4", 1)
        regions = {w: winner_region(sa, sb, w) for w in ("A", "B", None)}
        for _ in range(200):
            va = rand_fraction(rng, sa.a, sa.b, den=128)
            vb = rand_fraction(rng, sb.a, sb.b, den=128)
            out = myerson_outcome(sa, sb, va, vb)
            poly = regions[out.winner]
            # winner's region must contain the point (boundary included)
            assert _contains(poly, va, vb)


def _contains(poly, x, y):
    n = len(poly)
    if n < 3:
        return False
    sign = 0
    for i in range(n):
        (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % n]
        cross = (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0)
        if cross == 0:
            continue
        s = 1 if cross > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            return False
    return True


class TestProfileSurplus:
    def test_half_half_rows(self):
        rep = profile_surplus(HALF, HALF)
        assert rep.total == F(1, 6)
        by_pair = {(row.seg_a.a, row.seg_b.a): row.total for row in rep.rows}
        assert by_pair[(F(0), F(0))] == F(1, 48)
        assert by_pair[(F(1, 2), F(1, 2))] == F(1, 24)
        assert by_pair[(F(0), F(1, 2))] == F(5, 96)
        assert by_pair[(F(1, 2), F(0))] == F(5, 96)

    def test_rows_sum_to_totals(self):
        rng = random.Random(31)
        for _ in range(20):
            pa, pb = rand_partition(rng), rand_partition(rng)
            rep = profile_surplus(pa, pb)
            assert sum(r.u_a for r in rep.rows) == rep.u_a
            assert sum(r.u_b for r in rep.rows) == rep.u_b
            assert sum(r.prob for r in rep.rows) == 1

    def test_no_disclosure(self):
        rep = profile_surplus(SILENT, SILENT)
        assert (rep.u_a, rep.u_b) == (F(1, 12), F(1, 12))

    def test_half_vs_silent(self):
        rep = profile_surplus(HALF, SILENT)
        assert rep.u_a == F(13, 128)
        assert rep.u_b == F(9, 128)
        assert rep.total == F(11, 64)


class TestThresholdFamily:
    def test_quarter_threshold_low_low(self):
        split = threshold_surplus(F(1, 4))
        assert split.low_low == F(1, 768)

    @pytest.mark.parametrize("t", [F(0), F(1, 8), F(1, 4), F(1, 3), F(5, 12), F(1, 2)])
    def test_closed_forms(self, t):
        split = threshold_surplus(t)
        assert split.low_low == t**3 / 12
        assert split.high_high == F(1, 12) - t / 8
        assert split.high_low == t / 8 - t**2 / 16 + t**3 / 48
        assert split.low_high == t**2 / 16 - 5 * t**3 / 48
        assert split.per_buyer == F(1, 12)
        assert split.total == F(1, 6)

    def test_random_thresholds_keep_the_invariant_total(self):
        rng = random.Random(37)
        for _ in range(25):
            t = rand_fraction(rng, F(0), F(1, 2), den=240)
            assert threshold_surplus(t).total == F(1, 6)

    def test_outside_range_rejected(self):
        with pytest.raises(ValidationError):
            threshold_surplus(F(2, 3))

    def test_matches_profile_surplus(self):
        t = F(1, 3)
        split = threshold_surplus(t)
        rep = profile_surplus(threshold_partition(t), threshold_partition(t))
        assert rep.u_a == split.per_buyer
        assert rep.total == split.total


class TestZeno:
    def test_breakpoints(self):
        assert zeno_partition(0).breakpoints == (F(0), F(1))
        assert zeno_partition(2).breakpoints == (F(0), F(1, 4), F(1, 2), F(1))
        assert len(zeno_partition(12).breakpoints) == 14

    def test_depth_one_is_the_half_split(self):
        assert zeno_partition(1).breakpoints == HALF.breakpoints

    def test_own_surplus_grows_against_a_silent_buyer(self):
        # repeated halving refines toward the discloser-optimal partition,
        # so the discloser's utility rises with depth (it does not shrink
        # toward the exact-disclosure limit, which a uniform mesh reaches)
        values = [profile_surplus(zeno_partition(k), SILENT).u_a for k in range(1, 7)]
        assert values[0] == F(13, 128)
        assert values[1] == F(325, 3072)
        assert all(x < y for x, y in zip(values, values[1:]))

    def test_symmetric_zeno_approaches_the_limit(self):
        target = F(23, 147)
        gaps = []
        for k in (2, 4, 6):
            p = zeno_partition(k)
            gaps.append(abs(profile_surplus(p, p).total - target))
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[-1] < F(1, 1000)


def test_full_disclosure_vs_silent_limit():
    assert full_disclosure_vs_silent_limit() == (F(0), F(1, 24))


def test_uniform_mesh_refinement_approaches_the_limit():
    # past the two-block optimum, finer equal-width disclosure against a
    # silent buyer drains the discloser's utility toward the (0, 1/24) limit
    ua_seq, ub_seq = [], []
    for k in (1, 2, 3, 4, 5):
        blocks = 2**k
        pa = IntervalPartition(tuple(F(i, blocks) for i in range(blocks + 1)))
        rep = profile_surplus(pa, SILENT)
        ua_seq.append(rep.u_a)
        ub_seq.append(rep.u_b)
    assert all(x > y for x, y in zip(ua_seq, ua_seq[1:]))
    assert all(x > y for x, y in zip(ub_seq, ub_seq[1:]))
    assert ua_seq[-1] < F(1, 64)
    assert abs(ub_seq[-1] - F(1, 24)) < F(1, 500)


class TestEfficiencyWitness:
    def test_half_vs_silent_case(self):
        w = efficiency_witness(HALF, SILENT)
        assert isinstance(w, Witness)
        assert (w.v_a, w.v_b) == (F(1, 2), F(5, 8))
        assert w.kind == "lower_value_wins"
        assert w.outcome.winner == "A"

    def test_silent_profile_has_a_no_sale_point(self):
        w = efficiency_witness(SILENT, SILENT)
        assert w.kind == "no_sale"
        assert (w.v_a, w.v_b) == (F(1, 4), F(0))

    def test_fully_disclosing_is_efficient(self):
        assert efficiency_witness(None, None) == "fully disclosing"

    def test_exact_discloser_against_silent(self):
        w = efficiency_witness(None, SILENT)
        assert w.kind == "lower_value_wins"
        assert w.seg_a.is_point_mass

    def test_random_profiles_always_yield_confirmed_witnesses(self):
        rng = random.Random(41)
        kinds = set()
        for _ in range(150):
            w = efficiency_witness(rand_partition(rng), rand_partition(rng))
            assert isinstance(w, Witness)  # _classify already replayed it
            kinds.add(w.kind)
        assert "lower_value_wins" in kinds

    def test_finely_partitioned_opponent_hits_the_low_block_case(self):
        pa = IntervalPartition.from_string("0,7/8,1")
        pb = IntervalPartition.from_string("0,1/2,13/16,1")
        w = efficiency_witness(pa, pb)
        assert w.kind == "lower_value_wins"
        assert w.outcome.winner == "B"
        assert w.v_b < w.v_a


class TestMonteCarloAgreement:
    def test_mixed_pair_agrees_within_four_sigma(self):
        sa, sb = segment(0, "1/2"), segment("1/2", 1)
        exact_a, exact_b = pair_surplus(sa, sb)
        rng = random.Random(12345)
        n = 40_000
        tot_a = tot_b = 0.0
        sq_a = sq_b = 0.0
        for _ in range(n):
            va = rand_fraction(rng, sa.a, sa.b, den=2**32)
            vb = rand_fraction(rng, sb.a, sb.b, den=2**32)
            out = myerson_outcome(sa, sb, va, vb)
            ua = float(va - out.payment) if out.winner == "A" else 0.0
            ub = float(vb - out.payment) if out.winner == "B" else 0.0
            tot_a += ua
            tot_b += ub
            sq_a += ua * ua
            sq_b += ub * ub
        for tot, sq, exact in ((tot_a, sq_a, exact_a), (tot_b, sq_b, exact_b)):
            mean = tot / n
            var = max(sq / n - mean * mean, 1e-12)
            se = (var / n) ** 0.5
            assert abs(mean - float(exact)) <= 4 * se


class TestCsvExport:
    def test_columns_and_row_count(self):
        pa = IntervalPartition.from_string("0,1/2,1")
        text = surplus_to_csv(profile_surplus(pa, SILENT))
        lines = text.splitlines()
        assert lines[0] == "a,b,c,d,prob,uA,uB"
        assert len(lines) == 3
        assert lines[1] == "0,1/2,0,1,1/2,7/384,19/384"

    def test_utility_columns_sum_to_totals(self):
        pa = IntervalPartition.from_string("0,1/4,2/3,1")
        pb = IntervalPartition.from_string("0,1/2,1")
        out = profile_surplus(pa, pb)
        rows = surplus_to_csv(out).splitlines()[1:]
        ua = sum(F(r.split(",")[5]) for r in rows)
        ub = sum(F(r.split(",")[6]) for r in rows)
        assert (ua, ub) == (out.u_a, out.u_b)
