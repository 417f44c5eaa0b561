"""Two buyers with values uniform on [0, 1] who disclose interval messages.

After both buyers reveal which interval of an agreed partition their value
lies in, the seller of a single good best-responds with the revenue-optimal
auction for the disclosed posteriors.  For a uniform posterior on [a, b]
that auction is characterized by the virtual value 2v - b: the good goes to
the buyer with the highest nonnegative virtual value, who pays the lowest
value that would still have won.  Buyer surplus integrates in closed form
over polygonal win regions, so every number here is an exact rational.

A partition block may degenerate to a single point (a buyer who disclosed
exactly); such a buyer acts as a deterministic outside option for the
seller, never earns surplus, and at an exact tie the sale goes to the
continuous buyer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import IntervalPartition, ValidationError, format_rational
from .geometry import clip_halfplane, integrate_linear, rectangle


@dataclass(frozen=True)
class UniformSegment:
    """A uniform posterior on [a, b], possibly a point mass when a == b."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        if not 0 <= self.a <= self.b:
            raise ValidationError(
                f"segment [{format_rational(self.a)}, {format_rational(self.b)}] is not ordered"
            )

    @property
    def is_point_mass(self) -> bool:
        return self.a == self.b

    @property
    def length(self) -> Fraction:
        return self.b - self.a

    def __str__(self) -> str:
        return f"[{format_rational(self.a)}, {format_rational(self.b)}]"


def segment(a, b) -> UniformSegment:
    return UniformSegment(Fraction(a), Fraction(b))


def virtual_value(v: Fraction, seg: UniformSegment) -> Fraction:
    """Marginal revenue of a uniform posterior on [a, b]: 2v - b."""
    return 2 * Fraction(v) - seg.b


def inverse_virtual(x: Fraction, seg: UniformSegment) -> Fraction:
    """Value whose virtual value is x, i.e. (x + b) / 2."""
    return (Fraction(x) + seg.b) / 2


@dataclass(frozen=True)
class AuctionOutcome:
    winner: Optional[str]  # "A", "B", or None for no sale
    payment: Fraction


def _check_in(seg: UniformSegment, v: Fraction, label: str) -> Fraction:
    v = Fraction(v)
    if not seg.a <= v <= seg.b:
        raise ValidationError(f"{label}={format_rational(v)} outside segment {seg}")
    return v


def myerson_outcome(
    seg_a: UniformSegment, seg_b: UniformSegment, v_a, v_b
) -> AuctionOutcome:
    """Winner and payment of the seller's optimal auction at one value profile.

    The winner pays the lowest value in their own segment that still wins,
    so payments never drop below the segment's lower end.  Against a point
    mass the continuous buyer wins exactly when their virtual value reaches
    the point value, ties included.
    """
    v_a = _check_in(seg_a, v_a, "v_a")
    v_b = _check_in(seg_b, v_b, "v_b")

    if seg_a.is_point_mass and seg_b.is_point_mass:
        if v_a >= v_b:
            return AuctionOutcome("A", v_a)
        return AuctionOutcome("B", v_b)
    if seg_a.is_point_mass:
        if virtual_value(v_b, seg_b) >= v_a:
            return AuctionOutcome("B", max(seg_b.a, inverse_virtual(v_a, seg_b)))
        return AuctionOutcome("A", v_a)
    if seg_b.is_point_mass:
        if virtual_value(v_a, seg_a) >= v_b:
            return AuctionOutcome("A", max(seg_a.a, inverse_virtual(v_b, seg_a)))
        return AuctionOutcome("B", v_b)

    phi_a = virtual_value(v_a, seg_a)
    phi_b = virtual_value(v_b, seg_b)
    if phi_a >= 0 and phi_a >= phi_b:
        return AuctionOutcome("A", max(seg_a.a, inverse_virtual(max(Fraction(0), phi_b), seg_a)))
    if phi_b >= 0:
        return AuctionOutcome("B", max(seg_b.a, inverse_virtual(max(Fraction(0), phi_a), seg_b)))
    return AuctionOutcome(None, Fraction(0))


def winner_region(seg_a: UniformSegment, seg_b: UniformSegment, winner) -> list:
    """Polygon of value profiles (v_a, v_b) where ``winner`` gets the good.

    Both segments must be nondegenerate.  The regions for "A", "B", and
    None tile the value rectangle (boundaries overlap on measure zero).
    """
    if seg_a.is_point_mass or seg_b.is_point_mass:
        raise ValidationError("win regions are only defined for nondegenerate segments")
    a, b, c, d = seg_a.a, seg_a.b, seg_b.a, seg_b.b
    rect = rectangle(a, b, c, d)
    if winner == "A":
        # 2*v_a - b >= 0 and 2*v_a - b >= 2*v_b - d
        poly = clip_halfplane(rect, 2, 0, b)
        return clip_halfplane(poly, 2, -2, b - d)
    if winner == "B":
        poly = clip_halfplane(rect, 0, 2, d)
        return clip_halfplane(poly, -2, 2, d - b)
    if winner is None:
        poly = clip_halfplane(rect, -2, 0, -b)
        return clip_halfplane(poly, 0, -2, -d)
    raise ValidationError(f"winner must be 'A', 'B', or None, got {winner!r}")


def pair_surplus(seg_a: UniformSegment, seg_b: UniformSegment) -> tuple[Fraction, Fraction]:
    """Expected buyer utilities conditional on the two disclosed segments.

    For a winner on [a, b] the expected payment telescopes against the
    virtual value, leaving utility b - v integrated over the win region.
    Point masses earn zero; the continuous opponent's win region is then a
    one-dimensional threshold handled directly.
    """
    if seg_a.is_point_mass and seg_b.is_point_mass:
        return Fraction(0), Fraction(0)
    if seg_a.is_point_mass:
        return Fraction(0), _point_vs_uniform(seg_a.a, seg_b)
    if seg_b.is_point_mass:
        return _point_vs_uniform(seg_b.a, seg_a), Fraction(0)
    scale = seg_a.length * seg_b.length
    ua = integrate_linear(winner_region(seg_a, seg_b, "A"), seg_a.b, -1, 0) / scale
    ub = integrate_linear(winner_region(seg_a, seg_b, "B"), seg_b.b, 0, -1) / scale
    return ua, ub


def _point_vs_uniform(point: Fraction, seg: UniformSegment) -> Fraction:
    # critical type: lowest value in the segment beating the outside option
    threshold = max(seg.a, inverse_virtual(point, seg))
    if threshold >= seg.b:
        return Fraction(0)
    return (seg.b - threshold) ** 2 / (2 * seg.length)


# ---------------------------------------------------------------------------
# partition profiles


@dataclass(frozen=True)
class SurplusRow:
    """One block pair's probability-weighted contribution to buyer surplus."""

    seg_a: UniformSegment
    seg_b: UniformSegment
    prob: Fraction
    u_a: Fraction
    u_b: Fraction

    @property
    def total(self) -> Fraction:
        return self.u_a + self.u_b


@dataclass(frozen=True)
class ProfileSurplus:
    rows: tuple[SurplusRow, ...]
    u_a: Fraction
    u_b: Fraction

    @property
    def total(self) -> Fraction:
        return self.u_a + self.u_b


def profile_surplus(pa: IntervalPartition, pb: IntervalPartition) -> ProfileSurplus:
    """Ex-ante buyer surplus of a disclosure profile, block pair by block pair.

    Row utilities are unconditional contributions (block-pair probability
    already applied), so the row columns sum exactly to the totals.
    """
    rows = []
    total_a = Fraction(0)
    total_b = Fraction(0)
    for lo_a, hi_a in pa.blocks():
        seg_a = UniformSegment(lo_a, hi_a)
        for lo_b, hi_b in pb.blocks():
            seg_b = UniformSegment(lo_b, hi_b)
            prob = seg_a.length * seg_b.length
            ua, ub = pair_surplus(seg_a, seg_b)
            row = SurplusRow(seg_a, seg_b, prob, prob * ua, prob * ub)
            rows.append(row)
            total_a += row.u_a
            total_b += row.u_b
    return ProfileSurplus(tuple(rows), total_a, total_b)


def surplus_to_csv(out: ProfileSurplus) -> str:
    """One CSV row per block pair: endpoints, pair probability, utilities."""
    lines = ["a,b,c,d,prob,uA,uB"]
    for row in out.rows:
        lines.append(
            ",".join(
                format_rational(x)
                for x in (
                    row.seg_a.a,
                    row.seg_a.b,
                    row.seg_b.a,
                    row.seg_b.b,
                    row.prob,
                    row.u_a,
                    row.u_b,
                )
            )
        )
    return "\n".join(lines) + "\n"


def threshold_partition(t) -> IntervalPartition:
    t = Fraction(t)
    if not 0 <= t < 1:
        raise ValidationError("threshold must lie in [0, 1)")
    if t == 0:
        return IntervalPartition((Fraction(0), Fraction(1)))
    return IntervalPartition((Fraction(0), t, Fraction(1)))


def zeno_partition(depth: int) -> IntervalPartition:
    """Breakpoints 0 < 2^-depth < ... < 1/2 < 1: repeated halving toward zero."""
    if not isinstance(depth, int) or depth < 0:
        raise ValidationError("depth must be a nonnegative integer")
    if depth > 64:
        raise ValidationError("depth beyond 64 is numerically pointless")
    points = [Fraction(0)] + [Fraction(1, 2**k) for k in range(depth, -1, -1)]
    return IntervalPartition(tuple(points))


@dataclass(frozen=True)
class ThresholdSplit:
    """Per-quadrant contributions to one buyer's surplus under a threshold t.

    Both buyers use the partition {[0, t], [t, 1]}; quadrants are named by
    (own block, other's block).  ``per_buyer`` is the four-way sum and
    ``total`` counts both buyers.
    """

    t: Fraction
    low_low: Fraction
    low_high: Fraction
    high_low: Fraction
    high_high: Fraction

    @property
    def per_buyer(self) -> Fraction:
        return self.low_low + self.low_high + self.high_low + self.high_high

    @property
    def total(self) -> Fraction:
        return 2 * self.per_buyer


def threshold_surplus(t) -> ThresholdSplit:
    """Quadrant breakdown for the symmetric one-threshold profile, t in [0, 1/2]."""
    t = Fraction(t)
    if not 0 <= t <= Fraction(1, 2):
        raise ValidationError("threshold breakdown is defined for t in [0, 1/2]")
    if t == 0:
        high = UniformSegment(Fraction(0), Fraction(1))
        ua, _ = pair_surplus(high, high)
        zero = Fraction(0)
        return ThresholdSplit(t, zero, zero, zero, ua)
    low = UniformSegment(Fraction(0), t)
    high = UniformSegment(t, Fraction(1))
    p_low = t
    p_high = 1 - t
    ll = p_low * p_low * pair_surplus(low, low)[0]
    lh = p_low * p_high * pair_surplus(low, high)[0]
    hl = p_high * p_low * pair_surplus(high, low)[0]
    hh = p_high * p_high * pair_surplus(high, high)[0]
    return ThresholdSplit(t, ll, lh, hl, hh)


def full_disclosure_vs_silent_limit() -> tuple[Fraction, Fraction]:
    """Utilities when buyer A discloses exactly and buyer B stays silent.

    A known value acts as a reserve the silent buyer must clear, so A earns
    nothing and B's utility integrates (1 - v_b) over the region where
    2*v_b - 1 >= v_a, a triangle.
    """
    region = clip_halfplane(rectangle(0, 1, 0, 1), -1, 2, 1)
    return Fraction(0), integrate_linear(region, 1, 0, -1)


# ---------------------------------------------------------------------------
# inefficiency witnesses


@dataclass(frozen=True)
class Witness:
    """A value profile where the seller's best response misallocates the good.

    ``kind`` is "no_sale" (positive value, no trade) or "lower_value_wins";
    ``outcome`` is the replayed auction outcome on the witnessed blocks.
    """

    v_a: Fraction
    v_b: Fraction
    seg_a: UniformSegment
    seg_b: UniformSegment
    outcome: AuctionOutcome
    kind: str


def _segment_at(partition: Optional[IntervalPartition], x: Fraction) -> UniformSegment:
    if partition is None:
        return UniformSegment(x, x)
    lo, hi = partition.block_containing(x)
    return UniformSegment(lo, hi)


def _classify(pa, pb, v_a: Fraction, v_b: Fraction) -> Witness:
    seg_a = _segment_at(pa, v_a)
    seg_b = _segment_at(pb, v_b)
    out = myerson_outcome(seg_a, seg_b, v_a, v_b)
    if out.winner is None:
        if max(v_a, v_b) <= 0:
            raise AssertionError("witness replay found no inefficiency")
        kind = "no_sale"
    else:
        won, lost = (v_a, v_b) if out.winner == "A" else (v_b, v_a)
        if won >= lost:
            raise AssertionError("witness replay found no inefficiency")
        kind = "lower_value_wins"
    return Witness(v_a, v_b, seg_a, seg_b, out, kind)


def efficiency_witness(pa: Optional[IntervalPartition], pb: Optional[IntervalPartition]):
    """Construct a value profile proving the profile's outcome inefficient.

    Takes the top block [a, b] of a partition with nondegenerate blocks
    (either buyer; None stands for disclosing exactly, whose blocks are all
    points) and probes x = (max(0, 2a - b) + a) / 2 in the other buyer's
    partition.  Case analysis on the containing block [c, d] yields either
    a no-sale profile or one where the lower-valued buyer wins.  Returns
    the string "fully disclosing" when both buyers disclose exactly, since
    exact disclosure is the one efficient profile.
    """
    if pa is None and pb is None:
        return "fully disclosing"
    if pa is not None:
        own, other, a_owns = pa, pb, True
    else:
        own, other, a_owns = pb, pa, False

    a, b = own.blocks()[-1]
    x = (max(Fraction(0), 2 * a - b) + a) / 2

    if x == 0:
        v_own, v_other = b / 4, Fraction(0)
    else:
        block = other.block_containing(x) if other is not None else (x, x)
        c, d = block
        if d <= a:
            eps = min((x - (2 * a - b)) / 2, b - a) / 2
            v_own, v_other = a + eps, (x + d) / 2
        elif d < b:
            v_own, v_other = d + (b - d) / 4, d
        elif d > b:
            v_own, v_other = b, b + (d - b) / 4
        else:  # d == b: step into the neighbor block below [a, b]
            a2, b2 = own.block_containing((x + a) / 2)
            v_own, v_other = b2, b2 + (d - b2) / 4

    v_a, v_b = (v_own, v_other) if a_owns else (v_other, v_own)
    return _classify(pa, pb, v_a, v_b)
