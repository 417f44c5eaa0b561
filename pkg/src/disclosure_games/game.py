"""Disclosure games over discrete instances.

Buyers first publicly reveal which block of their partition their type
lies in; the seller then runs the revenue-optimal mechanism for the
disclosed posterior (ties among revenue-optimal mechanisms resolved in
the buyers' favor, matching lpmech's second stage).  This module
evaluates a partition profile by solving one LP per tuple of messages and
aggregating with exact block probabilities, and searches all partition
profiles for the buyer-optimal one.

Message tuples repeat across profiles, so an evaluator instance caches
conditioned solves; a full search over an instance touches each distinct
message tuple once.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (
    DiscreteInstance,
    GuardExceeded,
    SetPartition,
    canonical_partition,
    condition_on_messages,
    enumerate_set_partitions,
    format_rational,
    validate_partition,
)
from .lpmech import LPSolution, joint_types, solve_instance

SEARCH_GUARD = 10**6


@dataclass(frozen=True)
class GameOutcome:
    """Aggregate result of one partition profile.

    ``per_message`` maps each tuple of messages (one block per buyer) to
    its probability and the conditioned LP solution; ``efficient`` means
    every good is always fully sold to a buyer of maximal value for it.
    """

    expected_revenue: Fraction
    per_buyer_utility: tuple[Fraction, ...]
    total_surplus: Fraction
    per_message: Mapping[tuple, tuple[Fraction, LPSolution]]
    always_all_sold: bool
    efficient: bool

    def unsold_probability(self, k: int) -> Fraction:
        return sum(
            (prob * sol.mechanism.unsold_probability(k)
             for prob, sol in self.per_message.values()),
            Fraction(0),
        )


def _allocation_flags(sol: LPSolution) -> tuple[bool, bool]:
    inst = sol.mechanism.instance
    mech = sol.mechanism
    all_sold = True
    efficient = True
    for t, jt in enumerate(joint_types(inst)):
        for k in range(inst.goods):
            total = sum((mech.q[t][j][k] for j in range(inst.n_buyers)), Fraction(0))
            if total != 1:
                all_sold = False
                efficient = False
                continue
            best = max(inst.buyers[j][jt[j]].values[k] for j in range(inst.n_buyers))
            for j in range(inst.n_buyers):
                if mech.q[t][j][k] > 0 and inst.buyers[j][jt[j]].values[k] < best:
                    efficient = False
    return all_sold, efficient


class GameEvaluator:
    """Evaluates partition profiles for one instance with shared LP caching."""

    def __init__(self, inst: DiscreteInstance):
        self.instance = inst
        self._cache: dict[tuple, tuple[Fraction, LPSolution, bool, bool]] = {}

    def _solve_messages(self, messages: tuple[tuple[int, ...], ...]):
        hit = self._cache.get(messages)
        if hit is not None:
            return hit
        cond = condition_on_messages(self.instance, messages)
        prob = Fraction(1)
        for mass in cond.masses:
            prob *= mass
        sol = solve_instance(cond.instance)
        all_sold, efficient = _allocation_flags(sol)
        entry = (prob, sol, all_sold, efficient)
        self._cache[messages] = entry
        return entry

    def evaluate(self, profile: Sequence[Sequence[Sequence[int]]]) -> GameOutcome:
        inst = self.instance
        profile = tuple(
            validate_partition(part, inst.n_types(j)) for j, part in enumerate(profile)
        )
        revenue = Fraction(0)
        per_buyer = [Fraction(0)] * inst.n_buyers
        per_message: dict[tuple, tuple[Fraction, LPSolution]] = {}
        always_all_sold = True
        efficient = True
        for messages in itertools.product(*profile):
            prob, sol, sold, eff = self._solve_messages(messages)
            per_message[messages] = (prob, sol)
            revenue += prob * sol.revenue
            for j, u in enumerate(sol.mechanism.per_buyer_surplus()):
                per_buyer[j] += prob * u
            always_all_sold &= sold
            efficient &= eff
        total = sum(per_buyer, Fraction(0))
        return GameOutcome(
            expected_revenue=revenue,
            per_buyer_utility=tuple(per_buyer),
            total_surplus=total,
            per_message=per_message,
            always_all_sold=always_all_sold,
            efficient=efficient,
        )


def evaluate_profile(inst: DiscreteInstance, profile) -> GameOutcome:
    return GameEvaluator(inst).evaluate(profile)


def no_disclosure_profile(inst: DiscreteInstance) -> tuple[SetPartition, ...]:
    return tuple((tuple(range(inst.n_types(j))),) for j in range(inst.n_buyers))


def full_disclosure_profile(inst: DiscreteInstance) -> tuple[SetPartition, ...]:
    return tuple(
        tuple((i,) for i in range(inst.n_types(j))) for j in range(inst.n_buyers)
    )


def connected_partitions(inst: DiscreteInstance, j: int) -> list[SetPartition]:
    """Partitions of buyer j's types into blocks contiguous in value order.

    Types are ordered by their value vectors (lexicographically for several
    goods); a partition is connected when each block is a run of that
    order.  There are 2^(n-1) of them.
    """
    n = inst.n_types(j)
    order = sorted(range(n), key=lambda i: inst.buyers[j][i].values)
    out = []
    for cuts in itertools.product((False, True), repeat=n - 1):
        blocks = []
        block = [order[0]]
        for pos, cut in enumerate(cuts, start=1):
            if cut:
                blocks.append(block)
                block = []
            block.append(order[pos])
        blocks.append(block)
        out.append(canonical_partition(blocks))
    return out


def search_profiles(
    inst: DiscreteInstance,
    connected_only: bool = False,
    guard: int = SEARCH_GUARD,
) -> list[tuple[tuple[SetPartition, ...], GameOutcome]]:
    """Evaluate every partition profile, best buyer surplus first.

    Exact-rational surplus ties are broken toward the canonically smaller
    profile, so rankings are reproducible.
    """
    per_buyer: list[list[SetPartition]] = []
    for j in range(inst.n_buyers):
        if connected_only:
            per_buyer.append(connected_partitions(inst, j))
        else:
            per_buyer.append(list(enumerate_set_partitions(inst.n_types(j))))
    count = 1
    for parts in per_buyer:
        count *= len(parts)
    if count > guard:
        raise GuardExceeded(f"profile search would evaluate {count} > {guard} profiles")
    evaluator = GameEvaluator(inst)
    results = [
        (profile, evaluator.evaluate(profile))
        for profile in itertools.product(*per_buyer)
    ]
    results.sort(key=lambda pr: (-pr[1].total_surplus, pr[0]))
    return results


def search_to_csv(results: Sequence[tuple[tuple[SetPartition, ...], GameOutcome]]) -> str:
    if not results:
        return "profile,revenue,total_surplus,always_all_sold,efficient\n"
    n_buyers = len(results[0][1].per_buyer_utility)
    cols = ["profile", "revenue"]
    cols += [f"u{j + 1}" for j in range(n_buyers)]
    cols += ["total_surplus", "always_all_sold", "efficient"]
    lines = [",".join(cols)]
    for profile, outcome in results:
        doc = json.dumps(
            [[[i + 1 for i in block] for block in part] for part in profile],
            separators=(",", ":"),
        )
        cells = ['"' + doc.replace('"', '""') + '"', format_rational(outcome.expected_revenue)]
        cells += [format_rational(u) for u in outcome.per_buyer_utility]
        cells += [
            format_rational(outcome.total_surplus),
            str(outcome.always_all_sold).lower(),
            str(outcome.efficient).lower(),
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# Two i.i.d. buyers who are almost surely worth 1000, but with a small
# chance have value 1 or 2: disclosure of "low or high" strictly helps.
RARE_LOWS_INSTANCE = DiscreteInstance.build(
    1,
    [
        [("1/200", ["1"]), ("1/200", ["2"]), ("99/100", ["1000"])],
        [("1/200", ["1"]), ("1/200", ["2"]), ("99/100", ["1000"])],
    ],
)

LOW_HIGH_PROFILE = (((0, 1), (2,)), ((0, 1), (2,)))


@dataclass(frozen=True)
class RareLowsReport:
    instance: DiscreteInstance
    no_disclosure: GameOutcome
    low_high: GameOutcome
    low_low_probability: Fraction
    low_low_solution: LPSolution


def rare_lows_regression() -> RareLowsReport:
    """Evaluate the built-in low/high example where disclosure strictly helps.

    With no disclosure the seller prices at 1000 and buyer surplus is zero;
    when both buyers disclose "low", the subgame always sells to a
    highest-value buyer, and a low buyer of value 2 retains positive
    utility.
    """
    evaluator = GameEvaluator(RARE_LOWS_INSTANCE)
    none = evaluator.evaluate(no_disclosure_profile(RARE_LOWS_INSTANCE))
    low_high = evaluator.evaluate(LOW_HIGH_PROFILE)
    low_low_key = ((0, 1), (0, 1))
    prob, sol = low_high.per_message[low_low_key]
    return RareLowsReport(
        instance=RARE_LOWS_INSTANCE,
        no_disclosure=none,
        low_high=low_high,
        low_low_probability=prob,
        low_low_solution=sol,
    )
