"""Deciding whether disclosure can reach a surplus target is hard.

Any even-split problem (split a list of sizes into two halves of equal
sum) can be rewritten as a one-buyer disclosure game with one pool type
and one type per size.  The buyer clears the surplus target exactly
when an even split exists, so optimizing disclosure inherits the
problem's hardness.  This demo replays the construction and checks the
equivalence over every small size list.
"""

from disclosure_games import (
    PartitionProblem,
    reduce_to_buyer_opt,
    sweep_size_lists,
    verify_reduction,
)
from disclosure_games.core import approx, format_rational


def main():
    pp = PartitionProblem((2, 2, 4))
    red = reduce_to_buyer_opt(pp)
    print(f"sizes {list(pp.sizes)} become a buyer with types:")
    for i in range(red.instance.n):
        tag = "pool" if i == red.pool_index else f"size {pp.sizes[i - 1]}"
        print(f"  value {format_rational(red.instance.values[i]):>6} "
              f"prob {format_rational(red.instance.probs[i]):>5}  ({tag})")
    print(f"surplus target: {approx(red.target)}")

    report = verify_reduction(pp)
    half = [pp.sizes[i] for i in report.subset]
    print(f"even split found: {half} against the rest")
    print(f"best disclosure surplus {approx(report.best_outcome.total_surplus)} "
          f"meets the target; the pooled message sells at price "
          f"{format_rational(report.pooled_price)}")
    print()

    unsolvable = PartitionProblem((3, 5))
    rep = verify_reduction(unsolvable)
    print(f"sizes {list(unsolvable.sizes)} admit no even split, and indeed the")
    print(f"best surplus {approx(rep.best_outcome.total_surplus)} stays below "
          f"the target {approx(rep.reduced.target)}")
    print()

    problems = list(sweep_size_lists(4, 6))
    reports = [verify_reduction(p) for p in problems]
    solvable = sum(1 for r in reports if r.subset is not None)
    broken = [r for r in reports if not r.equivalent]
    print(f"sweep: {len(problems)} size lists with at most 4 entries up to 6,")
    print(f"  {solvable} solvable, equivalence verified on all "
          f"({len(broken)} exceptions)")


if __name__ == "__main__":
    main()
