"""Two auctions, two morals: disclosure can hurt or rescue buyers.

First a three-value auction where saying nothing is strictly the best
joint policy among all 25 partition profiles.  Then an instance with a
dominant high value where silence hands the seller everything, and a
coarse low/high disclosure claws back a sliver of surplus.
"""

from disclosure_games import (
    DiscreteInstance,
    no_disclosure_profile,
    rare_lows_regression,
    search_profiles,
)
from disclosure_games.core import approx

AUCTION = DiscreteInstance.build(
    1,
    [
        [("1/4", ["1"]), ("1/4", ["2"]), ("1/2", ["3"])],
        [("1/4", ["1"]), ("1/4", ["2"]), ("1/2", ["3"])],
    ],
)


def main():
    print("two bidders, values 1, 2, 3 with probabilities 1/4, 1/4, 1/2:")
    ranked = search_profiles(AUCTION)
    silent = no_disclosure_profile(AUCTION)
    for rank, (profile, out) in enumerate(ranked[:4], start=1):
        tag = "  <- silence" if profile == silent else ""
        print(f"  rank {rank}: total {approx(out.total_surplus)}{tag}")
    print(f"  ({len(ranked)} profiles searched; silence is strictly first)")
    print()

    print("now values 1, 2, 1000 with probabilities 1/200, 1/200, 99/100:")
    report = rare_lows_regression()
    print(f"  silence: revenue {approx(report.no_disclosure.expected_revenue)}, "
          f"buyer surplus {approx(report.no_disclosure.total_surplus)}")
    print("  the seller prices for the 1000s and low buyers never trade.")
    print(f"  low/high disclosure: buyer surplus "
          f"{approx(report.low_high.total_surplus)} > 0")
    sol = report.low_low_solution
    print(f"  in the rare both-low subgame (probability "
          f"{approx(report.low_low_probability)}) the good always sells,")
    print(f"  revenue {approx(sol.revenue)}, buyer surplus {approx(sol.buyer_surplus)}:")
    print("  a value-2 buyer facing a value-1 rival keeps real surplus again.")


if __name__ == "__main__":
    main()
