"""Posted menus from the mechanism LP, solved exactly.

Two single-buyer, two-good instances.  The solver maximizes seller
revenue, then buyer surplus on the revenue-optimal face, and the
resulting mechanism collapses to a short posted menu.  Every number is
an exact rational straight out of the simplex tableau.
"""

from disclosure_games import DiscreteInstance, posted_menu_view, solve_instance, verify_mechanism
from disclosure_games.core import approx

CORRELATED = DiscreteInstance.build(2, [[("1/2", ["3", "4"]), ("1/2", ["4", "9"])]])

PRODUCT = DiscreteInstance.build(
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


def solve_and_tell(name, inst):
    sol = solve_instance(inst)
    print(f"{name}:")
    print(f"  revenue {approx(sol.revenue)}, buyer surplus {approx(sol.buyer_surplus)}")
    print("  menu:")
    for line in posted_menu_view(sol).rstrip().splitlines():
        print(f"    {line}")
    for i, u in enumerate(sol.mechanism.interim_utilities()[0], start=1):
        print(f"  type {i} walks away with {approx(u)}")
    report = verify_mechanism(inst, sol.mechanism)
    print(f"  independent recheck: valid={report.valid}, "
          f"revenue {approx(report.revenue)}")
    print()


def main():
    solve_and_tell("two correlated types", CORRELATED)
    print("notice the type-2 unit of surplus: charging the full 13 for the")
    print("bundle would tempt type 2 into the cheap single-good row, so the")
    print("seller leaves exactly one unit on the table.")
    print()
    solve_and_tell("four product types", PRODUCT)
    print("here a randomized row appears: good 1 only 31 times in 35.  The")
    print("lottery is what keeps the highest type honest while the seller")
    print("squeezes the other three to zero.")


if __name__ == "__main__":
    main()
