"""Why two buyers with uniform values should mostly keep quiet.

Walks the headline numbers for two buyers whose values are i.i.d.
uniform on [0, 1]: total silence yields surplus 1/6, and the natural
ways to disclose more all do worse on the total, though an asymmetric
split does shift surplus toward the silent buyer.  Renders the winner
regions for two profiles as SVG next to this script.
"""

from pathlib import Path

from disclosure_games import IntervalPartition, SILENT, profile_surplus, zeno_partition
from disclosure_games.core import approx
from disclosure_games.svgplot import allocation_svg

HERE = Path(__file__).resolve().parent


def show(label, pa, pb):
    out = profile_surplus(pa, pb)
    print(f"{label}:")
    print(f"  buyer A {approx(out.u_a)}, buyer B {approx(out.u_b)}, "
          f"total {approx(out.total)}")
    return out


def main():
    half = IntervalPartition.from_string("0,1/2,1")

    show("both silent", SILENT, SILENT)
    show("both split at 1/2", half, half)
    asym = show("A splits at 1/2, B silent", half, SILENT)
    print(f"  ...the total {approx(asym.total)} beats silence, and the silent")
    print("  buyer gains at the discloser's expense.")

    print()
    print("pushing the splits toward zero (halving cascade on both sides):")
    for depth in (2, 4, 8, 12):
        z = zeno_partition(depth)
        out = profile_surplus(z, z)
        print(f"  depth {depth:2d}: total {approx(out.total)}")
    print("  the totals settle near 23/147 (about 0.1565), strictly below")
    print("  the silent 1/6 (about 0.1667): ever finer disclosure of the")
    print("  low end keeps hurting buyers in aggregate.")

    for name, pa, pb in (
        ("winner_regions_silent.svg", SILENT, SILENT),
        ("winner_regions_half_silent.svg", half, SILENT),
    ):
        target = HERE / name
        target.write_text(allocation_svg(pa, pb))
        print(f"wrote {target}")


if __name__ == "__main__":
    main()
