"""Membership tables and the block structure of rational functions.

The existence pattern of approximants of a rational function is rigid:
membership holds along the two edges leaving the exact-degree corner and
fails strictly inside.  The demo prints the predicted and the computed
tables side by side for 1/(1 - z), then shows the CSV export.
"""

from pade_universal import (
    FormalPowerSeries,
    Polynomial,
    RationalFunction,
    emit_pade_table,
    hankel_determinant,
    rational_table_membership,
)

geometric = FormalPowerSeries([1.0] * 12)
rational = RationalFunction(Polynomial([1.0]), Polynomial([1.0, -1.0]), 0, 1)

print("=== 1/(1 - z): predicted vs computed membership, p, q = 0..4 ===")
print("  (#: member, .: not, ?: not decided by the degrees alone)")
header = "      " + "".join(f"q={q:<3d}" for q in range(5))
print(header)
for p in range(5):
    predicted = ""
    computed = ""
    for q in range(5):
        expect = rational_table_membership(rational, p, q, 0.0)
        predicted += {True: "#  ", False: ".  ", None: "?  "}[expect] + " "
        computed += ("#   " if hankel_determinant(geometric, p, q).nonvanishing else ".   ")
    print(f"  p={p}  {predicted}   |   {computed}")

print()
print("=== CSV export (first rows) ===")
for line in emit_pade_table(geometric, 2, 2).splitlines()[:6]:
    print(" ", line)
