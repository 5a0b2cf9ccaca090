"""Orders, residues, and the residue theorem on the rational curve.

Run with ``python3 demos/residues.py``.
"""

from fractions import Fraction

from axdiff.kernel import parse_expr
from axdiff.places import (Place, RatForm1, claim5_local_check, finite_residues,
                           ord_place, relevant_places, residue_at)


def f(text):
    return parse_expr(text, ["t"])


e = f("3*(t - 1)^2/(t*(t + 2)^3)")
print("e =", e)
for p in relevant_places(e):
    w = RatForm1.dlog(e)
    print(f"  {p}: ord = {ord_place(e, p)}, res(de/e) = {residue_at(w, p)}")

w = RatForm1.of(f("1/t + 2/(t - 1)^2 - 5/(t + 3) + t"))
res = finite_residues(w)
print("finite residues of", w, "->", {str(k): str(v) for k, v in res.items()})
print("residue at infinity:", residue_at(w, Place.infinity()))
print("sum over all places:", sum(res.values(), Fraction(0)) + residue_at(w, Place.infinity()))

# If c1 db1/b1 + c2 db2/b2 = d(nu), the weighted orders cancel at every place.
report = claim5_local_check([f("t"), f("t^2")], [2, -1], f("0"))
for entry in report.entries:
    print(f"  {entry.place}: orders {entry.orders}, weighted {entry.weighted_order}")
print("all places balanced:", report.ok)
