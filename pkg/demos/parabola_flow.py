"""A D-variety, its sharp points, and the induced flow on a cotangent space.

Run with ``python3 demos/parabola_flow.py``.
"""

from axdiff import AffineDVariety, DiffFieldPresentation
from axdiff.dvariety import (cotangent_class, cotangent_dimension, cotangent_flow,
                             format_poly_k, induced_derivation, is_sharp_point,
                             shifted_tangent_ideal)

F = DiffFieldPresentation.from_table({"t": "1"})

# The parabola y = x^2 with x' = 1, y' = 2x: the curve (t, t^2) moves along it.
X = AffineDVariety(F, ("x", "y"), ["y - x^2"], ["1", "2*x"])
print(X)
print("shifted tangent equations:", [format_poly_k(p) for p in shifted_tangent_ideal(X)])
print("derivative of x^3 on X:", induced_derivation(X, "x^3"))
print("derivative of y/x on X:", induced_derivation(X, "y/x"))

alpha = X.point(["t", "t^2"])
print(f"{alpha} sharp:", is_sharp_point(X, alpha))
print(f"{X.point(['1', '1'])} sharp:", is_sharp_point(X, ["1", "1"]))
print("cotangent dimension at alpha:", cotangent_dimension(X, alpha))

flow = cotangent_flow(X, alpha)
for f in ["x", "y", "x*y + t"]:
    df = cotangent_class(X, alpha, f)
    lhs = flow.apply(df)
    rhs = cotangent_class(X, alpha, induced_derivation(X, f))
    # the printed vectors are representatives; equality is taken modulo dy - 2t dx
    print(f"D_V(d({f})) = {lhs}, d(({f})') = {rhs}, equal: {lhs == rhs}")
