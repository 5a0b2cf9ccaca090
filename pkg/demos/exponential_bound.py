"""Walk through the exponential transcendence bound on two small fields.

Run with ``python3 demos/exponential_bound.py``.
"""

from axdiff import AxScenario, DiffFieldPresentation, verify_claims
from axdiff.forms import lie_D1, pair_partial

# u = exp(t): the derivation is dt = 1, du = u.
F = DiffFieldPresentation.from_table({"t": "1", "u": "u"})
v = verify_claims(AxScenario(F, ["t"], ["u"]))
print("one exponential")
print("  forms:", ", ".join(str(w) for w in v.forms))
for w in v.forms:
    print(f"  D1({w}) = {lie_D1(F, w)}, pairing = {pair_partial(F, w)}")
print(f"  trdeg {v.trdeg_value} >= {v.bound}: {v.satisfied}")

# u1 = exp(t), u2 = exp(t^2).  t^2 is algebraic over t, so only three of the
# four elements are independent, which is exactly the bound.
G = DiffFieldPresentation.from_table({"t": "1", "u1": "u1", "u2": "2*t*u2"})
v = verify_claims(AxScenario(G, ["t", "t^2"], ["u1", "u2"]))
print("two exponentials")
print(f"  trdeg {v.trdeg_value} >= {v.bound}: {v.satisfied}")

# Drop the independence hypothesis: a = (t, 2t), b = (u, u^2).
v = verify_claims(AxScenario(F, ["t", "2*t"], ["u", "u^2"]))
print("dependent exponents")
print("  hypotheses that fail:", "; ".join(v.hypotheses.failures()))
print(f"  trdeg {v.trdeg_value} < {v.bound}, forms have rank {v.forms_rank}")
print("  constant dependency among the forms:", tuple(int(c) for c in v.dependency))
print("  b1^d1 * b2^d2 constant for d =", v.monomial_relation)
print("  relation among the exponents:", v.a_relation)
