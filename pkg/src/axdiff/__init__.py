"""Exact differential algebra for the exponential Ax-Schanuel inequality.

Presented differential fields, Kaehler forms and their Lie derivative,
rational D-varieties, residues on QQ(t), and a harness that walks through
the transcendence bound on concrete scenarios.
"""

from axdiff.ax import (AxScenario, AxVerdict, GroupPoint, HypothesisReport, TheoremViolation,
                       build_forms, check_hypotheses, group_mul, invariance_check,
                       log_derivative_hom, monomial_relation, verify_claims)
from axdiff.difffield import (DiffFieldPresentation, derive, is_constant, prolong,
                              q_relations_mod_constants)
from axdiff.dvariety import (AffineDVariety, CotangentClass, CotangentFlow, FunctionOnX,
                             PointOnX, cotangent_class, cotangent_flow_apply,
                             generic_sharp_point_check, induced_derivation, is_sharp_point,
                             shifted_tangent_ideal, tangent_space, validate_section)
from axdiff.forms import (DiffForm, constant_dependence, d, dlog, flat_check, lie_D1,
                          pair_partial, parse_form, rank_forms, trdeg)
from axdiff.kernel import RatFunc, parse_expr
from axdiff.places import (Place, RatForm1, claim5_local_check, dlog_residue_check,
                           ord_place, residue_at)
from axdiff.scenario import ScenarioDoc, build_objects, load_scenario, render_scenario

__version__ = "0.1.0"
