"""Exact algebra: rational functions, parsing, linear algebra, Groebner bases."""

from axdiff.kernel.groebner import groebner_basis, normal_form
from axdiff.kernel.linalg import integer_kernel, linear_kernel, rank, rref
from axdiff.kernel.parse import (
    ParseError,
    UnknownSymbolError,
    format_poly,
    format_ratfunc,
    parse_ast,
    parse_expr,
)
from axdiff.kernel.partfrac import PartialFractions, partial_fractions
from axdiff.kernel.ratfunc import MPoly, RatFunc, poly_ring, to_fraction


def partial_derivative(f: RatFunc, v: str) -> RatFunc:
    return f.partial(v)


__all__ = [
    "MPoly", "RatFunc", "ParseError", "UnknownSymbolError", "PartialFractions",
    "format_poly", "format_ratfunc", "groebner_basis", "integer_kernel",
    "linear_kernel", "normal_form", "parse_ast", "parse_expr",
    "partial_derivative", "partial_fractions", "poly_ring", "rank", "rref",
    "to_fraction",
]
