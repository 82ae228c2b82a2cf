"""Exact weighted indices, the Dyson inequality on P1 x P1, Siegel-lemma sections
and the explicit bookkeeping of the Mordell-Weil gap principle."""
from .dyson import PointConfig, dyson2_report, dyson_report, random_dyson_corpus, strip_fibers
from .gap import (
    LAMBDA,
    MWLattice,
    assemble_vojta,
    bound_index_check,
    cone_cover,
    deduction_chain,
    finiteness_partition,
    vojta_predicate,
)
from .index import Weight, cauchy_bound_report, multiplicity, v_of, weighted_index
from .poly import X, Y, BiPoly, analyze_divisor, poly_shift, squarefree_decompose
from .siegel import SiegelProblem, siegel_solve, verify_solution

__all__ = [
    "BiPoly", "X", "Y", "poly_shift", "squarefree_decompose", "analyze_divisor",
    "Weight", "weighted_index", "multiplicity", "v_of", "cauchy_bound_report",
    "PointConfig", "dyson_report", "dyson2_report", "strip_fibers", "random_dyson_corpus",
    "SiegelProblem", "siegel_solve", "verify_solution",
    "LAMBDA", "MWLattice", "vojta_predicate", "cone_cover", "finiteness_partition",
    "deduction_chain", "assemble_vojta", "bound_index_check",
]
