"""Exact computation with interpolation Macdonald polynomials.

The package builds the shifted polynomials P*_mu(x; q, t), their (q,t)
binomial coefficients, the difference operators diagonal on them and the
symmetric Newton interpolation algorithms, all over the exact field of
rational functions in q, t and auxiliary parameters.
"""

from .exact import FieldElement, TruncatedSeries, parse_expression, series_expand, substitute
from .partitions import Partition, parse_partition
from .macdonald import H_norm, ShiftedSymPoly, interp_P_star, interp_P_star_oracle, macdonald_P
from .binomial import binom_qt, trinomial
from .newton import InterpolationResult, fhat_algorithm, fhat_direct, fhat_explicit, jack_binom, jack_fhat_fast
from .diffops import apply_Dstar

__all__ = [
    "FieldElement",
    "H_norm",
    "InterpolationResult",
    "Partition",
    "ShiftedSymPoly",
    "TruncatedSeries",
    "apply_Dstar",
    "binom_qt",
    "fhat_algorithm",
    "fhat_direct",
    "fhat_explicit",
    "interp_P_star",
    "interp_P_star_oracle",
    "jack_binom",
    "jack_fhat_fast",
    "macdonald_P",
    "parse_expression",
    "parse_partition",
    "series_expand",
    "substitute",
    "trinomial",
]
