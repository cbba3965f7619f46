"""Exact flag f-vectors, k-Moebius functions, Eulerian-type checks, and
flag-vector cone certificates for graded posets."""

__version__ = "0.1.0"

from .posets import GradedPoset, build_poset, load_poset, save_poset
from .constructions import (boolean_lattice, chain, glued_rank8_poset,
                            matched_bipartite_poset, regular_swap, thicken,
                            thicken_range, thickened_chain, vertical_double)
from .flags import (FlagVector, KParam, LVector, LinearFunctional, alpha_map,
                    ce_index, change_basis, convolve, f_from_l, flag_count,
                    flag_f_vector, is_c_ee_polynomial, l_vector)
from .eulerian import (DSReport, MoebiusTable, ds_residuals,
                       is_half_eulerian, is_half_eulerian_parity,
                       is_k_eulerian, moebius_k, moebius_k_hall)
from .cone import (IntervalSystem, blockers, enumerate_interval_systems,
                   limit_l_vector, matrix_rank, rank8_certificate,
                   rank8_facet_functional, validate_functional)
from .exprs import parse_expr
from .subsets import is_even_set

__all__ = [name for name in dir() if not name.startswith("_")]
