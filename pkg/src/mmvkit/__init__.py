"""mmvkit: multiple mixed values over parity-constrained nested sums.

Word algebras (shuffle and quasi-shuffle), labeled 2-posets, regularized
double-shuffle relations with exact rational linear algebra, closed-form
theorem implementations, and high-precision numeric evaluation.
"""

from .indexcore import (Index, AltIndex, parse_index, index_to_word,
                        word_to_index, index_to_word_st, word_to_index_st,
                        dual_composition, mmv_to_alternating,
                        alternating_to_mmv)
from .wordalg import Word, LinComb, shuffle, stuffle, stuffle_indices, \
    dual_word, zblock
from .poset2 import Poset2, chain_poset, psi_poset, conv_poset, expand, \
    linear_extension_count, poset_value
from .regutils import ConstMonomial, TPoly, reg_shuffle, reg_stuffle, \
    rho_map, reg_dbsf
from .numeval import (default_digits, eval_word, eval_index, eval_value,
                      eval_convT, eval_psi_series, partial_T, partial_S)
from .linrel import RelationKit, RelationSet, rational_rank, generators, \
    fibonacci_bound, TABLE1, express
from .closedforms import (ClosedForm, thm_I_closed, psi_via_convT,
                          psi_via_mtv, zed, zed_tilde, zed_closed,
                          convT_from_psi, msv_double_closed,
                          invert_triangular, verify_identity, run_fixtures,
                          fixture_identities)
from .shell import parse, render, eval_expr

__version__ = "0.1.0"

__all__ = [
    "Index", "AltIndex", "parse_index", "index_to_word", "word_to_index",
    "index_to_word_st", "word_to_index_st", "dual_composition",
    "mmv_to_alternating", "alternating_to_mmv",
    "Word", "LinComb", "shuffle", "stuffle", "stuffle_indices", "dual_word",
    "zblock",
    "Poset2", "chain_poset", "psi_poset", "conv_poset", "expand",
    "linear_extension_count", "poset_value",
    "ConstMonomial", "TPoly", "reg_shuffle", "reg_stuffle", "rho_map",
    "reg_dbsf",
    "default_digits", "eval_word", "eval_index", "eval_value", "eval_convT",
    "eval_psi_series", "partial_T", "partial_S",
    "RelationKit", "RelationSet", "rational_rank", "generators",
    "fibonacci_bound", "TABLE1", "express",
    "ClosedForm", "thm_I_closed", "psi_via_convT", "psi_via_mtv", "zed",
    "zed_tilde", "zed_closed", "convT_from_psi", "msv_double_closed",
    "invert_triangular", "verify_identity", "run_fixtures",
    "fixture_identities",
    "parse", "render", "eval_expr",
]
