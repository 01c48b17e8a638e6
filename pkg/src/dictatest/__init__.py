"""Adaptive dictatorship tests on the boolean hypercube, with the Fourier and
Gowers machinery to verify their acceptance behavior exactly at desk scale."""

from .errors import DictatestError, GuardExceeded, InvariantViolation, SpecParseError
from .families import (
    build_family,
    dictator,
    junta,
    load_family,
    majority,
    noisy_dictator,
    parity,
    parse_fnspec,
    planted_decoder_family,
    random_family,
    random_folded,
)
from .fourier import (
    Spectrum,
    hamming_weights,
    influence,
    influence_combinatorial,
    inverse_wht,
    low_degree_influence,
    product_function,
    spectrum_counts,
    subset_zeta,
    wht,
)
from .functions import (
    BitVector,
    BooleanFunction,
    FoldedOracle,
    RealPointFunction,
    evaluate,
    fold_query,
    folded_table,
    is_folded,
    make_folded,
    refold,
    table_from_hex,
    table_to_hex,
)
from .gowers import (
    IndexedFamily,
    find_influential_pair,
    gowers_inner_product,
    gowers_inner_product_exact,
    gowers_inner_product_mc,
    gowers_norm,
    gowers_norm_pow,
    linear_gowers_inner_product,
    linear_gowers_inner_product_exact,
    linear_gowers_inner_product_mc,
)
from .stats import binomial_stderr, wilson_interval
from .testers import (
    FunctionFamily,
    Hypergraph,
    QueryRecord,
    TestTranscript,
    basic_test_prob_exact,
    basic_test_prob_fourier,
    complete_hypergraph,
    htest_prob_exact,
    htest_prob_mc,
    noise_and_operator,
    noisy_spectrum_law_deviation,
    query_budget,
    run_basic_test,
    run_hypergraph_test,
    soundness_identity_holds,
)

__version__ = "0.1.0"

__all__ = [
    "BitVector",
    "BooleanFunction",
    "DictatestError",
    "FoldedOracle",
    "FunctionFamily",
    "GuardExceeded",
    "Hypergraph",
    "IndexedFamily",
    "InvariantViolation",
    "QueryRecord",
    "RealPointFunction",
    "SpecParseError",
    "Spectrum",
    "TestTranscript",
    "basic_test_prob_exact",
    "basic_test_prob_fourier",
    "binomial_stderr",
    "build_family",
    "complete_hypergraph",
    "dictator",
    "evaluate",
    "find_influential_pair",
    "fold_query",
    "folded_table",
    "gowers_inner_product",
    "gowers_inner_product_exact",
    "gowers_inner_product_mc",
    "gowers_norm",
    "gowers_norm_pow",
    "hamming_weights",
    "htest_prob_exact",
    "htest_prob_mc",
    "influence",
    "influence_combinatorial",
    "inverse_wht",
    "is_folded",
    "junta",
    "linear_gowers_inner_product",
    "linear_gowers_inner_product_exact",
    "linear_gowers_inner_product_mc",
    "load_family",
    "low_degree_influence",
    "majority",
    "make_folded",
    "noise_and_operator",
    "noisy_dictator",
    "noisy_spectrum_law_deviation",
    "parity",
    "parse_fnspec",
    "planted_decoder_family",
    "product_function",
    "query_budget",
    "random_family",
    "random_folded",
    "refold",
    "run_basic_test",
    "run_hypergraph_test",
    "soundness_identity_holds",
    "spectrum_counts",
    "subset_zeta",
    "table_from_hex",
    "table_to_hex",
    "wht",
    "wilson_interval",
]
