"""
Square-irreducibility of regular multisegments, decided combinatorially.

The package computes, by independent routes, the four equivalent criteria
for a regular multisegment (balanced counts, forbidden sub-shapes, the
Kazhdan-Lusztig value, the open-orbit rank condition), together with the
supporting calculus on segments, permutations and bi-sequences, and the
signed Kazhdan-Lusztig coset identities of the inflated group.
"""

from .biseq import (
    BiSequence,
    akl,
    bi_sequence,
    duplicate,
    dyck_bijections,
    factorize,
    multisegment_of,
    normalized_bisequences,
    parse_bisequence,
    sigma0,
)
from .criteria import (
    GlsReport,
    Verdict,
    basic_family,
    classify_minimal_unbalanced,
    complexity,
    decide_square_irreducible,
    depth,
    gls_check,
    grothendieck_expansion,
    has_forbidden_type,
    is_balanced,
)
from .klidentity import (
    CosetMatrix,
    birkhoff_decompositions,
    class_value,
    coset_matrix,
    latin_square_delta,
    verify_higher,
    verify_klidnt,
)
from .klpoly import KLPolynomial, kl_at_one, kl_oracle, kl_polynomial
from .multiseg import (
    Multisegment,
    Segment,
    contract,
    detachable_segments,
    dual,
    elementary_moves,
    expand_at,
    involution,
    lc_condition,
    left_derivative,
    link_data,
    obt_leq,
    parse_multisegment,
    precedes,
    right_derivative,
    soc_with_cuspidal,
)
from .perm import (
    avoids_patterns,
    bruhat_leq,
    flatten,
    inverse,
    length,
    parse_perm,
    smooth_pair_data,
    tau_delta,
)

__all__ = [name for name in dir() if not name.startswith("_")]
