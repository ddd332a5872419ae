"""Cluster algebra structure of Grassmannian coordinate rings, computed exactly."""

from .classify import (
    CartanSpec,
    Quiver,
    almost_positive_roots,
    classify_seed,
    correspondence_check,
    find_affine_certificate,
    recognize_dynkin,
    tau,
    toral_weight,
)
from .cache import read_cache, write_cache
from .cluster import (
    ExchangeGraph,
    ExtMatrix,
    Seed,
    VariableRegistry,
    check_skew_symmetrizable,
    explore,
    matrix_mutate,
    run_mutation_sequence,
    seed_mutate,
)
from .combinatorics import (
    Chord,
    Triangulation,
    WSCollection,
    akn_labels,
    build_initial_seed,
    chords_cross,
    double_reduced_word,
    enumerate_maximal_ws,
    triangulation_seed,
    unique_exchange,
    weakly_separated,
    zigzag_triangulation,
)
from .ksubset import KSubset
from .laurent import (
    LaurentPoly,
    VarId,
    lp_add,
    lp_denominator_vector,
    lp_div_exact,
    lp_eval,
    lp_mul,
)
from .suites import exchange_suite, numerator_positivity, positivity_suite, toric_suite
from .verify import (
    ConfigMatrix,
    cross,
    evaluate_variable,
    minor,
    special_function,
    toric_roundtrip,
    totally_positive_point,
    triple,
    verify_compound_determinants,
    verify_explicit_relations,
    verify_exchange_on_points,
    verify_schur_analogue,
)

__version__ = "0.1.0"
