"""Coverwidth, the existential k-cover game and projective k-consistency."""

from .consistency import (
    DerivedInstance,
    Verdict,
    build_derived_instance,
    decide_promise,
    projective_k_consistency,
    run_projective_consistency,
)
from .errors import (
    CoverwidthError,
    InvalidDecomposition,
    InvalidScheme,
    InvalidStrategy,
    InvalidStructure,
    LiftDefect,
    NotTotal,
    OutsideUniverse,
    SignatureMismatch,
    SizeBoundExceeded,
)
from .game import (
    Strategy,
    compact_strategy_fixpoint,
    expand_compact,
    full_strategy_fixpoint,
    lift_homomorphism,
    verify_compact_strategy,
    verify_winning_strategy,
)
from .hypergraph import (
    Hypergraph,
    SchemeGraph,
    TreeDecomposition,
    coverwidth,
    coverwidth_oracle,
    decomposition_to_scheme,
    decomposition_weight,
    fill_in,
    hypergraph_of,
    is_scheme,
    is_tree_decomposition,
    k_unions,
    optimal_scheme,
    scheme_to_decomposition,
    scheme_weight,
    weight,
)
from .instance_io import Instance, InstanceError, parse_instance, serialize_instance
from .qcsp import (
    QuantifiedStructure,
    QuantifierBlock,
    comes_after,
    is_quantified_scheme,
    qcsp_consistency_decide,
    qcsp_oracle,
    quantified_coverwidth,
    quantified_strategy_fixpoint,
    quantifier_blocks,
)
from .relational import (
    Assignment,
    PartialMapping,
    RelationSymbol,
    Structure,
    are_homomorphically_equivalent,
    find_homomorphism,
    is_homomorphism,
    is_projective_homomorphism,
    validate_structure,
)
from .solver import SolveOutcome, Status, add_unary_constraint, solve_no_promise

__version__ = "0.1.0"
