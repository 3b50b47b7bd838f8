"""Maximum-period NFSRs from primitive LFSRs via Zech-logarithm cross-join pairs."""

from .crossjoin import (
    CrossJoinQuadruple,
    conjugate,
    cross_join_apply,
    disjoint_family,
    find_crossjoin_pairs,
    is_crossjoin_quadruple,
    state_at,
    synthesize_nfsr,
)
from .fryers import fryers_spectrum, helleseth_klove, spectrum_sum
from .gf2 import FieldCtx, Polynomial, ZechTable, field_new, zech_build_table, zech_lookup, zech_trinomial
from .register import (
    BitSequence,
    FeedbackFunction,
    algebraic_degree,
    evaluate,
    feedback_from_sequence,
    generate,
    msequence,
    period,
    step,
    verify_kind,
)

__version__ = "0.1.0"
