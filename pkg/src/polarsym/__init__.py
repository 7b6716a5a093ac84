"""
polarsym: exact symmetry structure of polar codes on symmetric channels

Computes split-channel transition probabilities exactly, enumerates the
probability-equivalence classes of received vectors by brute force, and
predicts the class counts with closed-form combinatorics.
"""

from .channel import (
    AlphabetPartition,
    DRatio,
    ReceivedVector,
    SymmetricChannel,
    apply_mask,
    distinct_d_check,
    is_degenerate,
    load_channel,
    make_bec,
    make_bsc,
    multiset_channel,
    resolve_channel,
    validate,
)
from .config import DEFAULT_LIMITS, Limits
from .counting import (
    APrimePolicy,
    CountInstance,
    CountResult,
    Exactness,
    OccurrenceVector,
    bsc_class_count,
    class_count,
    count_self,
    count_symm,
    count_yprime,
    reduce_instance,
    upper_bound_i0,
)
from .equivalence import (
    ClassReport,
    Domain,
    EquivalenceClass,
    bsc_canonicalize,
    enumerate_classes,
    prob_equivalent,
    symmetry_orbit,
)
from .errors import (
    CapExceededError,
    ChannelError,
    ChannelValidationError,
    DimensionError,
    PolarSymError,
    ReductionError,
)
from .gf2 import BitMatrix, BitVector, kron_power, row_space, solve_tail, tail_rows
from .splitprob import split_prob, split_prob_general, w_combined

__version__ = "0.4.0"
__all__ = [
    'AlphabetPartition',
    'DRatio',
    'ReceivedVector',
    'SymmetricChannel',
    'apply_mask',
    'distinct_d_check',
    'is_degenerate',
    'load_channel',
    'make_bec',
    'make_bsc',
    'multiset_channel',
    'resolve_channel',
    'validate',
    'DEFAULT_LIMITS',
    'Limits',
    'APrimePolicy',
    'CountInstance',
    'CountResult',
    'Exactness',
    'OccurrenceVector',
    'bsc_class_count',
    'class_count',
    'count_self',
    'count_symm',
    'count_yprime',
    'reduce_instance',
    'upper_bound_i0',
    'ClassReport',
    'Domain',
    'EquivalenceClass',
    'bsc_canonicalize',
    'enumerate_classes',
    'prob_equivalent',
    'symmetry_orbit',
    'CapExceededError',
    'ChannelError',
    'ChannelValidationError',
    'DimensionError',
    'PolarSymError',
    'ReductionError',
    'BitMatrix',
    'BitVector',
    'kron_power',
    'row_space',
    'solve_tail',
    'tail_rows',
    'split_prob',
    'split_prob_general',
    'w_combined',
]
