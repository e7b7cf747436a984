"""Interval and circle exchange transformations with flips.

Combinatorics (signed permutations, induction transitions), exact matrix
algebra, induction orbits, graph searches, map dynamics with periodic-point
certificates, and the construction of self-induced minimal examples.
"""

from .perm import (
    FakeAmbiguity,
    FakeDiscontinuity,
    SignedPermutation,
    classify_fake_discontinuity,
    is_irreducible,
    transition_a,
    transition_b,
)
from .matrices import (
    PerronPair,
    is_eventually_positive,
    matrix_a,
    matrix_b,
    path_product,
    perron_eigenpair,
)
from .rauzy import (
    BoundaryError,
    RauzyState,
    StepRecord,
    follow_itinerary,
    rauzy_projective_step,
    rauzy_step,
    renormalization_orbit,
)
from .graph import (
    RauzyGraph,
    RauzyPath,
    build_graph,
    canonicalize_cycle,
    find_cycles_through,
    is_special,
)

__version__ = "0.1.0"
