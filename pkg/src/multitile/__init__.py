"""Exact verification of multiple tilings by translates of a convex polytope.

The package certifies tiling multiplicities over quasi-periodic translation
sets with exact arithmetic: rationals, a single real quadratic field, or
Q-linear spans of user-declared irrational generators with certified
intervals.
"""

from .enumerator import EnumeratorContext, L_closed, L_half_open, coverage_count
from .errors import (
    DimensionUnsupported,
    FieldClosureViolation,
    InputError,
    ModeUnavailable,
    MultitileError,
    PrecisionUnreachable,
    SignIndeterminate,
)
from .lattice import (
    Coset,
    Lattice,
    QuasiPeriodicSet,
    WindowMultiset,
    common_period,
    enumerate_in_polytope,
    fundamental_domain,
    lattice_coords,
    refine_lattice,
)
from .polytope import (
    HalfOpenPolytope,
    Polytope,
    ProbeDirection,
    contains_closed,
    contains_half_open,
    find_probe_direction,
    from_vertices,
)
from .scalar import (
    QuadraticSurd,
    Scalar,
    SymbolicGenerator,
    ceil,
    floor,
    scalar_sqrt,
    sign,
    to_interval,
    to_scalar,
)
from .verifier import (
    ConnectivityVerdict,
    Discrepancy,
    ExactTorus2D,
    PipelineOutcome,
    Sampled,
    TilingCertificate,
    general_position_check,
    split_check,
    theorem_1_1_pipeline,
    verify_constant_multiplicity,
    verify_generic_multiplicity,
)
from .weights import (
    CosetFamily,
    SynthesisFailure,
    WeightSolution,
    collect_difference_vectors,
    find_nonnegative_integer_vector,
    rational_orthogonal_complement,
    synthesize,
)
from .weyl import (
    OffsetDecomposition,
    RefinementResult,
    decompose_offset,
    denominator_lcm,
    equidistribution_statistic,
    theorem_1_4_pipeline,
    weyl_search,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
