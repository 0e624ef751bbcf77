"""tverlab: exact-arithmetic workbench for tolerant Tverberg partitions.

Everything is computed over arbitrary-precision rationals with replayable
certificates: orientation predicates and moment-curve order types, cyclic
polytope facets by Gale evenness, hull-intersection feasibility by exact
phase-1 simplex, Tukey depth, partition tolerance, and certified
counterexample search for the alternating threshold c(d,r).
"""

from .errors import (
    DegenerateInputError,
    InputError,
    ParseError,
    ResourceGuardError,
)
from .kernel import (
    Hyperplane,
    Point,
    PointSet,
    Rational,
    affinely_independent,
    as_point,
    hyperplane_through,
    in_general_position,
    orientation,
    side_of,
    to_rational,
)
from .ordertype import (
    CrossingReport,
    FacetSet,
    HomogeneityResult,
    MomentSpec,
    gale_facets,
    is_neighborly,
    is_order_homogeneous,
    largest_homogeneous_subset,
    moment_points,
    path_crossings,
)
from .feasibility import (
    DepthReport,
    EmptyBlockCertificate,
    FarkasCertificate,
    FeasibilityOutcome,
    SeparationCertificate,
    Witness,
    hull_membership,
    hulls_common_point,
    intervals_common_point,
    tukey_depth,
    verify_centerpoint,
    verify_farkas,
    verify_outcome,
    verify_separation,
    verify_witness,
)
from .tolerance import (
    Partition,
    SandwichReport,
    ToleranceReport,
    alternating_bound,
    alternating_bound_even,
    alternating_partition,
    check_tolerance_sandwich,
    iter_partitions,
    partition_tolerance,
    set_tolerance,
    tolerance_upper_bound,
)
from .search import (
    Counterexample,
    NoneFound,
    ScanResult,
    SearchStrategy,
    check_growth_inequality,
    evaluate_alternating,
    find_counterexample,
    n_line,
    n_line_formula,
    scan_c_lower,
    sixteen_point_alphas,
    t_line,
    verified_sixteen_point_example,
)
from .pointset_io import (
    ReportRecord,
    emit_pointset,
    format_rational,
    load_records,
    outcome_payload,
    parse_pointset,
    parse_rational,
    replay_payload,
    replay_record,
)

__version__ = "0.1.0"
