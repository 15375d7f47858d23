"""Non-systematic MDS storage matrices from ovals in PG(2, q).

The pipeline: build the canonical maximal-arc matrix F over GF(q), pick
three independent internal points, change basis to G = B^-1 * F, and read
off per-object recovery systems whose size-2 sets partition the servers.
On top of that sit exact service-rate-region analysis (explicit simplex
description vs. an LP feasibility oracle over rationals), one-step
majority-logic decoding with its error bound, and the PIR availability
check.
"""

from .gf import FieldCtx, field_for_order, field_new
from .geom import ProjLine, ProjPoint, all_lines, all_points, line_through, projectivize
from .oval import (
    LineKind,
    OvalCode,
    PointKind,
    classify_line,
    classify_point,
    classify_point_conic,
    vandermonde_oval,
)
from .construct import (
    GeneratorMatrix,
    InternalBasis,
    RecoverySystem,
    basis_from_points,
    build_generator,
    find_internal_basis,
    minimal_recovery_sets,
    recovery_pairs,
    systematic_form,
)
from .srr import (
    Allocation,
    FeasibilityOracle,
    ServiceSystem,
    eq4_divergence_report,
    lp_feasible,
    normalized_cost,
    oracle_region,
    oval_region,
    rate_vector,
    region_compare,
    systematic_region_eq4,
    uniform_allocation,
    verify_allocation,
)
from .mld import (
    DecodeResult,
    decode_1smld,
    dual_distance,
    encode,
    exhaustive_error_sweep,
    find_counterexample,
    mld_bound,
    pir_check,
)

__version__ = "0.1.0"
