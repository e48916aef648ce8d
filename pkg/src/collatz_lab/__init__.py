"""Exact-arithmetic laboratory for the 3x+1 function and its relatives.

The halved rule T sends even x to x/2 and odd x to (3x+1)/2; the
classic rule C sends odd x to 3x+1 instead.  Everything downstream,
including step statistics, sieve-accelerated range checks, model
comparisons, tag-system runs, and generated sets, builds on exact
integer iteration of these and of user-defined residue-class maps.
"""

from ._kernels import USING_NUMBA
from .affine_sets import (
    AffineGenerator,
    ClosureResult,
    backward_collatz_generators,
    backward_collatz_set,
    closure_up_to,
    density_profile,
    preset_closure,
)
from .maps import (
    GeneralizedCollatzMap,
    MapSpecError,
    collatz_map,
    collatz_permutation_U,
    collatz_step,
    make_3k_map,
    make_general_map,
    parse_map_spec,
    t5_map,
    t_map,
    t_step,
    u_map,
)
from .model import (
    EXPECTED_SLOPE,
    EXPECTED_STEPS_COEFF,
    EXTREMAL_SHAPE,
    STOCHASTIC_BOUND_COEFF,
    ExtremalShape,
    ModelComparison,
    Prediction,
    compare,
    expected_slope,
    expected_total_steps,
    extremal_peak_log,
    predict,
    stochastic_upper_bound,
)
from .sieve import (
    CheckpointMismatchError,
    SieveTable,
    VerificationReport,
    build_table,
    k_step,
    parity_bijection_check,
    survivor_counts,
    verify_range,
)
from .stats import (
    BlockCensus,
    CensusAnomalyError,
    CensusRow,
    ReachCount,
    RecordScan,
    block_census,
    count_reaching_one,
    gamma,
    gamma_from_trajectory,
    one_ratio,
    parity_vector,
    rho,
    rho_from_trajectory,
    scan_records,
    stopping_time,
    total_stopping_time,
)
from .tag import (
    TagOutcome,
    TagRun,
    TagSpecError,
    TagSystem,
    collatz_tag,
    collatz_tag_check,
    format_tag_file,
    parse_tag_file,
    post_tag,
    run_tag,
)
from .trajectory import (
    Cycle,
    CycleCensus,
    DEFAULT_LIMITS,
    IterationLimits,
    Outcome,
    Trajectory,
    UndefinedStepError,
    cycle_census,
    find_cycle,
    iterate,
    permutation_orbit,
)
from .util import format_fixed5, log_nat, parse_natural

__version__ = "0.1.0"

__all__ = [
    "AffineGenerator",
    "BlockCensus",
    "CensusAnomalyError",
    "CensusRow",
    "CheckpointMismatchError",
    "ClosureResult",
    "Cycle",
    "CycleCensus",
    "DEFAULT_LIMITS",
    "EXPECTED_SLOPE",
    "EXPECTED_STEPS_COEFF",
    "EXTREMAL_SHAPE",
    "ExtremalShape",
    "GeneralizedCollatzMap",
    "IterationLimits",
    "MapSpecError",
    "ModelComparison",
    "Outcome",
    "Prediction",
    "ReachCount",
    "RecordScan",
    "STOCHASTIC_BOUND_COEFF",
    "SieveTable",
    "TagOutcome",
    "TagRun",
    "TagSpecError",
    "TagSystem",
    "Trajectory",
    "USING_NUMBA",
    "UndefinedStepError",
    "VerificationReport",
    "backward_collatz_generators",
    "backward_collatz_set",
    "block_census",
    "build_table",
    "closure_up_to",
    "collatz_map",
    "collatz_permutation_U",
    "collatz_step",
    "collatz_tag",
    "collatz_tag_check",
    "compare",
    "count_reaching_one",
    "cycle_census",
    "density_profile",
    "expected_slope",
    "expected_total_steps",
    "extremal_peak_log",
    "find_cycle",
    "format_fixed5",
    "format_tag_file",
    "gamma",
    "gamma_from_trajectory",
    "iterate",
    "k_step",
    "log_nat",
    "make_3k_map",
    "make_general_map",
    "one_ratio",
    "parity_bijection_check",
    "parity_vector",
    "parse_map_spec",
    "parse_natural",
    "parse_tag_file",
    "permutation_orbit",
    "post_tag",
    "predict",
    "preset_closure",
    "rho",
    "rho_from_trajectory",
    "run_tag",
    "scan_records",
    "stochastic_upper_bound",
    "stopping_time",
    "survivor_counts",
    "t5_map",
    "t_map",
    "t_step",
    "total_stopping_time",
    "u_map",
    "verify_range",
]
