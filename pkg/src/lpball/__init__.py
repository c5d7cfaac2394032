"""Certified continuity of weighted L_p balls on finite atomic measure
spaces, with Hausdorff-distance estimation and an application to
Urysohn-type integral input-output maps."""

from .spaces import (
    BallSpec,
    MeasureSpace,
    SimpleFunction,
    ball_contains,
    combine,
    lp_norm,
    make_space,
    simple_function,
    zero_function,
)
from .bounds import (
    BaseConstants,
    BoundLedger,
    FormulaDomainError,
    ProblemParams,
    WindowPreconditionError,
    base_constants,
    delta_window,
    gamma1,
    gamma2,
    gamma3,
    gamma4,
)
from .witness import (
    PartitionDiagnostics,
    WitnessResult,
    partition_diagnostics,
    rescale,
    truncate,
    truncation_defect_bound,
    witness_into_ball,
)
from .sampling import SamplerConfig, ball_samples, sup_candidates
from .hausdorff import (
    CertificateSandwichError,
    HausdorffEstimate,
    ProjectionSolverError,
    brute_force_hausdorff,
    directed_distance_lower,
    dist_to_ball,
    hausdorff_estimate,
)
from .urysohn import (
    Kernel,
    KernelConditionError,
    OutputBoundReport,
    SystemConstants,
    ValidationReport,
    affine_kernel,
    apply_operator,
    kernel_from_config,
    kernel_from_json,
    linear_kernel,
    output_bound_check,
    output_set_distance,
    saturating_kernel,
    system_constants,
    validate_kernel,
)
from .cli import ExperimentConfig, ExperimentReport, run_experiment

__version__ = "0.1.0"
