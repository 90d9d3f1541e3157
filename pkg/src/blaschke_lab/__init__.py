"""Numerical toolkit for finite Blaschke products and model-space interpolation.

The package covers pseudohyperbolic geometry on the unit disk, stable
evaluation of finite Blaschke products, thin-sequence diagnostics,
closed-form and iterative interpolation on model-space node sets, and a
command-line front end for reproducible experiments.
"""

from .blaschke import BlaschkeProduct, CarlesonReport, TargetVector, ZeroSequence, as_targets
from .criteria import (
    CircleGrid,
    CriterionReport,
    PerturbationReport,
    cohn_sum,
    cross_modulus,
    dyakonov_sup,
    frostman_sum,
    nearness,
    perturbation_report,
    scan_circle,
    separation,
    vasyunin_sum,
)
from .errors import (
    BlaschkeLabError,
    ConfigInvalid,
    ContractionViolated,
    DegreeCapExceeded,
    DuplicatePoint,
    EvaluationAtZero,
    IndexOutOfRange,
    IoFailure,
    MaxIterExceeded,
    NearnessExceeded,
    PointOutsideDisk,
    PrecisionViolation,
    RootVerificationFailed,
    SamplingExhausted,
    SeparationTooSmall,
    TruncationTooDeep,
    ZeroCollision,
)
from .geometry import (
    BOUNDARY_MARGIN,
    CirclePoint,
    DiskPoint,
    EuclideanDisk,
    KernelBoundsReport,
    beta,
    kernel_bounds_check,
    mobius,
    one_minus_abs_sq,
    pairwise_rho,
    pseudo_disk_to_euclidean,
    rho,
)
from .interpolation import (
    DEGREE_CAP,
    InterpolantRep,
    IterationTrace,
    UnionConstruction,
    frostman_shift_zeros,
    interpolate_union,
    lebesgue_constant,
    nearby_iterate,
    solve_kb,
    sup_norm,
)
from .sequences import (
    DEPTH_CAP,
    PairedSequences,
    deinterlace,
    deinterlace_targets,
    frostman_example,
    interlace,
    interlace_targets,
    perturb_sample,
    radial_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BOUNDARY_MARGIN",
    "DEGREE_CAP",
    "DEPTH_CAP",
    "BlaschkeLabError",
    "BlaschkeProduct",
    "CarlesonReport",
    "CircleGrid",
    "CirclePoint",
    "ConfigInvalid",
    "ContractionViolated",
    "CriterionReport",
    "DegreeCapExceeded",
    "DiskPoint",
    "DuplicatePoint",
    "EuclideanDisk",
    "EvaluationAtZero",
    "IndexOutOfRange",
    "InterpolantRep",
    "IoFailure",
    "IterationTrace",
    "KernelBoundsReport",
    "MaxIterExceeded",
    "NearnessExceeded",
    "PairedSequences",
    "PerturbationReport",
    "PointOutsideDisk",
    "PrecisionViolation",
    "RootVerificationFailed",
    "SamplingExhausted",
    "SeparationTooSmall",
    "TargetVector",
    "TruncationTooDeep",
    "UnionConstruction",
    "ZeroCollision",
    "ZeroSequence",
    "as_targets",
    "beta",
    "cohn_sum",
    "cross_modulus",
    "deinterlace",
    "deinterlace_targets",
    "dyakonov_sup",
    "frostman_example",
    "frostman_shift_zeros",
    "frostman_sum",
    "interlace",
    "interlace_targets",
    "interpolate_union",
    "kernel_bounds_check",
    "lebesgue_constant",
    "mobius",
    "nearby_iterate",
    "nearness",
    "one_minus_abs_sq",
    "pairwise_rho",
    "perturb_sample",
    "perturbation_report",
    "pseudo_disk_to_euclidean",
    "radial_sequence",
    "rho",
    "scan_circle",
    "separation",
    "solve_kb",
    "sup_norm",
    "vasyunin_sum",
]
