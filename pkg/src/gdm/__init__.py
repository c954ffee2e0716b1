"""Subspace clustering by global dimension minimization, with a
two-view motion segmentation front end and outlier rejection."""

from .dimension import (
    SingularSpectrum,
    batch_empirical_dimension,
    empirical_dimension,
    numerical_rank,
    p_lower_bound,
    singular_values,
    thin_svd,
)
from .embedding import (
    PointCorrespondence,
    embed_dataset,
    embed_linear,
    embed_nonlinear,
    normalize_views,
)
from .evalkit import (
    SubspaceMixture,
    SyntheticSpec,
    TwoViewScene,
    fundamental_from_motion,
    misclassification_rate,
    roc_sweep,
    rotation_matrix,
    sample_subspace_mixture,
    sample_two_view_scene,
)
from .exceptions import (
    DegenerateClusterError,
    DegenerateSpectrumError,
    GdmError,
    InsufficientInliersError,
    InvalidInputError,
    InvalidParameterError,
    SceneGenerationError,
)
from .objective import (
    ObjectiveParams,
    gd_gradient,
    gd_gradient_outlier,
    global_dimension_hard,
    global_dimension_outlier,
    global_dimension_soft,
    hard_cluster_dims,
    pnorm,
    scaled_cluster_matrix,
    validate_membership,
)
from .optimizer import (
    GdmConfig,
    SegmentationResult,
    descend,
    gdm,
    genetic_refine,
    greedy_merge_init,
    indicator_membership,
    project_columns,
    project_simplex,
    threshold,
)
from .robust import (
    FittedSubspace,
    OutlierConfig,
    fit_cluster_subspace,
    gdm_naive,
    gdm_outlier_core,
    known_fraction,
    model_reassign,
    point_subspace_distance,
    reassignment_distances,
    segment_with_outliers,
    subspace_distances,
    tpr_fpr,
)

__all__ = [
    "DegenerateClusterError",
    "DegenerateSpectrumError",
    "FittedSubspace",
    "GdmConfig",
    "GdmError",
    "InsufficientInliersError",
    "InvalidInputError",
    "InvalidParameterError",
    "ObjectiveParams",
    "OutlierConfig",
    "PointCorrespondence",
    "SceneGenerationError",
    "SegmentationResult",
    "SingularSpectrum",
    "SubspaceMixture",
    "SyntheticSpec",
    "TwoViewScene",
    "batch_empirical_dimension",
    "descend",
    "embed_dataset",
    "embed_linear",
    "embed_nonlinear",
    "empirical_dimension",
    "fit_cluster_subspace",
    "fundamental_from_motion",
    "gd_gradient",
    "gd_gradient_outlier",
    "gdm",
    "gdm_naive",
    "gdm_outlier_core",
    "genetic_refine",
    "global_dimension_hard",
    "global_dimension_outlier",
    "global_dimension_soft",
    "greedy_merge_init",
    "hard_cluster_dims",
    "indicator_membership",
    "known_fraction",
    "misclassification_rate",
    "model_reassign",
    "normalize_views",
    "numerical_rank",
    "p_lower_bound",
    "pnorm",
    "point_subspace_distance",
    "project_columns",
    "project_simplex",
    "reassignment_distances",
    "roc_sweep",
    "rotation_matrix",
    "sample_subspace_mixture",
    "sample_two_view_scene",
    "scaled_cluster_matrix",
    "segment_with_outliers",
    "singular_values",
    "subspace_distances",
    "threshold",
    "thin_svd",
    "tpr_fpr",
    "validate_membership",
]

__version__ = "0.1.0"
