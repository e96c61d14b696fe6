"""Response-surface experimentation: designs, fits, and the decision loop.

The pieces mirror how a sequential study actually runs: generate a design
(`ccd`, `box_behnken`, `full_factorial`), collect responses through a
worksheet, fit a polynomial surface (`fit`), judge it (`anova`,
`coefficient_tests`), then decide where to go next (`steepest_path`,
`stationary_point`) and look at the picture (`evaluate_grid`, `contours`).
`Campaign` ties the whole loop together with a persistent project file.
"""

from .design import (
    FACE,
    MAX_FACTORS,
    MIN_FACTORS,
    ROTATABLE,
    Design,
    DesignPoint,
    DesignReplicationWarning,
    FactorSpec,
    PointType,
    box_behnken,
    ccd,
    full_factorial,
    to_coded,
    to_natural,
)
from .distributions import f_cdf, incomplete_beta, t_cdf
from .errors import RsmError
from .fit import FittedModel, TermBasis, block_contrasts, fit, model_matrix, predict
from .inference import (
    AnovaRow,
    AnovaTable,
    CoefficientTest,
    anova,
    coefficient_tests,
    pure_error,
    replicate_groups,
)
from .optimize import (
    MAXIMIZE,
    MINIMIZE,
    DescentPath,
    PathStep,
    StationaryPoint,
    jacobi_eigh,
    quadratic_form,
    stationary_point,
    steepest_path,
)
from .surface import (
    ContourSet,
    SurfaceGrid,
    contours,
    default_levels,
    default_ranges,
    evaluate_grid,
)
from .campaign import (
    COMPLETE,
    DEFAULT_PATH_RADII,
    ISSUED,
    PARTIALLY_FILLED,
    SCHEMA_VERSION,
    AnalysisResult,
    Campaign,
    Phase,
    add_phase,
    campaign_from_doc,
    campaign_to_doc,
    derived_responses,
    export_worksheet,
    ingest_responses,
    load,
    new_campaign,
    run_analysis,
    save,
    slugify,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "AnovaRow",
    "AnovaTable",
    "Campaign",
    "COMPLETE",
    "CoefficientTest",
    "ContourSet",
    "DEFAULT_PATH_RADII",
    "Design",
    "DesignPoint",
    "DesignReplicationWarning",
    "DescentPath",
    "FACE",
    "FactorSpec",
    "FittedModel",
    "ISSUED",
    "MAX_FACTORS",
    "MAXIMIZE",
    "MIN_FACTORS",
    "MINIMIZE",
    "PARTIALLY_FILLED",
    "PathStep",
    "Phase",
    "PointType",
    "ROTATABLE",
    "RsmError",
    "SCHEMA_VERSION",
    "StationaryPoint",
    "SurfaceGrid",
    "TermBasis",
    "add_phase",
    "anova",
    "block_contrasts",
    "box_behnken",
    "campaign_from_doc",
    "campaign_to_doc",
    "ccd",
    "coefficient_tests",
    "contours",
    "default_levels",
    "default_ranges",
    "derived_responses",
    "evaluate_grid",
    "export_worksheet",
    "f_cdf",
    "fit",
    "full_factorial",
    "incomplete_beta",
    "ingest_responses",
    "jacobi_eigh",
    "load",
    "model_matrix",
    "new_campaign",
    "predict",
    "pure_error",
    "quadratic_form",
    "replicate_groups",
    "run_analysis",
    "save",
    "slugify",
    "stationary_point",
    "steepest_path",
    "t_cdf",
    "to_coded",
    "to_natural",
]
