"""Risk-attitude calibration and classification for annual market data."""

from .calibration import (
    CalibrationResult,
    RHO_ANCHORS,
    SufficiencyFactors,
    Variant,
    calibrate_variant,
    solve_closed_form_given_rho,
    solve_system,
    system_residuals,
)
from .classify import (
    AllocationSign,
    Curvature,
    DEFAULT_TOLERANCE,
    DefinitionGroup,
    Label,
    RiskAttitude,
    allocation_sign,
    classify,
    classify_pipeline,
    curvature_from_rho,
)
from .dataset import (
    AnnualSeries,
    MarketDataset,
    ProjectionInputs,
    load_bundled_dataset,
    load_bundled_projection,
    load_dataset,
    load_projection,
    project,
    projected_consumption,
    serialize_dataset,
    with_final_consumption,
)
from .errors import (
    ComputeError,
    DegenerateSystem,
    EmptyReport,
    InputError,
    InvalidCombination,
    MissingYear,
    NegativeVariance,
    NoConvergence,
    NonPositiveConsumption,
    NonPositiveValue,
    RacError,
    SchemaError,
    SeriesTooShort,
    Unclassifiable,
    UndefinedAtLogLimit,
)
from .moments import SampleMoments, compute_moments, consistency_gap, lognormal_moment
from .report import (
    ReportFormat,
    ReportRow,
    calibration_block,
    export_run,
    parse_csv,
    parse_json,
    render_table,
)
from .utility import (
    UtilityComparison,
    UtilitySpec,
    crra_utility,
    expected_utility_unconditional,
    implied_consumption,
    make_comparison,
    uncertain_utility,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationSign",
    "AnnualSeries",
    "CalibrationResult",
    "ComputeError",
    "Curvature",
    "DEFAULT_TOLERANCE",
    "DefinitionGroup",
    "DegenerateSystem",
    "EmptyReport",
    "InputError",
    "InvalidCombination",
    "Label",
    "MarketDataset",
    "MissingYear",
    "NegativeVariance",
    "NoConvergence",
    "NonPositiveConsumption",
    "NonPositiveValue",
    "ProjectionInputs",
    "RacError",
    "ReportFormat",
    "ReportRow",
    "RHO_ANCHORS",
    "RiskAttitude",
    "SampleMoments",
    "SchemaError",
    "SeriesTooShort",
    "SufficiencyFactors",
    "Unclassifiable",
    "UndefinedAtLogLimit",
    "UtilityComparison",
    "UtilitySpec",
    "Variant",
    "allocation_sign",
    "calibrate_variant",
    "classify",
    "classify_pipeline",
    "compute_moments",
    "consistency_gap",
    "crra_utility",
    "curvature_from_rho",
    "expected_utility_unconditional",
    "calibration_block",
    "export_run",
    "implied_consumption",
    "load_bundled_dataset",
    "load_bundled_projection",
    "load_dataset",
    "load_projection",
    "lognormal_moment",
    "make_comparison",
    "parse_csv",
    "parse_json",
    "project",
    "projected_consumption",
    "render_table",
    "serialize_dataset",
    "solve_closed_form_given_rho",
    "solve_system",
    "system_residuals",
    "uncertain_utility",
    "with_final_consumption",
    "__version__",
]
