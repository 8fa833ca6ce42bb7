"""Lines on p-adic and real cubic surfaces: exact counts and experiments."""

from .blowup import (
    blowup_line_count,
    general_position_check,
    line_count_from_pattern,
    reference_sextics,
    verify_line_count_table,
)
from .errors import (
    CubicLinesError,
    DepthExceeded,
    InternalInconsistency,
    NonAdmissibleCount,
    NotInGeneralPosition,
    NotSquarefree,
    PrecisionExhausted,
    SingularSurface,
    SolveFailure,
    ZeroReduction,
)
from .experiments import (
    LineCountDistribution,
    MeasureSpec,
    run_padic_experiment,
    run_real_experiment,
    write_curve,
    write_distribution,
)
from .harmonic import gaussian_inner_product, harmonic_model
from .homotopy import solve_chart_homogeneous, solve_chart_system
from .padic import (
    ExtensionDescriptor,
    PadicScalar,
    QuadExtScalar,
    quadratic_extensions,
)
from .polynomials import FactorPattern, PadicPolynomial, count_roots, factor_pattern
from .realcubics import (
    REAL_LINE_COUNTS,
    SimplexCurvePoint,
    count_real_lines,
    estimate_curve,
    sample_real_cubic,
)
from .sampling import (
    DEFAULT_PRECISION,
    haar_coefficients,
    sample_rng,
    sample_sextic,
    sample_surface,
    tropical_coefficients,
)
from .surfaces import (
    PADIC_LINE_COUNTS,
    CubicSurface,
    cayley_cubic,
    clebsch_cubic,
    count_padic_lines,
    fermat_cubic,
    fp_line_count,
    is_smooth_over_fp,
    transform_cubic,
)

__version__ = "0.1.0"

__all__ = [
    "CubicLinesError",
    "CubicSurface",
    "DEFAULT_PRECISION",
    "DepthExceeded",
    "ExtensionDescriptor",
    "FactorPattern",
    "InternalInconsistency",
    "LineCountDistribution",
    "MeasureSpec",
    "NonAdmissibleCount",
    "NotInGeneralPosition",
    "NotSquarefree",
    "PADIC_LINE_COUNTS",
    "PadicPolynomial",
    "PadicScalar",
    "PrecisionExhausted",
    "QuadExtScalar",
    "REAL_LINE_COUNTS",
    "SimplexCurvePoint",
    "SingularSurface",
    "SolveFailure",
    "ZeroReduction",
    "blowup_line_count",
    "cayley_cubic",
    "clebsch_cubic",
    "count_padic_lines",
    "count_real_lines",
    "count_roots",
    "estimate_curve",
    "factor_pattern",
    "fermat_cubic",
    "fp_line_count",
    "gaussian_inner_product",
    "general_position_check",
    "haar_coefficients",
    "harmonic_model",
    "is_smooth_over_fp",
    "line_count_from_pattern",
    "quadratic_extensions",
    "reference_sextics",
    "run_padic_experiment",
    "run_real_experiment",
    "sample_real_cubic",
    "sample_rng",
    "sample_sextic",
    "sample_surface",
    "solve_chart_homogeneous",
    "solve_chart_system",
    "transform_cubic",
    "tropical_coefficients",
    "verify_line_count_table",
    "write_curve",
    "write_distribution",
]
