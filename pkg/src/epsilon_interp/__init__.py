"""Vector-valued rational interpolation with projected denominators.

Builds R = U/V for samples of a vector function of one complex
variable, where V is pinned down by projecting divided differences
onto a fixed direction. Includes closed-form oracles for the small
identities the construction obeys, potential-theoretic rate bounds
for standard node families, and a convergence laboratory that fits
observed geometric ratios against those bounds.
"""

from .analysis import (
    QuantityResult,
    RateReport,
    RefinedReport,
    SweepRecord,
    denominator_roots,
    fit_rate,
    match_poles,
    refined_asymptotics_check,
    run_convergence_study,
    run_self_convergence_study,
)
from .core import (
    NodeMultiset,
    ScaledProduct,
    inner,
    newton_to_monomial,
    psi,
    psi_scaled,
    vandermonde,
)
from .divided import (
    DividedDifferenceTable,
    SampleSet,
    build_table,
    confluent_limit_check,
    newton_eval,
    scalar_table,
)
from .errors import (
    DimensionMismatchError,
    EpsilonInterpError,
    EvalAtPoleError,
    InsideRegionError,
    MissingSampleError,
    NonContiguousNodesError,
    NonFiniteValueError,
    RootFindingStalled,
    SamplesFormatError,
    SingularSystemError,
    StudyInconclusiveError,
)
from .functions import (
    CATALOG,
    EntirePart,
    MeromorphicTestFunction,
    from_catalog,
    random_rational,
)
from .interpolant import (
    RationalInterpolant,
    assemble_system,
    build_interpolant,
    cofactor_coeffs,
    default_direction,
    eval_denominator,
    interpolate,
    solve_coeffs,
)
from .io import (
    read_config,
    read_samples_csv,
    write_rates_csv,
    write_report_json,
    write_samples_csv,
)
from .oracles import (
    coupling_minor,
    coupling_minor_factored,
    denominator_expansion,
    error_closed_form,
    error_determinant_form,
    newton_remainder,
    pole_kernel_dd,
    rational_dd,
    refined_constants,
    residue_coupling,
    system_closed_form,
)
from .potential import (
    Geometry,
    NodeFamily,
    bound_error_rate,
    bound_pole_rate,
    custom_family,
    disk,
    disk_family,
    interval,
    interval_family,
    node_asymptotics,
    phi,
)
from .selftest import SelfTestReport, run_identity_suite

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "DimensionMismatchError",
    "DividedDifferenceTable",
    "EntirePart",
    "EpsilonInterpError",
    "EvalAtPoleError",
    "Geometry",
    "InsideRegionError",
    "MeromorphicTestFunction",
    "MissingSampleError",
    "NodeFamily",
    "NodeMultiset",
    "NonContiguousNodesError",
    "NonFiniteValueError",
    "QuantityResult",
    "RateReport",
    "RationalInterpolant",
    "RefinedReport",
    "RootFindingStalled",
    "SampleSet",
    "SamplesFormatError",
    "ScaledProduct",
    "SelfTestReport",
    "SingularSystemError",
    "StudyInconclusiveError",
    "SweepRecord",
    "assemble_system",
    "bound_error_rate",
    "bound_pole_rate",
    "build_interpolant",
    "build_table",
    "cofactor_coeffs",
    "confluent_limit_check",
    "coupling_minor",
    "coupling_minor_factored",
    "custom_family",
    "default_direction",
    "denominator_expansion",
    "denominator_roots",
    "disk",
    "disk_family",
    "error_closed_form",
    "error_determinant_form",
    "eval_denominator",
    "fit_rate",
    "from_catalog",
    "inner",
    "interpolate",
    "interval",
    "interval_family",
    "match_poles",
    "newton_eval",
    "newton_remainder",
    "newton_to_monomial",
    "node_asymptotics",
    "phi",
    "pole_kernel_dd",
    "psi",
    "psi_scaled",
    "random_rational",
    "rational_dd",
    "read_config",
    "read_samples_csv",
    "refined_asymptotics_check",
    "refined_constants",
    "residue_coupling",
    "run_convergence_study",
    "run_identity_suite",
    "run_self_convergence_study",
    "scalar_table",
    "solve_coeffs",
    "system_closed_form",
    "vandermonde",
    "write_rates_csv",
    "write_report_json",
    "write_samples_csv",
]
