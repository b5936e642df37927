"""Value distribution of holomorphic curves into projective space.

Finite-radius characteristic/proximity/counting functions with certified
numerics, exact piecewise-trigonometric indicator arithmetic at the
asymptotic level, and cross-verified main-inequality reports.
"""

from .exactnum import QC, ExactConstant
from .entire import (
    CurveError,
    ExpPolynomial,
    HolomorphicCurve,
    LinearODE,
    OdeSolution,
    Polynomial,
    PrecisionExhausted,
    ZeroFreeExp,
    log_wronskian_quotient_residual,
    wronskian_at,
    wronskian_closed_form,
    wronskian_symbolic,
)
from .projgeo import (
    Flat,
    FlatLattice,
    GeometryError,
    Hyperplane,
    HyperplaneSystem,
    SamplingGeometry,
    d_k,
    dist_point_flat,
    dist_point_hyperplane,
    lemma1_ratio,
)
from .indicator import (
    AIRY_DEPENDENT_SETS,
    AsymptoticCertificate,
    IndicatorError,
    IndicatorFamily,
    PiecewiseIndicator,
    TrigArc,
    admissible_sum,
    airy_catalogue,
    asymptotic_certificate,
    characteristic_coefficient,
    exp123_catalogue,
    flat_proximity_coefficients,
    maximal_admissible_sum,
    pointwise_max,
    proximity_coefficient,
    sector_decomposition,
    sorted_envelopes,
    special_basis_profile,
    wronskian_indicator,
    zero_indicator,
)
from .nevanlinna import (
    AnalysisReport,
    CountingResult,
    CurveAnalyzer,
    QuadratureSpec,
    RadialGrid,
    ReportRow,
    cartan_subreport,
    characteristic,
    count_zeros,
    counting_N,
    defect_estimates,
    proximity_gap_rows,
    smt_report,
)
from .scenarios import BUILTIN, Scenario, get_builtin, staircase_curve

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
