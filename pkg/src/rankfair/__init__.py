"""Group-fairness auditing of ranked lists under parametric models of
user attention.

Given a ranked list (or several realizations of one) with per-item
group-alignment distributions, the audit asks whether any plausible
parameterization of the attention distribution yields representational
parity, and reports the viable parameter region, the minimum distance,
and the bias direction. A generator builds rankings that are fair for a
fixed attention model.
"""

__version__ = "0.1.0"

from .alignment import (
    AlignmentVector,
    ClassSpace,
    Mode,
    RealizationSet,
    aggregate_realizations,
    make_one_hot,
    population_estimator,
    project_binary,
    project_binary_probs,
)
from .attention import (
    PARAMETRIC_FAMILIES,
    AttentionModel,
    Family,
    expected_views,
    fit_param_to_expected_views,
    fit_param_to_head_weight,
    head_weight,
    param_interval_from_view_bounds,
    weights,
)
from .audit import (
    AuditConfig,
    BiasDirection,
    Verdict,
    ViableReport,
    bias_direction,
    log_grid,
    scan,
    scan_aggregate,
)
from .errors import (
    ConfigError,
    InfeasibleTargetError,
    LabelError,
    ModeError,
    ParameterDomainError,
    ParseError,
    RankFairError,
    ShapeError,
)
from .exposure import (
    DistanceSpec,
    EffectiveNBasis,
    ExposureResult,
    Metric,
    binomial_z,
    chi_square,
    distance,
    exposure,
    scalar_bias,
    signed_deviation,
)
from .generator import (
    CompositionSpec,
    FairRanking,
    generate_fair,
    synthesize_realizations,
)
