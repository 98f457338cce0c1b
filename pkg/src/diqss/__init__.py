"""Device-independent quantum secret sharing with advantage distillation.

Closed-form rates and thresholds (:mod:`diqss.rates`, :mod:`diqss.thresholds`),
an exact outcome model with enumeration oracles (:mod:`diqss.outcome_model`),
the distillation procedure (:mod:`diqss.distill`), a Monte Carlo of the whole
pipeline (:mod:`diqss.simulate`), the fiber channel (:mod:`diqss.channel`) and
sweep/table generation (:mod:`diqss.sweep`).
"""

from .channel import ChannelParams, distance_for_efficiency, global_efficiency, transmittance
from .errors import DomainError, NoThresholdError, UnreachableEfficiencyError
from .rates import (
    TABLE1_VARIANTS,
    ProtocolConfig,
    RateReport,
    Variant,
    binary_entropy,
    chsh_value,
    distilled_qber,
    effective_qber,
    eve_entropy_bound,
    raw_qber,
    secret_rate,
)
from .thresholds import efficiency_threshold, max_distance, noise_tolerance

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "DomainError",
    "NoThresholdError",
    "ProtocolConfig",
    "RateReport",
    "TABLE1_VARIANTS",
    "UnreachableEfficiencyError",
    "Variant",
    "binary_entropy",
    "chsh_value",
    "distance_for_efficiency",
    "distilled_qber",
    "effective_qber",
    "efficiency_threshold",
    "eve_entropy_bound",
    "global_efficiency",
    "max_distance",
    "noise_tolerance",
    "raw_qber",
    "secret_rate",
    "transmittance",
]
