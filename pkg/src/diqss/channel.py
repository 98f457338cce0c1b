"""Fiber channel: distance to global detection efficiency and back."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UnreachableEfficiencyError


@dataclass(frozen=True)
class ChannelParams:
    alpha: float = 0.2  # dB/km
    eta_d: float = 0.98  # detector efficiency
    eta_c: float = 0.99  # coupling efficiency

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be > 0 dB/km, got {self.alpha}")
        for name in ("eta_d", "eta_c"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise DomainError(f"{name} must lie in (0, 1], got {v}")

    @property
    def eta_max(self) -> float:
        return self.eta_d * self.eta_c


def transmittance(d: float, alpha: float = 0.2) -> float:
    """10^(-alpha d / 10) for d km of fiber."""
    if d < 0 or math.isnan(d):
        raise DomainError(f"distance must be >= 0 km, got {d}")
    return 10.0 ** (-alpha * d / 10.0)


def global_efficiency(d: float, params: ChannelParams = ChannelParams()) -> float:
    return transmittance(d, params.alpha) * params.eta_d * params.eta_c


def distance_for_efficiency(eta: float, params: ChannelParams = ChannelParams()) -> float:
    """Inverse of :func:`global_efficiency`, in km."""
    if not eta > 0:
        raise DomainError(f"efficiency must be > 0, got {eta}")
    if eta > params.eta_max:
        raise UnreachableEfficiencyError(
            f"efficiency {eta} exceeds eta_d*eta_c = {params.eta_max}"
        )
    return 10.0 / params.alpha * math.log10(params.eta_max / eta)
