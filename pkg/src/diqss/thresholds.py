"""Critical parameters: efficiency threshold, noise tolerance, maximum distance.

A point counts as secure when the unclamped rate exceeds ``SECURE_FLOOR``.
The floor matters where the rate is identically zero below threshold (for
instance AD at F=1, where the distilled QBER vanishes and the Eve bound is
clamped to zero for S <= 2), so a plain sign test would see a plateau of
rounding noise instead of a sign change.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .channel import ChannelParams, distance_for_efficiency, global_efficiency
from .errors import NoThresholdError
from .rates import ProtocolConfig, Variant, raw_qber, secret_rate

SECURE_FLOOR = 1e-12
SCAN_STEP = 1e-3
ETA_TOL = 1e-9
DISTANCE_TOL = 1e-10


def rate_at(fidelity: float, eta: float, q: float, variant: Variant, n: int = 2) -> float:
    """Unclamped rate; ``q`` is ignored by variants without pre-processing."""
    cfg = ProtocolConfig.for_variant(variant, fidelity, eta, q, n)
    return secret_rate(cfg).rate_unclamped


def _bisect(secure: Callable[[float], bool], lo: float, hi: float, tol: float) -> float:
    # invariant: secure(hi) and not secure(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if secure(mid):
            hi = mid
        else:
            lo = mid
    return hi


def efficiency_threshold(fidelity: float, q: float, variant: Variant, n: int = 2) -> float:
    """Lowest eta of the secure region that contains eta = 1.

    Scans down from eta = 1 in steps of ``SCAN_STEP`` to bracket the first
    loss of security, then bisects to ``ETA_TOL``.  The secure endpoint is
    returned.
    """

    def secure(eta: float) -> bool:
        return rate_at(fidelity, eta, q, variant, n) > SECURE_FLOOR

    if not secure(1.0):
        raise NoThresholdError(f"{variant.name} is insecure even at eta = 1 (F={fidelity})")
    steps = int(round(1.0 / SCAN_STEP))
    hi = 1.0
    for k in range(1, steps + 1):
        lo = max(1.0 - k * SCAN_STEP, 0.0)
        if not secure(lo):
            return _bisect(secure, lo, hi, ETA_TOL)
        hi = lo
    raise NoThresholdError(f"{variant.name} is secure on the whole interval (F={fidelity})")


def noise_tolerance(fidelity: float, q: float, variant: Variant, n: int = 2) -> float:
    """Raw per-round QBER (no flip, no AD) at the efficiency threshold."""
    eta = efficiency_threshold(fidelity, q, variant, n)
    return raw_qber(fidelity, eta, variant.post_selection)


@dataclass(frozen=True)
class MaxDistance:
    km: float
    km_bisection: float
    reachable: bool

    @property
    def user_to_user_km(self) -> float:
        return 2.0 * self.km


def max_distance(
    fidelity: float,
    q: float,
    variant: Variant,
    n: int = 2,
    params: ChannelParams = ChannelParams(),
) -> MaxDistance:
    """Source-to-user distance at which the rate reaches zero.

    Computed twice: by inverting the channel at the efficiency threshold, and
    by bisecting directly on distance.  ``reachable`` is False (distance 0)
    when even zero distance is insecure.
    """

    def secure_at(d: float) -> bool:
        return rate_at(fidelity, global_efficiency(d, params), q, variant, n) > SECURE_FLOOR

    if not secure_at(0.0):
        return MaxDistance(0.0, 0.0, False)
    eta_th = efficiency_threshold(fidelity, q, variant, n)
    km = distance_for_efficiency(eta_th, params)

    # security is lost with growing distance: secure side is ``near``
    far = 1.0
    while secure_at(far):
        far *= 2.0
    near = far / 2.0 if far > 1.0 else 0.0
    while far - near > DISTANCE_TOL:
        mid = 0.5 * (near + far)
        if secure_at(mid):
            near = mid
        else:
            far = mid
    return MaxDistance(km, near, True)


@dataclass(frozen=True)
class ThresholdReport:
    variant: Variant
    fidelity: float
    q: float
    block_length: int
    eta_threshold: float
    delta_threshold: float
    bracket_residual: float
    d_max: Optional[float] = None
    d_max_user_to_user: Optional[float] = None
    reachable: Optional[bool] = None


def threshold_report(
    fidelity: float,
    q: float,
    variant: Variant,
    n: int = 2,
    params: Optional[ChannelParams] = None,
) -> ThresholdReport:
    eta = efficiency_threshold(fidelity, q, variant, n)
    extra = {}
    if params is not None:
        dist = max_distance(fidelity, q, variant, n, params)
        extra = dict(d_max=dist.km, d_max_user_to_user=dist.user_to_user_km, reachable=dist.reachable)
    return ThresholdReport(
        variant=variant,
        fidelity=fidelity,
        q=q if variant.noise_preprocessing else 0.0,
        block_length=n,
        eta_threshold=eta,
        delta_threshold=raw_qber(fidelity, eta, variant.post_selection),
        bracket_residual=abs(rate_at(fidelity, eta, q, variant, n)),
        **extra,
    )
