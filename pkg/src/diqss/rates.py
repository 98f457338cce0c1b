"""Closed-form QBER and secret-sharing-rate formulas.

Eight protocol variants are covered: the basic protocol, noise
pre-processing (Alice flips her sifted bit with probability ``q``),
post-selection (no-click events remapped to ``+1``) and the combination of
the two, each with or without two-way advantage distillation (AD).

All formulas work on plain Python floats in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

SQRT2 = math.sqrt(2.0)
S_MAX = 2.0 * SQRT2
#: Local (classical) bound of the simplified CHSH polynomial.
S_LOCAL = 2.0
_S_TOL = 1e-12


@dataclass(frozen=True)
class Variant:
    """Which active improvement strategies are switched on."""

    noise_preprocessing: bool = False
    post_selection: bool = False
    advantage_distillation: bool = False

    @property
    def name(self) -> str:
        base = {
            (False, False): "basic",
            (True, False): "np",
            (False, True): "ps",
            (True, True): "nps",
        }[(self.noise_preprocessing, self.post_selection)]
        return f"ad+{base}" if self.advantage_distillation else base

    @classmethod
    def from_name(cls, name: str) -> Variant:
        """Parse ``basic|np|ps|nps`` with an optional ``ad+`` prefix."""
        key = name.strip().lower()
        ad = key.startswith("ad+")
        if ad:
            key = key[3:]
        flags = {
            "basic": (False, False),
            "np": (True, False),
            "ps": (False, True),
            "nps": (True, True),
        }
        if key not in flags:
            raise DomainError(f"unknown variant {name!r}")
        npp, ps = flags[key]
        return cls(npp, ps, ad)


#: Row order of the performance summary table.
TABLE1_VARIANTS: tuple[Variant, ...] = tuple(
    Variant(npp, ps, ad)
    for ad in (False, True)
    for npp, ps in ((False, False), (True, False), (False, True), (True, True))
)

VARIANT_LABELS = {
    "basic": "Basic DI-QSS",
    "np": "Noise Pre-processing DI-QSS",
    "ps": "Post-selection DI-QSS",
    "nps": "Advanced Post-selection DI-QSS",
}


def variant_label(variant: Variant) -> str:
    base = variant.name.removeprefix("ad+")
    label = VARIANT_LABELS[base]
    return f"AD+{label}" if variant.advantage_distillation else label


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0 or math.isnan(value):
        raise DomainError(f"{name} must lie in [0, 1], got {value}")
    return value


def _check_flip(q: float) -> float:
    q = float(q)
    if not 0.0 <= q <= 0.5 or math.isnan(q):
        raise DomainError(f"q must lie in [0, 0.5], got {q}")
    return q


@dataclass(frozen=True)
class ProtocolConfig:
    """Input record for every analytic operation.

    ``q`` is the noise pre-processing flip probability and must be zero
    unless ``noise_preprocessing`` is set.
    """

    fidelity: float
    eta: float
    q: float = 0.0
    noise_preprocessing: bool = False
    post_selection: bool = False
    advantage_distillation: bool = False
    block_length: int = 2

    def __post_init__(self):
        _check_unit("fidelity", self.fidelity)
        _check_unit("eta", self.eta)
        _check_flip(self.q)
        if not self.noise_preprocessing and self.q != 0.0:
            raise DomainError("q must be 0 when noise pre-processing is disabled")
        if int(self.block_length) != self.block_length or self.block_length < 2:
            raise DomainError(f"block_length must be an integer >= 2, got {self.block_length}")

    @property
    def variant(self) -> Variant:
        return Variant(self.noise_preprocessing, self.post_selection, self.advantage_distillation)

    @classmethod
    def for_variant(
        cls,
        variant: Variant,
        fidelity: float,
        eta: float,
        q: float = 0.0,
        block_length: int = 2,
    ) -> ProtocolConfig:
        """Build a config, dropping ``q`` for variants without pre-processing."""
        return cls(
            fidelity=fidelity,
            eta=eta,
            q=q if variant.noise_preprocessing else 0.0,
            noise_preprocessing=variant.noise_preprocessing,
            post_selection=variant.post_selection,
            advantage_distillation=variant.advantage_distillation,
            block_length=block_length,
        )


@dataclass(frozen=True)
class RateReport:
    s_value: float
    raw_qber: float
    effective_qber: float
    eve_bound: float
    rate: float
    rate_unclamped: float
    ad_retention: float

    @property
    def s_clamped(self) -> float:
        return min(max(self.s_value, S_LOCAL), S_MAX)


def binary_entropy(x: float) -> float:
    """Shannon entropy in bits of a Bernoulli(x) variable; h(0) = h(1) = 0."""
    x = float(x)
    if not 0.0 <= x <= 1.0 or math.isnan(x):
        raise DomainError(f"binary entropy argument must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def chsh_value(fidelity: float, eta: float, post_selection: bool = False) -> float:
    """Simplified CHSH value S = 2*sqrt(2)*F*eta^3 (+ 2*(1-eta)^3 with post-selection)."""
    f = _check_unit("fidelity", fidelity)
    e = _check_unit("eta", eta)
    s = S_MAX * f * e**3
    if post_selection:
        s += 2.0 * (1.0 - e) ** 3
    return s


def raw_qber(fidelity: float, eta: float, post_selection: bool = False) -> float:
    """Per-round QBER before any flipping or distillation.

    Without post-selection a no-click counts as an error, so the value is
    loss-inclusive: 1 - eta^3 (1+F)/2.  With post-selection every round is
    kept and the no-click remapping contributes 3/2 eta (1-eta).
    """
    f = _check_unit("fidelity", fidelity)
    e = _check_unit("eta", eta)
    if post_selection:
        return 0.5 * (1.0 - f) * e**3 - 1.5 * e**2 + 1.5 * e
    return 1.0 - 0.5 * e**3 * (1.0 + f)


def block_filter(p_err: float, n: int) -> tuple[float, float]:
    """Keep-probability and residual error of an n-round parity-agreement filter.

    With i.i.d. round parities that are wrong with probability ``p_err`` a
    block survives when all parities agree; the surviving first bit is wrong
    only when all ``n`` rounds were wrong.  Returns ``(qber, keep_prob)``.
    """
    p = _check_unit("p_err", p_err)
    if n < 1:
        raise DomainError(f"block length must be >= 1, got {n}")
    right = (1.0 - p) ** n
    wrong = p**n
    keep = right + wrong
    return wrong / keep, keep


def distilled_qber(
    fidelity: float, eta: float, post_selection: bool = False, n: int = 2
) -> tuple[float, float]:
    """QBER after advantage distillation and the block retention probability.

    Without post-selection AD runs on all-click rounds only, whose
    conditional parity error is (1-F)/2; the retention then carries a factor
    eta^(3n) for the blocks lost to no-clicks.  With post-selection nothing
    is discarded before AD and the per-round error is the post-selected QBER.
    """
    f = _check_unit("fidelity", fidelity)
    e = _check_unit("eta", eta)
    if n < 2:
        raise DomainError(f"block length must be >= 2, got {n}")
    if post_selection:
        return block_filter(raw_qber(f, e, True), n)
    qber, keep = block_filter(0.5 * (1.0 - f), n)
    return qber, keep * e ** (3 * n)


def _base_qber(config: ProtocolConfig) -> tuple[float, float, float]:
    raw = raw_qber(config.fidelity, config.eta, config.post_selection)
    if config.advantage_distillation:
        base, retention = distilled_qber(
            config.fidelity, config.eta, config.post_selection, config.block_length
        )
    else:
        base, retention = raw, 1.0
    return raw, base, retention


def flipped_qber(q: float, base: float) -> float:
    """Error rate after Alice flips her bit with probability q: q + (1-2q)*base."""
    return q + (1.0 - 2.0 * q) * base


def effective_qber(config: ProtocolConfig) -> float:
    _, base, _ = _base_qber(config)
    return flipped_qber(config.q, base)


def eve_entropy_bound(s: float, q: float = 0.0) -> float:
    """Lower bound g(S, q) on Eve's uncertainty about Alice's key bit.

    S below the local bound 2 is clamped to 2 (no violation, no certified
    secrecy); S above 2*sqrt(2) is unphysical and rejected.
    """
    s = float(s)
    q = _check_flip(q)
    if math.isnan(s) or s < 0.0 or s > S_MAX + _S_TOL:
        raise DomainError(f"CHSH value must lie in [0, 2*sqrt(2)], got {s}")
    s = min(max(s, S_LOCAL), S_MAX)
    x = min(max(s * s / 4.0 - 1.0, 0.0), 1.0)
    first = binary_entropy(min(0.5 + 0.5 * math.sqrt(x), 1.0))
    inner = (1.0 - 2.0 * q) ** 2 + 4.0 * q * (1.0 - q) * x
    second = binary_entropy(min(0.5 + 0.5 * math.sqrt(min(inner, 1.0)), 1.0))
    return 1.0 - first + second


def secret_rate(config: ProtocolConfig) -> RateReport:
    """Devetak-Winter style secret-sharing rate g(S, q) - h(effective QBER)."""
    s = chsh_value(config.fidelity, config.eta, config.post_selection)
    raw, base, retention = _base_qber(config)
    eff = flipped_qber(config.q, base)
    bound = eve_entropy_bound(s, config.q)
    unclamped = bound - binary_entropy(eff)
    return RateReport(
        s_value=s,
        raw_qber=raw,
        effective_qber=eff,
        eve_bound=bound,
        rate=max(unclamped, 0.0),
        rate_unclamped=unclamped,
        ad_retention=retention,
    )
