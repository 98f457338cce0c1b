"""Seeded Monte Carlo of the full per-round pipeline.

Pipeline: sample outcomes -> (post-selection remap | drop rounds with a
no-click) -> encode to bits -> optional flip of Alice's bit -> optional
advantage distillation.  Empirical rates are reported next to the exact
closed forms for the same bookkeeping.

Random streams come from ``numpy.random.SeedSequence(seed).spawn(3)``:
stream 0 draws outcomes, stream 1 draws Alice's flips and stream 2 draws the
distillation masks (all ``r`` then all ``t``).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import binomtest

from .distill import run_distillation
from .errors import DomainError
from .outcome_model import NO_CLICK, THREE_VALUED_CELLS, outcome_distribution
from .rates import ProtocolConfig, block_filter, effective_qber, flipped_qber, raw_qber

PRE_AD = "pre_ad"
POST_AD = "post_ad"

_CELLS = np.array(THREE_VALUED_CELLS, dtype=np.int8)


@dataclass(frozen=True)
class SimulationConfig:
    protocol: ProtocolConfig
    rounds: int
    seed: int = 0

    def __post_init__(self):
        if int(self.rounds) != self.rounds or self.rounds < 1:
            raise DomainError(f"rounds must be a positive integer, got {self.rounds}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class Estimate:
    """Empirical binomial proportion with a 95% Wilson half-width."""

    value: float
    ci_halfwidth: float
    successes: int
    trials: int

    @classmethod
    def from_counts(cls, successes: int, trials: int) -> Estimate:
        if trials == 0:
            return cls(float("nan"), float("nan"), 0, 0)
        ci = binomtest(successes, trials).proportion_ci(0.95, method="wilson")
        return cls(successes / trials, (ci.high - ci.low) / 2, successes, trials)

    def sigma_distance(self, expected: float) -> float:
        """|empirical - expected| in binomial standard deviations at ``expected``."""
        diff = abs(self.value - expected)
        sd = math.sqrt(expected * (1 - expected) / self.trials)
        if sd == 0:
            return 0.0 if diff == 0 else math.inf
        return diff / sd


@dataclass(frozen=True)
class MCReport:
    rounds_sampled: int
    rounds_sifted: int
    qber_before_ad: Estimate
    loss_inclusive_qber: Estimate
    qber_after_ad: Optional[Estimate]
    retention: Optional[Estimate]
    analytic_qber_before: float
    analytic_loss_inclusive_qber: float
    analytic_qber_after: Optional[float]
    analytic_retention: Optional[float]
    flip_stage: str

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _streams(seed: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3)]


def _draw(protocol: ProtocolConfig, rounds: int, rng: np.random.Generator) -> np.ndarray:
    probs = outcome_distribution(protocol.fidelity, protocol.eta).as_array()
    idx = rng.choice(len(probs), size=rounds, p=probs / probs.sum())
    return _CELLS[idx]


def sample_rounds(config: SimulationConfig) -> np.ndarray:
    """I.i.d. outcome triples, shape ``(rounds, 3)`` over {+1, -1, NO_CLICK}."""
    return _draw(config.protocol, config.rounds, _streams(config.seed)[0])


def flip_bits(bits: np.ndarray, q: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit independently with probability q."""
    if q == 0:
        return bits.copy()
    return bits ^ (rng.random(bits.shape) < q).astype(np.uint8)


def sift(outcomes: np.ndarray, post_selection: bool) -> np.ndarray:
    """Remap or drop no-clicks, then encode +1 -> 0 and -1 -> 1."""
    if post_selection:
        kept = np.where(outcomes == NO_CLICK, 1, outcomes)
    else:
        kept = outcomes[np.all(outcomes != NO_CLICK, axis=1)]
    return (kept == -1).astype(np.uint8)


def run_pipeline(config: SimulationConfig, flip_stage: str = PRE_AD) -> MCReport:
    """Run the pipeline and compare with exact values.

    ``flip_stage`` places Alice's noise pre-processing flip before
    distillation (``pre_ad``, the protocol's order) or on the distilled bits
    (``post_ad``, the order under which q + (1-2q) * QBER_AD is exact).
    """
    if flip_stage not in (PRE_AD, POST_AD):
        raise DomainError(f"flip_stage must be {PRE_AD!r} or {POST_AD!r}")
    p = config.protocol
    q = p.q if p.noise_preprocessing else 0.0
    outcomes_rng, flip_rng, mask_rng = _streams(config.seed)

    outcomes = _draw(p, config.rounds, outcomes_rng)
    bits = sift(outcomes, p.post_selection)
    a, b, c = bits[:, 0], bits[:, 1], bits[:, 2]
    if flip_stage == PRE_AD:
        a = flip_bits(a, q, flip_rng)

    sifted = len(bits)
    errors = int((a ^ b ^ c).sum())
    lost = config.rounds - sifted
    before = Estimate.from_counts(errors, sifted)
    loss_inclusive = Estimate.from_counts(errors + lost, config.rounds)

    # click-conditional per-round error of the unflipped sifted stream
    if p.post_selection:
        p_round = raw_qber(p.fidelity, p.eta, True)
        click = 1.0
    else:
        p_round = 0.5 * (1.0 - p.fidelity)
        click = p.eta**3
    p_pre = flipped_qber(q, p_round) if flip_stage == PRE_AD else p_round

    after = retention = None
    analytic_after = analytic_retention = None
    if p.advantage_distillation:
        kept, stats = run_distillation(a, b, c, p.block_length, mask_rng)
        ka = kept[:, 0]
        if flip_stage == POST_AD:
            ka = flip_bits(ka, q, flip_rng)
        after = Estimate.from_counts(int((ka ^ kept[:, 1] ^ kept[:, 2]).sum()), len(kept))
        retention = Estimate.from_counts(stats.blocks_kept, stats.blocks_total)
        qber_ad, analytic_retention = block_filter(p_pre, p.block_length)
        analytic_after = qber_ad if flip_stage == PRE_AD else effective_qber(p)

    return MCReport(
        rounds_sampled=config.rounds,
        rounds_sifted=sifted,
        qber_before_ad=before,
        loss_inclusive_qber=loss_inclusive,
        qber_after_ad=after,
        retention=retention,
        analytic_qber_before=p_pre,
        analytic_loss_inclusive_qber=(1.0 - click) + click * p_pre,
        analytic_qber_after=analytic_after,
        analytic_retention=analytic_retention,
        flip_stage=flip_stage,
    )
