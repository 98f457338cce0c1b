"""Self-checks: enumeration oracles, Monte Carlo agreement, published values.

Each suite returns a list of :class:`CheckResult`; ``diqss verify`` prints
them and the acceptance tests assert on them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .channel import ChannelParams, global_efficiency
from .outcome_model import apply_post_selection, oracle_ad, oracle_qber, outcome_distribution
from .rates import TABLE1_VARIANTS, ProtocolConfig, Variant, distilled_qber, raw_qber, secret_rate
from .simulate import PRE_AD, SimulationConfig, run_pipeline
from .sweep import table1
from .thresholds import efficiency_threshold, max_distance

ORACLE_GRID = (0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.98, 1.0)
ORACLE_TOL = 1e-12

#: variant -> (rate, delta_th [%], eta_th [%], d_max [km]) at F=0.98, q=0.05, eta=0.98
REFERENCE_TABLE1 = {
    "basic": (0.234, 10.17, 96.81, 0.16),
    "np": (0.198, 10.80, 96.59, 0.20),
    "ps": (0.357, 7.15, 95.63, 0.46),
    "nps": (0.283, 7.62, 95.28, 0.54),
    "ad+basic": (0.592, 28.49, 89.72, 1.85),
    "ad+np": (0.415, 28.54, 89.70, 1.85),
    "ad+ps": (0.576, 11.75, 92.06, 1.28),
    "ad+nps": (0.410, 12.30, 91.61, 1.39),
}
RATE_TOL = 0.002
PERCENT_TOL = 0.05
KM_TOL = 0.01

#: F -> (eta_th without AD, eta_th with AD), basic protocol
REFERENCE_EFFICIENCY_THRESHOLDS = {
    1.0: (0.963, 0.891),
    0.99: (0.966, 0.894),
    0.97: (0.971, 0.901),
    0.95: (0.976, 0.908),
}
ETA_TOL = 0.001

#: rate at d = 1 km, F = 1, default channel
REFERENCE_RATE_AT_1KM = {"ad+basic": 0.2015, "ad+ps": 0.1037}

MC_POINTS = ((0.98, 0.98), (0.95, 0.95))
MC_Q = 0.05
MC_SEEDS = (20240917, 77)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _within(name: str, got: float, want: float, tol: float, unit: str = "") -> CheckResult:
    err = abs(got - want)
    return CheckResult(name, err <= tol, f"got {got:.6g}{unit}, want {want}{unit} +/- {tol}{unit}")


# literal closed forms, written independently of diqss.rates
def _qber_loss_as_error(f, e):
    return 1 - 0.5 * e**3 * (1 + f)


def _qber_post_selected(f, e):
    return (1 - f) / 2 * e**3 - 1.5 * e**2 + 1.5 * e


def _ad_retention_basic(f, e):
    return 0.25 * e**6 * ((1 + f) ** 2 + (1 - f) ** 2)


def _ad_qber_basic(f):
    return (1 - f) ** 2 / ((1 + f) ** 2 + (1 - f) ** 2)


def _ad_qber_post_selected(f, e):
    lost = (1 - e) ** 3
    bad = 1 - f * e**3 - lost
    good = 1 + f * e**3 + lost
    return bad**2 / (good**2 + bad**2)


def check_oracle(grid=ORACLE_GRID, tol: float = ORACLE_TOL) -> list[CheckResult]:
    """Enumeration vs closed forms for every (F, eta) pair on ``grid``."""
    worst = {k: 0.0 for k in (
        "basic QBER (loss counted as error)",
        "odd-parity all-click mass",
        "post-selected QBER",
        "AD retention, basic",
        "AD QBER, basic",
        "AD QBER, post-selected",
        "AD retention, post-selected",
        "rates.raw_qber vs enumeration",
        "rates.distilled_qber vs enumeration",
    )}

    def track(key, a, b):
        worst[key] = max(worst[key], abs(a - b))

    for f in grid:
        for e in grid:
            dist = outcome_distribution(f, e)
            ps = apply_post_selection(dist)
            q_basic = oracle_qber(dist)
            q_ps = oracle_qber(ps)
            track("basic QBER (loss counted as error)", q_basic, _qber_loss_as_error(f, e))
            odd = sum(p for cell, p in dist.probs.items() if 0 not in cell and cell[0] * cell[1] * cell[2] < 0)
            track("odd-parity all-click mass", odd, 0.5 * (1 - f) * e**3)
            track("post-selected QBER", q_ps, _qber_post_selected(f, e))
            track("rates.raw_qber vs enumeration", raw_qber(f, e, False), q_basic)
            track("rates.raw_qber vs enumeration", raw_qber(f, e, True), q_ps)

            keep, err = oracle_ad(dist, n=2, discard_noclick=True)
            track("AD retention, basic", keep, _ad_retention_basic(f, e))
            qb, kb = distilled_qber(f, e, False, 2)
            track("rates.distilled_qber vs enumeration", kb, keep)
            if keep > 0:
                track("AD QBER, basic", err, _ad_qber_basic(f))
                track("rates.distilled_qber vs enumeration", qb, err)

            keep_p, err_p = oracle_ad(ps, n=2, discard_noclick=False)
            d_p = _qber_post_selected(f, e)
            track("AD QBER, post-selected", err_p, _ad_qber_post_selected(f, e))
            track("AD retention, post-selected", keep_p, (1 - d_p) ** 2 + d_p**2)
            qp, kp = distilled_qber(f, e, True, 2)
            track("rates.distilled_qber vs enumeration", qp, err_p)
            track("rates.distilled_qber vs enumeration", kp, keep_p)

    n = len(grid)
    return [
        CheckResult(f"oracle: {k}", v <= tol, f"max |diff| = {v:.2e} over {n}x{n} grid (tol {tol:g})")
        for k, v in worst.items()
    ]


def check_table1() -> list[CheckResult]:
    """All 32 cells of the eight-variant summary."""
    out = []
    for row in table1():
        rate, delta, eta, km = REFERENCE_TABLE1[row.variant]
        out.append(_within(f"table1 {row.variant} rate", row.rate, rate, RATE_TOL))
        out.append(_within(f"table1 {row.variant} delta_th", 100 * row.delta_threshold, delta, PERCENT_TOL, "%"))
        out.append(_within(f"table1 {row.variant} eta_th", 100 * row.eta_threshold, eta, PERCENT_TOL, "%"))
        out.append(_within(f"table1 {row.variant} d_max", row.d_max, km, KM_TOL, " km"))
    return out


def check_efficiency_thresholds() -> list[CheckResult]:
    out = []
    for f, (plain, ad) in REFERENCE_EFFICIENCY_THRESHOLDS.items():
        out.append(_within(f"eta_th basic F={f}", efficiency_threshold(f, 0.0, Variant()), plain, ETA_TOL))
        out.append(_within(f"eta_th ad+basic F={f}", efficiency_threshold(f, 0.0, Variant(False, False, True)), ad, ETA_TOL))
    return out


def check_distance_anchors(q: float = 0.05, params: ChannelParams = ChannelParams()) -> list[CheckResult]:
    out = []
    for v in TABLE1_VARIANTS:
        km = REFERENCE_TABLE1[v.name][3]
        out.append(_within(f"d_max {v.name} F=1", max_distance(1.0, q, v, 2, params).km, km, KM_TOL, " km"))
    eta = global_efficiency(1.0, params)
    for name, want in REFERENCE_RATE_AT_1KM.items():
        cfg = ProtocolConfig.for_variant(Variant.from_name(name), 1.0, eta, q)
        out.append(_within(f"rate at 1 km {name}", secret_rate(cfg).rate, want, RATE_TOL))
    return out


def _mc_quantities(report):
    return (
        ("qber_before_ad", report.qber_before_ad, report.analytic_qber_before),
        ("qber_after_ad", report.qber_after_ad, report.analytic_qber_after),
        ("retention", report.retention, report.analytic_retention),
    )


def check_monte_carlo(
    rounds: int = 1_000_000, seeds=MC_SEEDS, flip_stage: str = PRE_AD
) -> list[CheckResult]:
    """Empirical vs exact for the four AD variants at two (F, eta) points.

    A quantity passes within 3 sigma on the first seed; if it misses, it gets
    one rerun on the second seed at 4 sigma.
    """
    out = []
    for f, e in MC_POINTS:
        for v in TABLE1_VARIANTS:
            if not v.advantage_distillation:
                continue
            cfg = ProtocolConfig.for_variant(v, f, e, MC_Q)
            first = run_pipeline(SimulationConfig(cfg, rounds, seeds[0]), flip_stage)
            rerun = None
            for i, (name, est, want) in enumerate(_mc_quantities(first)):
                z = est.sigma_distance(want)
                passed = z <= 3.0
                detail = f"{est.value:.6g} vs {want:.6g} ({z:.2f} sigma, seed {seeds[0]})"
                if not passed and len(seeds) > 1:
                    if rerun is None:
                        rerun = run_pipeline(SimulationConfig(cfg, rounds, seeds[1]), flip_stage)
                    _, est2, want2 = _mc_quantities(rerun)[i]
                    z2 = est2.sigma_distance(want2)
                    passed = z2 <= 4.0
                    detail += f"; rerun {z2:.2f} sigma (seed {seeds[1]}, 4 sigma guard)"
                out.append(CheckResult(f"mc {v.name} F={f} eta={e} {name}", passed, detail))
    return out


SUITES = {
    "oracle": check_oracle,
    "table1": check_table1,
    "thresholds": check_efficiency_thresholds,
    "distance": check_distance_anchors,
    "mc": check_monte_carlo,
}


def all_passed(results) -> bool:
    return all(r.passed for r in results)
