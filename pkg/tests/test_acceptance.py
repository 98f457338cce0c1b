"""Acceptance gate: one test per criterion, each with its runtime budget.

The terminal summary (see conftest.py) prints one PASS/FAIL line per
criterion.  Run alone with ``pytest tests/test_acceptance.py``.
"""

import time

import numpy as np
import pytest

from diqss import cli
from diqss.channel import ChannelParams, distance_for_efficiency, global_efficiency
from diqss.distill import ad_decision, mask_block
from diqss.outcome_model import check_density_matrix, noisy_state, svetlichny_polynomial
from diqss.rates import ProtocolConfig, secret_rate
from diqss.simulate import SimulationConfig, run_pipeline
from diqss.verification import (
    check_distance_anchors,
    check_efficiency_thresholds,
    check_monte_carlo,
    check_oracle,
    check_table1,
)


def _gate(results, elapsed, limit):
    failed = [r.line() for r in results if not r.passed]
    assert not failed, "\n".join(failed)
    assert elapsed < limit, f"took {elapsed:.2f} s, budget {limit} s"


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


@pytest.mark.criterion(1, "eight-variant summary table, 32 cells")
def test_criterion_1_table1():
    results, secs = _timed(check_table1)
    assert len(results) == 32
    _gate(results, secs, 5.0)


@pytest.mark.criterion(2, "efficiency thresholds with and without AD")
def test_criterion_2_efficiency_thresholds():
    results, secs = _timed(check_efficiency_thresholds)
    assert len(results) == 8
    _gate(results, secs, 1.0)


@pytest.mark.criterion(3, "distance anchors and rate at 1 km")
def test_criterion_3_distance_anchors():
    results, secs = _timed(check_distance_anchors)
    assert len(results) == 10
    _gate(results, secs, 2.0)


@pytest.mark.criterion(4, "enumeration oracles vs closed forms to 1e-12")
def test_criterion_4_oracle_equivalence():
    results, secs = _timed(check_oracle)
    _gate(results, secs, 10.0)


@pytest.mark.criterion(5, "Monte Carlo within 3 sigma at 1e6 rounds")
def test_criterion_5_monte_carlo():
    results, secs = _timed(check_monte_carlo, 1_000_000)
    assert len(results) == 24
    _gate(results, secs, 60.0)


def _structural():
    rng = np.random.default_rng(20240917)
    for _ in range(10_000):
        n = int(rng.integers(2, 6))
        a, b, c = rng.integers(0, 2, size=(3, n))
        r, t = rng.integers(0, 2, size=2)
        assert ad_decision(a, mask_block(b, r), mask_block(c, t)) == ad_decision(a, b, c)

    for n in (1, 2, 3):
        bits = np.array(np.meshgrid(*[[0, 1]] * (3 * n), indexing="ij")).reshape(3 * n, -1).T
        for row in bits:
            a, b, c = row[:n], row[n:2 * n], row[2 * n:]
            assert ad_decision(a, b, c) == (len(set(a ^ b ^ c)) == 1)

    grid = np.linspace(0, 1, 21)
    for f in grid:
        for e in grid:
            for ps in (False, True):
                for ad in (False, True):
                    with_np = secret_rate(ProtocolConfig(f, e, 0.0, True, ps, ad))
                    plain = secret_rate(ProtocolConfig(f, e, 0.0, False, ps, ad))
                    assert with_np == plain
        assert secret_rate(ProtocolConfig(f, 1.0, post_selection=True)).rate == pytest.approx(
            secret_rate(ProtocolConfig(f, 1.0)).rate, abs=1e-12)

    for f in np.linspace(0, 1, 41):
        assert svetlichny_polynomial(f) == pytest.approx(4 * np.sqrt(2) * f, abs=1e-12)
        check_density_matrix(noisy_state(f))
    assert svetlichny_polynomial(1 / np.sqrt(2)) == pytest.approx(4.0, abs=1e-12)

    p = ChannelParams()
    for d in np.linspace(0, 100, 1001):
        assert abs(distance_for_efficiency(global_efficiency(d, p), p) - d) < 1e-9


@pytest.mark.criterion(6, "structural and property suite")
def test_criterion_6_structural():
    _, secs = _timed(_structural)
    assert secs < 10.0, f"took {secs:.2f} s"


@pytest.mark.criterion(7, "determinism of seeded runs and file output")
def test_criterion_7_determinism(tmp_path):
    cfg = SimulationConfig(ProtocolConfig(0.95, 0.95, 0.05, True, True, True), 200_000, 99)
    assert run_pipeline(cfg) == run_pipeline(cfg)
    invocations = [
        ["simulate", "--variant", "nps", "--ad", "--rounds", "200000", "--seed", "99"],
        ["sweep", "--axis", "d:0:2:21", "--axis", "F:0.9:1:5"],
        ["sweep", "--axis", "eta:0.85:1:16", "--format", "json"],
        ["table1", "--format", "csv"],
    ]
    for i, argv in enumerate(invocations):
        outs = [tmp_path / f"{i}_{k}.out" for k in range(2)]
        for out in outs:
            assert cli.main([*argv, "--output", str(out)]) == 0
        assert outs[0].read_bytes() == outs[1].read_bytes()


def test_np_threshold_premise_reported(capsys):
    """The np rows match the table at q=0.05; at q=0 they collapse onto basic."""
    from diqss.rates import Variant
    from diqss.thresholds import efficiency_threshold
    from diqss.verification import REFERENCE_TABLE1

    for name in ("np", "nps", "ad+np", "ad+nps"):
        v = Variant.from_name(name)
        ref = REFERENCE_TABLE1[name][2]
        at_q = 100 * efficiency_threshold(0.98, 0.05, v)
        at_0 = 100 * efficiency_threshold(0.98, 0.0, v)
        with capsys.disabled():
            print(f"\n  {name}: eta_th {at_q:.3f}% at q=0.05, {at_0:.3f}% at q=0, table {ref}%")
        assert abs(at_q - ref) <= 0.05
