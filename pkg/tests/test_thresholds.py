import numpy as np
import pytest

from diqss.channel import ChannelParams, distance_for_efficiency
from diqss.errors import NoThresholdError
from diqss.rates import TABLE1_VARIANTS, Variant
from diqss.thresholds import (
    SECURE_FLOOR,
    efficiency_threshold,
    max_distance,
    noise_tolerance,
    rate_at,
    threshold_report,
)

BASIC = Variant()
AD_BASIC = Variant(advantage_distillation=True)
AD_PS = Variant(post_selection=True, advantage_distillation=True)


def test_threshold_basic_examples():
    assert efficiency_threshold(1, 0, BASIC) == pytest.approx(0.963, abs=1e-3)
    assert efficiency_threshold(1, 0, AD_BASIC) == pytest.approx(0.891, abs=1e-3)
    assert efficiency_threshold(0.98, 0, BASIC) == pytest.approx(0.9681, abs=5e-4)
    assert efficiency_threshold(0.98, 0, AD_PS) == pytest.approx(0.9206, abs=5e-4)


def test_threshold_ad_perfect_state_closed_form():
    # QBER after AD vanishes at F=1, so security starts exactly at S = 2
    assert efficiency_threshold(1, 0, AD_BASIC) == pytest.approx(2 ** (-1 / 6), abs=2e-9)


def test_threshold_brackets_sign_change():
    for v in TABLE1_VARIANTS:
        eta = efficiency_threshold(0.98, 0.05, v)
        assert rate_at(0.98, eta, 0.05, v) > SECURE_FLOOR
        assert rate_at(0.98, eta - 2e-9, 0.05, v) <= SECURE_FLOOR
        assert abs(rate_at(0.98, eta, 0.05, v)) < 1e-7


def test_no_threshold():
    with pytest.raises(NoThresholdError):
        efficiency_threshold(0.6, 0, BASIC)


def test_noise_tolerance_examples():
    assert noise_tolerance(0.98, 0, BASIC) == pytest.approx(0.1017, abs=5e-4)
    assert noise_tolerance(0.98, 0, AD_BASIC) == pytest.approx(0.2849, abs=5e-4)
    assert noise_tolerance(0.98, 0, AD_PS) == pytest.approx(0.1175, abs=5e-4)


def test_threshold_non_increasing_in_fidelity():
    fs = np.linspace(0.9, 1.0, 21)
    th = [efficiency_threshold(f, 0, BASIC) for f in fs]
    assert all(b <= a + 1e-9 for a, b in zip(th, th[1:]))


@pytest.mark.parametrize("f", [0.9, 0.95, 0.98, 1.0])
@pytest.mark.parametrize("q", [0.0, 0.05, 0.1])
@pytest.mark.parametrize("npp, ps", [(False, False), (True, False), (False, True), (True, True)])
def test_ad_lowers_threshold(f, q, npp, ps):
    plain = Variant(npp, ps, False)
    ad = Variant(npp, ps, True)
    try:
        without = efficiency_threshold(f, q, plain)
    except NoThresholdError:
        without = 1.0
    assert efficiency_threshold(f, q, ad) <= without


def test_max_distance_examples():
    assert max_distance(1, 0.05, BASIC).km == pytest.approx(0.16, abs=0.01)
    ad = max_distance(1, 0.05, AD_BASIC)
    assert ad.km == pytest.approx(1.85, abs=0.01)
    assert ad.user_to_user_km == pytest.approx(3.70, abs=0.02)
    nps = Variant(True, True, True)
    assert max_distance(1, 0.05, nps).km == pytest.approx(1.39, abs=0.01)


@pytest.mark.parametrize("v", TABLE1_VARIANTS, ids=lambda v: v.name)
def test_max_distance_paths_agree(v):
    res = max_distance(1, 0.05, v)
    assert res.reachable
    assert abs(res.km - res.km_bisection) < 1e-6
    assert res.km == pytest.approx(distance_for_efficiency(efficiency_threshold(1, 0.05, v)), abs=1e-12)


def test_max_distance_unreachable():
    lossy = ChannelParams(eta_d=0.9, eta_c=0.9)
    res = max_distance(1, 0, BASIC, params=lossy)
    assert not res.reachable
    assert res.km == 0


def test_threshold_report():
    rep = threshold_report(0.98, 0.05, Variant(True, False, False), params=ChannelParams())
    assert rep.q == 0.05
    assert rep.bracket_residual < 1e-7
    assert rep.eta_threshold == pytest.approx(0.9659, abs=5e-4)
    assert rep.delta_threshold == pytest.approx(0.1080, abs=5e-4)
    assert rep.d_max_user_to_user == 2 * rep.d_max
    # q is dropped for variants without pre-processing
    assert threshold_report(0.98, 0.05, BASIC).q == 0.0
    assert threshold_report(0.98, 0.05, BASIC).d_max is None
