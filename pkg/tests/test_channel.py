import numpy as np
import pytest

from diqss.channel import ChannelParams, distance_for_efficiency, global_efficiency, transmittance
from diqss.errors import DomainError, UnreachableEfficiencyError


def test_transmittance():
    assert transmittance(0) == 1
    assert transmittance(50, 0.2) == pytest.approx(0.1, rel=1e-14)
    assert transmittance(1, 0.2) == pytest.approx(0.9549925860214359, rel=1e-14)
    with pytest.raises(DomainError):
        transmittance(-1)


def test_transmittance_strictly_decreasing():
    d = np.linspace(0, 100, 1001)
    t = np.array([transmittance(x) for x in d])
    assert np.all(np.diff(t) < 0)


def test_global_efficiency():
    assert global_efficiency(0) == pytest.approx(0.9702, abs=1e-15)
    assert global_efficiency(1) == pytest.approx(0.9265338069579972, abs=1e-14)
    assert global_efficiency(1e4) < 1e-100


def test_distance_roundtrip():
    p = ChannelParams()
    assert distance_for_efficiency(p.eta_max, p) == 0
    for d in np.linspace(0, 100, 201):
        assert abs(distance_for_efficiency(global_efficiency(d, p), p) - d) < 1e-9
    assert abs(distance_for_efficiency(global_efficiency(3.7, p), p) - 3.7) < 1e-9


def test_distance_errors():
    with pytest.raises(UnreachableEfficiencyError):
        distance_for_efficiency(0.99)
    with pytest.raises(DomainError):
        distance_for_efficiency(0.0)


@pytest.mark.parametrize("kwargs", [dict(alpha=0), dict(eta_d=0), dict(eta_c=1.2)])
def test_channel_params_validation(kwargs):
    with pytest.raises(DomainError):
        ChannelParams(**kwargs)
