import json
from fractions import Fraction

import pytest

import ffnet


def pair():
    return ffnet.Network([3, 2], [[[1, 1, 0], [0, 1, 1]]])


def test_overlapping_pair():
    net = pair()
    est = ffnet.final_estimate(net)
    assert est["alpha"] == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]
    assert est["variance"] == Fraction(3, 8)
    assert est["ideal_variance"] == Fraction(1, 3)
    assert not ffnet.is_ideal(net)
    assert ffnet.w_motif(net) == {"layer": 2, "agents": (1, 2), "sources": (1, 2, 3)}


def test_precisions_accept_fractions_and_strings():
    net = ffnet.Network([3, 3], [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]])
    est = ffnet.final_estimate(net, [2, "3", Fraction(5)])
    assert est["alpha"] == [Fraction(1, 5), Fraction(3, 10), Fraction(1, 2)]
    assert ffnet.is_ideal(net, [2, 3, 5])


def test_ring():
    assert ffnet.final_estimate(ffnet.ring_network(4))["variance"] == ffnet.ring_variance(4) == Fraction(5, 16)


def test_json_round_trip():
    net = pair()
    again, precisions = ffnet.loads(net.to_json())
    assert again == net
    assert precisions == [1, 1, 1]
    report = json.loads(ffnet.analyze(net))
    assert report["verdict"] == "non-ideal"
    assert ffnet.reduce(net).connectivity == [[[1, 1, 0], [0, 1, 1]]]


def test_ensembles_and_simulation():
    assert ffnet.random_network([5, 4], 0.5, 7) == ffnet.random_network([5, 4], 0.5, 7)
    assert ffnet.p_ideal([4, 3], 1.0, trials=10)["fraction"] == 1.0
    sim = ffnet.simulate(pair(), 100000, seed=3)
    assert abs(sim["variance"] - 0.375) < 3 * sim["variance_stderr"]


def test_errors():
    with pytest.raises(ffnet.Error):
        ffnet.Network([3, 2], [[[1, 1], [0, 1]]])
    with pytest.raises(ValueError):
        ffnet.loads("{")
    with pytest.raises(ffnet.Error):
        ffnet.final_estimate(pair(), [1, 1])
