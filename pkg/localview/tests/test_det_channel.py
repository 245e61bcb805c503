"""
Testing for the deterministic channel simulator (localview.det_channel).
"""
import json

import numpy as np
import pytest
from numpy.testing import assert_array_equal
from sklearn.utils import check_random_state

from localview import CodedSchedule, Network
from localview.coded_sets import cyclic_chain_schedule
from localview.datasets import (make_cyclic_chain, make_fully_connected,
                                make_z_chain, make_z_network)
from localview.det_channel import (decoding_coefficients, random_payloads,
                                   receive, shift_down, simulate_and_decode,
                                   transmit, verify_schedule)
from localview.exceptions import ScheduleFormatError

rng = check_random_state(0)


def test_shift_down():
    assert_array_equal(shift_down([1, 0, 1], 3, 2), [0, 1, 0])
    assert_array_equal(shift_down([1, 0, 1], 3, 3), [1, 0, 1])
    assert_array_equal(shift_down([1, 1, 1], 3, 0), [0, 0, 0])
    with pytest.raises(ValueError):
        shift_down([1, 0], 3, 1)
    with pytest.raises(ValueError):
        shift_down([1, 0, 1], 3, 4)


def test_receive_is_linear():
    """Outputs are GF(2) sums of shifted inputs."""
    net = Network(2, [(1, 2)], [2, 2], {(1, 2): 1}, 'deterministic')
    assert_array_equal(receive([[1, 1], [1, 0]], net), [[1, 1], [1, 1]])
    net = make_z_chain((3, 2, 3, 1, 2))
    for _ in range(20):
        X1 = rng.randint(0, 2, size=(3, 3))
        X2 = rng.randint(0, 2, size=(3, 3))
        assert_array_equal(receive(X1 ^ X2, net),
                           receive(X1, net) ^ receive(X2, net))
    with pytest.raises(ValueError):
        receive([[1, 1]], net)
    with pytest.raises(ValueError):
        receive([[1], [1]], make_z_network())


def test_transmit_transcript():
    """Check the slot transcript of a two-slot schedule."""
    net = make_z_network().binary()
    sched = CodedSchedule(2, 1, [[[1]], [[2]]])
    transcript = transmit(net, sched, {(1, 1): [1], (2, 1): [1]})
    assert transcript.t == 2
    assert_array_equal(transcript.inputs[:, :, 0], [[1, 0], [0, 1]])
    assert_array_equal(transcript.outputs[:, :, 0], [[1, 1], [0, 1]])
    doc = json.loads(transcript.to_json())
    assert doc['q'] == 1
    assert [s['slot'] for s in doc['slots']] == [1, 2]
    assert doc['slots'][0]['outputs'][1] == {'receiver': 2, 'bits': [1]}
    with pytest.raises(ValueError):
        transmit(net, sched, {(1, 1): [1, 0]})


def test_cyclic_schedule_decodes():
    """Every receiver of a 3-user cyclic chain recovers its codeword."""
    net = make_cyclic_chain(3).with_random_gains(rng)
    sched = CodedSchedule(2, 1, {1: [[1]], 2: [[1, 2]], 3: [[2]]})
    coeffs = decoding_coefficients(net, sched)
    assert_array_equal(coeffs[3], [[1, 1]])
    for _ in range(10):
        payloads = random_payloads(net, sched, rng)
        verdicts = simulate_and_decode(net, sched, payloads)
        assert list(verdicts) == [(1, 1), (2, 1), (3, 1)]
        assert all(verdicts.values())


def test_wrong_coefficients_fail():
    """Decoding with the wrong slot loses the codeword."""
    net = make_cyclic_chain(3).binary()
    sched = CodedSchedule(2, 1, {1: [[1]], 2: [[1, 2]], 3: [[2]]})
    coeffs = decoding_coefficients(net, sched)
    coeffs[3] = np.array([[0, 1]])
    payloads = {(1, 1): [0], (2, 1): [1], (3, 1): [0]}
    verdicts = simulate_and_decode(net, sched, payloads, coeffs)
    assert not verdicts[(3, 1)]
    assert verdicts[(1, 1)] and verdicts[(2, 1)]
    with pytest.raises(ValueError):
        simulate_and_decode(net, sched, payloads, {1: np.zeros((2, 2))})
    with pytest.raises(ValueError):
        simulate_and_decode(make_cyclic_chain(3), sched, payloads)
    with pytest.raises(ScheduleFormatError):
        simulate_and_decode(make_z_network().binary(), sched, payloads)


def test_verify_cyclic_chains():
    """The two-slot cyclic construction decodes for odd K."""
    for n_users in (3, 5, 7, 9):
        net = make_cyclic_chain(n_users)
        sched = cyclic_chain_schedule(n_users)
        report = verify_schedule(net, sched, n_draws=100, random_state=7)
        assert report.verified
        assert report.failures == []
        assert report.first_failure is None
        assert report.n_draws == 100


def test_verify_reports_failures():
    """A schedule a receiver cannot decode is reported with its draw."""
    net = make_fully_connected(2)
    sched = CodedSchedule(1, 1, [[[1]], [[1]]])
    report = verify_schedule(net, sched, n_draws=20, random_state=0)
    assert not report.verified
    assert report.first_failure is not None
    assert report.exhaustive
    assert set(u for _, u, _ in report.failures) <= set([1, 2])

    # one fixed deterministic network, enumerated exhaustively
    det = Network(2, [(1, 2)], [2, 2], {(1, 2): 1}, 'deterministic')
    tdma = CodedSchedule(2, 1, [[[1]], [[2]]])
    report = verify_schedule(det, tdma, random_state=0)
    assert report.verified
    assert report.n_draws == 1
    assert report.n_trials == 16
    assert report.exhaustive

    gauss = Network(2, [(1, 2)], [1., 1.], {(1, 2): 1.}, 'gaussian')
    with pytest.raises(ValueError):
        verify_schedule(gauss, tdma)
