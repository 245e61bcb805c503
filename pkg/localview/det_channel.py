"""Linear deterministic channel simulation.

Signals are bit vectors of length q, index 0 holding the most significant
level. A link of gain n delivers the top n levels of the transmitted vector
to the bottom n levels at the receiver, and a receiver observes the GF(2)
sum over every transmitter it hears, its own included.
"""
import json
import logging
from collections import OrderedDict, namedtuple

import numpy as np
from sklearn.utils import check_random_state

from .coded_sets import build_constraint_matrix, feasible_gf2
from .exceptions import ScheduleFormatError
from .topology import INTEGER_TYPES

logger = logging.getLogger(__name__)


def shift_down(x, q, n):
    """Apply the q x q down-shift S^(q - n) to ``x``.

    Parameters
    ----------
    x : array-like of length q, entries 0/1

    q : int

    n : int
        Link gain, 0 <= n <= q.

    Returns
    -------
    y : ndarray of uint8
        ``y[q - n:] == x[:n]`` and zeros above.
    """
    x = np.asarray(x, dtype=np.uint8)
    if x.shape != (q,):
        raise ValueError("signal of shape %r does not have %d levels"
                         % (x.shape, q))
    if not isinstance(n, INTEGER_TYPES) or not 0 <= n <= q:
        raise ValueError("gain must be an integer in 0..%d, got %r" % (q, n))
    y = np.zeros(q, dtype=np.uint8)
    if n:
        y[q - n:] = x[:n]
    return y


def receive(inputs, net):
    """Outputs of every receiver for one channel use.

    Parameters
    ----------
    inputs : array-like of shape (K, q)
        Row i - 1 is the signal of T_i.

    net : Network
        Deterministic gains.

    Returns
    -------
    outputs : ndarray of shape (K, q)
        Row j - 1 is Y_j.
    """
    if net.model != 'deterministic':
        raise ValueError("receive needs a deterministic network, got model "
                         "%r" % net.model)
    q = net.q
    X = np.asarray(inputs, dtype=np.uint8)
    if X.shape != (net.n_users, q):
        raise ValueError("inputs of shape %r, expected %r"
                         % (X.shape, (net.n_users, q)))
    Y = np.zeros_like(X)
    for tx, rx in net.edges():
        Y[rx - 1] ^= shift_down(X[tx - 1], q, net.gain(tx, rx))
    return Y


class SlotTranscript(object):
    """ Signals sent and received in every slot of a schedule.

    Parameters
    ----------

    inputs : ndarray of shape (t, K, q)

    outputs : ndarray of shape (t, K, q)
    """

    def __init__(self, inputs, outputs):
        self.inputs = np.asarray(inputs, dtype=np.uint8)
        self.outputs = np.asarray(outputs, dtype=np.uint8)
        if self.inputs.shape != self.outputs.shape:
            raise ValueError("inputs %r and outputs %r differ in shape"
                             % (self.inputs.shape, self.outputs.shape))

    @property
    def t(self):
        return self.inputs.shape[0]

    def to_dict(self):
        slots = []
        for s in range(self.t):
            slot = OrderedDict()
            slot['slot'] = s + 1
            slot['outputs'] = [
                OrderedDict([('receiver', j + 1),
                             ('bits', self.outputs[s, j].tolist())])
                for j in range(self.outputs.shape[1])]
            slot['inputs'] = [
                OrderedDict([('transmitter', i + 1),
                             ('bits', self.inputs[s, i].tolist())])
                for i in range(self.inputs.shape[1])]
            slots.append(slot)
        return OrderedDict([('q', int(self.inputs.shape[2])),
                            ('slots', slots)])

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _check_payloads(net, sched, payloads):
    checked = {}
    for user in net.users:
        n = net.gain(user, user)
        for j in range(1, sched.k + 1 if sched.is_active(user) else 1):
            bits = np.asarray(payloads.get((user, j), np.zeros(n)),
                              dtype=np.uint8)
            if bits.ndim != 1 or len(bits) > n:
                raise ValueError("payload of user %d codeword %d has %d "
                                 "bits, the direct gain allows %d"
                                 % (user, j, bits.size, n))
            padded = np.zeros(n, dtype=np.uint8)
            padded[:len(bits)] = bits
            checked[(user, j)] = padded
    return checked


def transmit(net, sched, payloads):
    """Run a coded schedule through the channel.

    Codeword j of user i occupies the top n_ii levels of X_i in every slot
    of S_{i,j}; idle transmitters send zeros.

    Returns
    -------
    transcript : SlotTranscript
    """
    if sched.n_users != net.n_users:
        raise ScheduleFormatError("schedule has %d users, network %d"
                                  % (sched.n_users, net.n_users))
    q = net.q
    payloads = _check_payloads(net, sched, payloads)
    inputs = np.zeros((sched.t, net.n_users, q), dtype=np.uint8)
    for (user, j), bits in payloads.items():
        if not sched.is_active(user):
            continue
        for slot in sched.slots_of(user, j):
            inputs[slot - 1, user - 1, :len(bits)] = bits
    outputs = np.array([receive(x, net) for x in inputs])
    return SlotTranscript(inputs, outputs)


def decoding_coefficients(net, sched):
    """GF(2) coefficients of every receiver that has them.

    Returns
    -------
    coeffs : dict
        Receiver -> (k, t) array; receivers without a certificate are
        absent.
    """
    coeffs = {}
    for rx in net.users:
        cert = feasible_gf2(build_constraint_matrix(sched, net, rx))
        if cert is not None:
            coeffs[rx] = cert.coefficients
    return coeffs


def _codeword_layout(net, sched):
    """(user, codeword, offset, size) of every active codeword."""
    layout, offset = [], 0
    for user in net.users:
        if not sched.is_active(user):
            continue
        n = net.gain(user, user)
        for j in range(1, sched.k + 1):
            layout.append((user, j, offset, n))
            offset += n
    return layout, offset


def _check_coefficients(sched, coeffs):
    checked = {}
    for rx, a in coeffs.items():
        a = np.asarray(a, dtype=np.uint8) % 2
        if a.shape != (sched.k, sched.t):
            raise ValueError("coefficients of receiver %d have shape %r, "
                             "expected %r" % (rx, a.shape, (sched.k, sched.t)))
        checked[rx] = a
    return checked


def _decode_batch(net, sched, bits, coeffs):
    """Decode verdicts for a batch of stacked payloads.

    ``bits`` has one row per trial, the payloads laid out as in
    :func:`_codeword_layout`. Returns a boolean array with one column per
    codeword.
    """
    layout, _ = _codeword_layout(net, sched)
    q = net.q
    N = bits.shape[0]
    X = np.zeros((N, sched.t, net.n_users, q), dtype=np.uint8)
    for user, j, offset, n in layout:
        for slot in sched.slots_of(user, j):
            X[:, slot - 1, user - 1, :n] = bits[:, offset:offset + n]
    Y = np.zeros_like(X)
    for tx, rx in net.edges():
        g = net.gain(tx, rx)
        if g:
            Y[:, :, rx - 1, q - g:] ^= X[:, :, tx - 1, :g]
    verdicts = np.zeros((N, len(layout)), dtype=bool)
    for c, (user, j, offset, n) in enumerate(layout):
        a = coeffs.get(user)
        if a is None:
            continue
        estimate = np.zeros((N, q), dtype=np.uint8)
        for slot in np.nonzero(a[j - 1])[0]:
            estimate ^= Y[:, slot, user - 1]
        verdicts[:, c] = np.all(estimate[:, q - n:] ==
                                bits[:, offset:offset + n], axis=1)
    return verdicts


def simulate_and_decode(net, sched, payloads, coeffs=None):
    """Send payloads and decode them back at their own receivers.

    Codeword j of user i occupies the top n_ii levels of X_i in every slot
    of S_{i,j}. Receiver i adds up the slots selected by row j of its
    coefficients over GF(2) and reads its bottom n_ii levels.

    Parameters
    ----------
    net : Network
        Deterministic gains.

    sched : CodedSchedule

    payloads : dict
        (user, codeword) -> bit vector of at most n_ii bits; missing
        payloads are zero.

    coeffs : dict, optional
        Receiver -> (k, t) GF(2) array. Computed from the schedule when
        omitted; receivers without coefficients decode nothing.

    Returns
    -------
    verdicts : OrderedDict
        (user, codeword) -> True iff the payload is recovered bit for bit.
    """
    if net.model != 'deterministic':
        raise ValueError("simulation needs a deterministic network, got "
                         "model %r" % net.model)
    if sched.n_users != net.n_users:
        raise ScheduleFormatError("schedule has %d users, network %d"
                                  % (sched.n_users, net.n_users))
    if coeffs is None:
        coeffs = decoding_coefficients(net, sched)
    coeffs = _check_coefficients(sched, coeffs)
    payloads = _check_payloads(net, sched, payloads)
    layout, total = _codeword_layout(net, sched)
    bits = np.zeros((1, total), dtype=np.uint8)
    for user, j, offset, n in layout:
        bits[0, offset:offset + n] = payloads[(user, j)]
    verdicts = _decode_batch(net, sched, bits, coeffs)[0]
    return OrderedDict(((user, j), bool(ok))
                       for (user, j, _, _), ok in zip(layout, verdicts))


def random_payloads(net, sched, random_state=None):
    """Uniform payloads of n_ii bits for every active codeword."""
    rng = check_random_state(random_state)
    payloads = {}
    for user, j, _, n in _codeword_layout(net, sched)[0]:
        payloads[(user, j)] = rng.randint(0, 2, size=n).astype(np.uint8)
    return payloads


def _all_bits(total, chunk=1 << 14):
    """Every bit vector of length ``total`` in chunks of rows."""
    for start in range(0, 1 << total, chunk):
        codes = np.arange(start, min(start + chunk, 1 << total))
        shifts = np.arange(total - 1, -1, -1)
        yield ((codes[:, None] >> shifts) & 1).astype(np.uint8)


VerificationReport = namedtuple('VerificationReport',
                                ['verified', 'n_draws', 'n_trials',
                                 'failures', 'first_failure', 'exhaustive'])


def verify_schedule(net, sched, n_draws=100, n_payloads=16, high=5,
                    exhaustive_bits=20, random_state=None):
    """Check by simulation that every codeword decodes.

    Parameters
    ----------
    net : Network
        A connectivity network gets ``n_draws`` random gain assignments in
        0..``high`` on its links; a deterministic one is checked with its
        own gains.

    sched : CodedSchedule

    n_payloads : int, optional (default=16)
        Random payloads per gain draw when there are more than
        ``exhaustive_bits`` payload bits.

    exhaustive_bits : int, optional (default=20)
        Enumerate every payload when the total number of payload bits is
        at most this.

    random_state : int, RandomState instance or None, optional

    Returns
    -------
    report : VerificationReport
        ``failures`` lists (draw, user, codeword) triples, one per failing
        codeword and draw. ``first_failure`` holds the gains and payloads
        of the first failing trial, None when everything decoded.
    """
    if net.model == 'gaussian':
        raise ValueError("only deterministic or connectivity networks can "
                         "be simulated")
    rng = check_random_state(random_state)
    coeffs = _check_coefficients(sched, decoding_coefficients(net, sched))
    if net.model == 'deterministic':
        draws = [net]
    else:
        draws = [net.with_random_gains(rng, high) for _ in range(n_draws)]

    failures = []
    first_failure = None
    n_trials = 0
    exhaustive = True
    for d, gains in enumerate(draws):
        layout, total = _codeword_layout(gains, sched)
        if total <= exhaustive_bits:
            batches = _all_bits(total)
        else:
            exhaustive = False
            batches = [rng.randint(0, 2, size=(n_payloads, total))
                       .astype(np.uint8)]
        failed = np.zeros(len(layout), dtype=bool)
        for bits in batches:
            verdicts = _decode_batch(gains, sched, bits, coeffs)
            n_trials += bits.shape[0]
            bad = ~verdicts
            if bad.any() and first_failure is None:
                row = bits[np.nonzero(bad.any(axis=1))[0][0]]
                first_failure = OrderedDict([
                    ('draw', d),
                    ('gains', gains.to_dict()),
                    ('payloads', OrderedDict(
                        ('%d/%d' % (user, j),
                         row[offset:offset + n].tolist())
                        for user, j, offset, n in layout))])
            failed |= bad.any(axis=0)
        failures.extend((d, user, j) for (user, j, _, _), f
                        in zip(layout, failed) if f)
    logger.debug("verified %d trials over %d gain draws, %d failures",
                 n_trials, len(draws), len(failures))
    return VerificationReport(not failures, len(draws), n_trials, failures,
                              first_failure, exhaustive)
