"""Coded set scheduling.

Each user i sends k codewords, codeword j repeated in every slot of
S_{i,j}. Receiver i stacks, per transmitter it hears (its own first, then
interferers in ascending order), k rows marking the slots of each
codeword. The resulting constraint matrix F_i decides decodability: the
own codewords are recoverable when every unit target e_j (j <= k) lies in
the column span of F_i, over GF(2) for the deterministic model and over
the reals for the Gaussian model.
"""
import logging
from collections import OrderedDict, namedtuple
from fractions import Fraction
from itertools import product
from warnings import warn

import numpy as np
from scipy.linalg import pinv
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._config import _resolve
from .exceptions import (InfeasibleScheduleError, NonExhaustiveWarning,
                         ScheduleFormatError, SizeCapError)
from .schedule import CodedSchedule
from .scheduler import optimize_mig
from .topology import INTEGER_TYPES

logger = logging.getLogger(__name__)

FIELDS = ('gf2', 'real')


def gf2_solve(A, B):
    """Solve ``A X = B`` over GF(2).

    Parameters
    ----------
    A : array-like of shape (m, n), entries 0/1

    B : array-like of shape (m,) or (m, p), entries 0/1

    Returns
    -------
    X : ndarray of uint8, shape (n,) or (n, p), or None
        A solution with every free variable set to zero, None when the
        system is inconsistent.
    """
    A = np.asarray(A, dtype=np.uint8) % 2
    B = np.asarray(B, dtype=np.uint8) % 2
    vector = B.ndim == 1
    if vector:
        B = B[:, None]
    m, n = A.shape
    if B.shape[0] != m:
        raise ValueError("A has %d rows but B has %d" % (m, B.shape[0]))
    R = np.hstack([A, B])
    pivots = []
    row = 0
    for col in range(n):
        found = np.nonzero(R[row:, col])[0]
        if found.size == 0:
            continue
        pivot = row + found[0]
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
        # reduced form: clear the column above and below
        others = np.nonzero(R[:, col])[0]
        for r in others:
            if r != row:
                R[r] ^= R[row]
        pivots.append(col)
        row += 1
        if row == m:
            break
    if R[row:, n:].any():
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.uint8)
    for r, col in enumerate(pivots):
        X[col] = R[r, n:]
    return X[:, 0] if vector else X


class ConstraintMatrix(object):
    """ Binary constraint matrix of one receiver.

    Parameters
    ----------

    receiver : int
        The receiver D_i.

    matrix : array-like of shape (k * d_i, t)
        Row block b, row j has a one at every slot of codeword j of the
        b-th transmitter in ``transmitters``.

    k : int
        Codewords per user.

    transmitters : sequence of int
        Block order, the own transmitter first.
    """

    def __init__(self, receiver, matrix, k, transmitters):
        self.receiver = receiver
        self.matrix = np.asarray(matrix, dtype=np.uint8)
        self.k = int(k)
        self.transmitters = tuple(transmitters)
        if self.matrix.ndim != 2 or \
                self.matrix.shape[0] != self.k * len(self.transmitters):
            raise ValueError("matrix of shape %r does not hold %d blocks of "
                             "%d rows" % (self.matrix.shape,
                                          len(self.transmitters), self.k))

    @property
    def t(self):
        return self.matrix.shape[1]

    def target(self):
        """The stacked targets [I_k; 0], one column per own codeword."""
        T = np.zeros((self.matrix.shape[0], self.k), dtype=np.uint8)
        T[:self.k, :self.k] = np.eye(self.k, dtype=np.uint8)
        return T

    def __repr__(self):
        return 'ConstraintMatrix(receiver=%r, k=%d, transmitters=%r, ' \
            'matrix=%r)' % (self.receiver, self.k, self.transmitters,
                            self.matrix.tolist())


class Certificate(namedtuple('Certificate',
                             ['receiver', 'field', 'coefficients',
                              'penalty'])):
    """Decoding coefficients of one receiver.

    ``coefficients[j - 1, l - 1]`` is a_{jl}, the weight of slot l when
    recovering own codeword j. ``penalty`` is b_i = max_j sum_l a_{jl}^2
    for the real field and None over GF(2).
    """
    __slots__ = ()

    def to_dict(self):
        doc = OrderedDict()
        doc['receiver'] = self.receiver
        doc['field'] = self.field
        doc['coefficients'] = np.asarray(self.coefficients).tolist()
        doc['penalty'] = self.penalty
        return doc


def _codeword_rows(sched, user):
    rows = np.zeros((sched.k, sched.t), dtype=np.uint8)
    if sched.is_active(user):
        for j in range(1, sched.k + 1):
            for slot in sched.slots_of(user, j):
                rows[j - 1, slot - 1] = 1
    return rows


def build_constraint_matrix(sched, net, rx):
    """Constraint matrix F_rx of a coded schedule.

    Parameters
    ----------
    sched : CodedSchedule

    net : Network
        Only its links matter; every transmitter with a link into D_rx
        gets a block.

    rx : int

    Returns
    -------
    F : ConstraintMatrix
    """
    if sched.n_users != net.n_users:
        raise ScheduleFormatError("schedule has %d users, network %d"
                                  % (sched.n_users, net.n_users))
    if not 1 <= rx <= net.n_users:
        raise ValueError("unknown receiver %r" % (rx,))
    transmitters = [rx] + net.in_neighbors(rx)
    matrix = np.vstack([_codeword_rows(sched, u) for u in transmitters])
    return ConstraintMatrix(rx, matrix, sched.k, transmitters)


def feasible_gf2(F, k=None):
    """GF(2) decoding certificate of a constraint matrix, or None."""
    k = F.k if k is None else k
    X = gf2_solve(F.matrix, F.target()[:, :k])
    if X is None:
        return None
    return Certificate(F.receiver, 'gf2', X.T.copy(), None)


def feasible_real(F, k=None, residual_tol=None):
    """Real decoding certificate from the minimum-norm solution, or None.

    The coefficients are ``pinv(F) @ [I_k; 0]``; the system counts as
    solvable when the residual is at most ``residual_tol``.
    """
    k = F.k if k is None else k
    residual_tol = _resolve('residual_tol', residual_tol)
    A = F.matrix.astype(float)
    target = F.target()[:, :k].astype(float)
    X = pinv(A).dot(target)
    residual = np.abs(A.dot(X) - target).max() if target.size else 0.
    if residual > residual_tol:
        return None
    coefficients = X.T
    penalty = float(np.max(np.sum(coefficients ** 2, axis=1)))
    return Certificate(F.receiver, 'real', coefficients, penalty)


CSValue = namedtuple('CSValue', ['alpha', 'tau', 'rates', 'certificates'])


def _field_of(model):
    if model == 'gaussian':
        return 'real'
    if model in ('deterministic', 'connectivity'):
        return 'gf2'
    raise ValueError("unknown model %r" % (model,))


def certify(sched, net, field='gf2', residual_tol=None):
    """Certificates of every receiver.

    Raises
    ------
    InfeasibleScheduleError
        For the first receiver without a certificate.
    """
    if field not in FIELDS:
        raise ValueError("field must be one of %s, got %r" % (FIELDS, field))
    certificates = OrderedDict()
    for rx in net.users:
        F = build_constraint_matrix(sched, net, rx)
        if field == 'gf2':
            cert = feasible_gf2(F)
        else:
            cert = feasible_real(F, residual_tol=residual_tol)
        if cert is None:
            raise InfeasibleScheduleError(
                "receiver %d cannot decode its codewords over %s"
                % (rx, field), rx)
        certificates[rx] = cert
    return certificates


def cs_value(sched, net, model=None):
    """Normalized sum-rate, rate offset bound and per-user rates.

    Parameters
    ----------
    sched : CodedSchedule
        Every user must be active.

    net : Network

    model : {'deterministic', 'gaussian', 'connectivity'}, optional
        Defaults to the network's model. The Gaussian model needs real
        certificates, the others GF(2) ones.

    Returns
    -------
    value : CSValue
        ``alpha`` = k/t. ``tau`` is 0 for GF(2) schedules and
        (k/t) sum_i log2 b_i for real ones. ``rates`` maps each user to its
        per-codeword rate: n_ii levels (1 without gains) or
        log2(1 + SNR_i / b_i).
    """
    model = net.model if model is None else model
    field = _field_of(model)
    inactive = [u for u in net.users if not sched.is_active(u)]
    if inactive:
        raise ScheduleFormatError("users %r are never scheduled" % inactive)
    certificates = certify(sched, net, field)
    alpha = Fraction(sched.k, sched.t)
    rates = OrderedDict()
    if field == 'gf2':
        tau = 0.
        for u in net.users:
            rates[u] = net.gain(u, u)
    else:
        penalties = [certificates[u].penalty for u in net.users]
        tau = float(alpha) * float(np.sum(np.log2(penalties)))
        for u, b in zip(net.users, penalties):
            snr = net.gain(u, u) if net.model == 'gaussian' else 1.
            rates[u] = float(np.log2(1. + snr / b))
    return CSValue(alpha, tau, rates, certificates)


def cyclic_chain_schedule(n_users, order=None):
    """Two-slot coded schedule of an odd cyclic chain.

    Users are taken in cycle order, T at position p reaching D at position
    p + 1 (and the last reaching the first). Odd positions send in slot 1,
    even positions in slot 2, and the last position sends its codeword in
    both slots. Every receiver decodes over GF(2); over the reals the
    receiver at position 1 subtracts two slots, so its penalty is 2.

    Parameters
    ----------
    n_users : int
        Odd K. K = 1 gives the single-slot schedule.

    order : sequence of int, optional
        The users along the cycle, 1..K by default.

    Returns
    -------
    sched : CodedSchedule
        t = 2, k = 1 (t = k = 1 when K = 1).
    """
    if not isinstance(n_users, INTEGER_TYPES) or n_users < 1 or \
            n_users % 2 == 0:
        raise ValueError("cyclic_chain_schedule needs an odd number of "
                         "users, got %r" % (n_users,))
    order = list(range(1, n_users + 1)) if order is None else list(order)
    if sorted(order) != list(range(1, n_users + 1)):
        raise ValueError("order must be a permutation of 1..%d, got %r"
                         % (n_users, order))
    if n_users == 1:
        return CodedSchedule(1, 1, [[[1]]])
    assignments = {}
    for position, user in enumerate(order, 1):
        assignments[user] = [[1]] if position % 2 else [[2]]
    assignments[order[-1]] = [[1, 2]]
    return CodedSchedule(2, 1, assignments, n_users)


def cycle_order(net):
    """Users of a directed cycle in transmission order from user 1."""
    order = [1]
    while len(order) < net.n_users:
        successors = net.out_neighbors(order[-1])
        if len(successors) != 1 or successors[0] in order:
            raise ValueError("%r is not a directed cycle" % (net,))
        order.append(successors[0])
    if net.out_neighbors(order[-1]) != [1]:
        raise ValueError("%r is not a directed cycle" % (net,))
    return order


def _codeword_families(t, k):
    """Unordered families of k disjoint nonempty slot sets of 1..t."""
    families = set()
    for labels in product(range(k + 1), repeat=t):
        sets = [frozenset(s + 1 for s in range(t) if labels[s] == j)
                for j in range(1, k + 1)]
        if all(sets):
            families.add(tuple(sorted(sets, key=min)))
    return sorted(families, key=lambda f: [sorted(s) for s in f])


def _block_families(t, k):
    """Families of contiguous blocks from slot 1, sizes non-increasing."""
    families = []

    def parts(remaining, left, largest):
        if left == 0:
            if remaining == 0:
                yield ()
            return
        for size in range(min(largest, remaining - (left - 1)), 0, -1):
            for rest in parts(remaining - size, left - 1, size):
                yield (size,) + rest

    for used in range(t, k - 1, -1):
        for sizes in parts(used, k, used):
            start, family = 1, []
            for size in sizes:
                family.append(frozenset(range(start, start + size)))
                start += size
            families.append(tuple(family))
    return families


class _BudgetExceeded(Exception):
    pass


def _search_pair(net, t, k, budget):
    """Depth-first search for a GF(2)-feasible (t, k) schedule.

    Returns (assignments or None, nodes explored). Raises _BudgetExceeded
    with the node count when the budget runs out.
    """
    users = net.users
    general = _codeword_families(t, k)
    first = _block_families(t, k)
    # receiver j can be checked once all transmitters it hears are fixed
    checks = dict((u, []) for u in users)
    for rx in users:
        checks[max([rx] + net.in_neighbors(rx))].append(rx)
    cache = {}
    assignment = {}
    nodes = [0]
    all_slots = frozenset(range(1, t + 1))

    def decodable(rx):
        blocks = [rx] + net.in_neighbors(rx)
        rows = np.zeros((k * len(blocks), t), dtype=np.uint8)
        for b, u in enumerate(blocks):
            for j, slots in enumerate(assignment[u]):
                for s in slots:
                    rows[b * k + j, s - 1] = 1
        key = (rows.shape, rows.tobytes())
        if key not in cache:
            target = np.zeros((rows.shape[0], k), dtype=np.uint8)
            target[:k, :k] = np.eye(k, dtype=np.uint8)
            cache[key] = gf2_solve(rows, target) is not None
        return cache[key]

    def extend(position):
        if position == len(users):
            used = frozenset().union(*[s for f in assignment.values()
                                       for s in f])
            return used == all_slots
        nodes[0] += 1
        if nodes[0] > budget:
            raise _BudgetExceeded(nodes[0])
        user = users[position]
        for family in (first if position == 0 else general):
            assignment[user] = family
            if all(decodable(rx) for rx in checks[user]):
                if extend(position + 1):
                    return True
            del assignment[user]
        return False

    found = extend(0)
    if not found:
        return None, nodes[0]
    return dict((u, [sorted(s) for s in assignment[u]]) for u in users), \
        nodes[0]


def _pairs(t_max, k_max):
    pairs = [(t, k) for t in range(1, t_max + 1)
             for k in range(1, min(k_max, t) + 1)]
    # by value, then the shorter schedule
    return sorted(pairs, key=lambda p: (-Fraction(p[1], p[0]), p[0]))


class CodedSetSearch(BaseEstimator):
    """ Bounded exhaustive search for the best coded set schedule.

    Candidate (t, k) pairs are tried by decreasing k/t. For each pair the
    users are assigned families of k disjoint slot sets in index order,
    user 1 only in contiguous blocks, and a receiver is checked over GF(2)
    as soon as every transmitter it hears is assigned. The search starts
    from the best 1-hop MIG schedule, written as a coded schedule, and only
    pairs above its value are tried; the first feasible pair wins.

    Parameters
    ----------

    t_max : int or None, optional (default=None)
        Largest number of slots. None reads ``cs_t_max``.

    k_max : int or None, optional (default=None)
        Largest number of codewords per user. None reads ``cs_k_max``.

    node_budget : int or None, optional (default=None)
        Search nodes allowed per (t, k) pair. None reads
        ``cs_node_budget``.

    floor : Fraction or float, optional (default=0)
        Only pairs with k/t strictly above ``floor`` are searched.

    max_users : int or None, optional (default=None)
        Largest network searched. None reads ``cs_max_users``.

    allow_approx : bool or None, optional (default=None)
        Search networks above ``max_users`` with the node budget only.

    seed_mis : bool, optional (default=True)
        Start from the best 1-hop MIG schedule, so that the result is never
        below 1/chi_f of the conflict graph.

    Attributes
    ----------
    schedule_ : CodedSchedule or None
        Best schedule found, None when nothing beats ``floor``. The seed
        schedule when the search finds nothing better.

    value_ : Fraction
        Its k/t, or ``floor`` when nothing was found.

    source_ : str or None
        ``'mig-seed'`` or ``'search'``, None with ``schedule_``.

    exhaustive_ : bool
        False when the budget cut some pair short.

    n_nodes_ : int
        Search nodes explored over all pairs.

    certificates_ : dict
        GF(2) certificate of every receiver for ``schedule_``.
    """

    def __init__(self, t_max=None, k_max=None, node_budget=None, floor=0,
                 max_users=None, allow_approx=None, seed_mis=True):
        self.t_max = t_max
        self.k_max = k_max
        self.node_budget = node_budget
        self.floor = floor
        self.max_users = max_users
        self.allow_approx = allow_approx
        self.seed_mis = seed_mis

    def fit(self, net):
        """Search coded set schedules of ``net``.

        Parameters
        ----------
        net : Network

        Returns
        -------
        self : object
            Returns self.
        """
        t_max = _resolve('cs_t_max', self.t_max)
        k_max = _resolve('cs_k_max', self.k_max)
        budget = _resolve('cs_node_budget', self.node_budget)
        max_users = _resolve('cs_max_users', self.max_users)
        allow_approx = _resolve('allow_approx', self.allow_approx)
        for name, value in (('t_max', t_max), ('k_max', k_max),
                            ('node_budget', budget)):
            if not isinstance(value, INTEGER_TYPES) or value < 1:
                raise ValueError("%s must be a positive integer, got %r"
                                 % (name, value))
        floor = Fraction(self.floor)

        self.exhaustive_ = True
        if net.n_users > max_users:
            if not allow_approx:
                raise SizeCapError("coded set search on %d users exceeds "
                                   "cs_max_users=%d" % (net.n_users,
                                                        max_users))
            self.exhaustive_ = False

        self.schedule_ = None
        self.value_ = floor
        self.source_ = None
        self.certificates_ = OrderedDict()
        self.n_nodes_ = 0
        if self.seed_mis:
            mig, value = optimize_mig(net, 1, allow_approx=allow_approx)
            if value > floor:
                self.schedule_ = mig.to_coded()
                self.value_ = value
                self.source_ = 'mig-seed'
                self.certificates_ = certify(self.schedule_, net, 'gf2')
                logger.debug("seeded with the MIG schedule of value %s",
                             value)
        for t, k in _pairs(t_max, k_max):
            if Fraction(k, t) <= self.value_:
                break
            try:
                assignments, nodes = _search_pair(net, t, k, budget)
            except _BudgetExceeded as exc:
                self.n_nodes_ += exc.args[0]
                self.exhaustive_ = False
                logger.debug("budget exhausted at t=%d, k=%d", t, k)
                continue
            self.n_nodes_ += nodes
            logger.debug("t=%d, k=%d: %d nodes, feasible=%s", t, k, nodes,
                         assignments is not None)
            if assignments is not None:
                self.schedule_ = CodedSchedule(t, k, assignments,
                                               net.n_users)
                self.value_ = Fraction(k, t)
                self.source_ = 'search'
                self.certificates_ = certify(self.schedule_, net, 'gf2')
                break
        if not self.exhaustive_:
            warn("Coded set search was cut short by its caps; %s is a lower "
                 "bound of the best schedule within t_max=%d, k_max=%d."
                 % (self.value_, t_max, k_max), NonExhaustiveWarning)
        return self

    def to_dict(self):
        check_is_fitted(self, ['value_'])
        doc = OrderedDict()
        doc['value'] = '%d/%d' % (self.value_.numerator,
                                  self.value_.denominator)
        doc['exhaustive'] = self.exhaustive_
        doc['source'] = self.source_
        doc['schedule'] = (None if self.schedule_ is None
                           else self.schedule_.to_dict())
        return doc


def search_best_cs(net, t_max=None, k_max=None, floor=0, node_budget=None,
                   seed_mis=True):
    """Best GF(2)-feasible coded set schedule within the caps.

    Returns
    -------
    schedule : CodedSchedule or None

    value : Fraction
        A certified lower bound on the 1-local normalized sum-capacity,
        at least 1/chi_f of the conflict graph when ``seed_mis`` is set,
        ``floor`` when no schedule beats it.
    """
    est = CodedSetSearch(t_max, k_max, node_budget, floor,
                         seed_mis=seed_mis).fit(net)
    return est.schedule_, est.value_
