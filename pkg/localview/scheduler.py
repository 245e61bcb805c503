"""Maximal independent graph scheduling and conflict-graph colorings.

Under h-local view a set of users is an *independent subgraph* when the
sub-network it induces can be operated at full normalized sum-rate. A
schedule time-shares independent subgraphs; if user j is active in d of t
slots for every j, the schedule achieves the normalized sum-rate d/t.
"""
import logging
from collections import OrderedDict, namedtuple
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from operator import or_
from warnings import warn

import numpy as np
import networkx as nx
from scipy.optimize import linprog
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._config import _resolve
from .exact_lp import max_min_coverage
from .exceptions import (NonExhaustiveWarning, SizeCapError,
                         SufficientOnlyWarning)
from .schedule import ScheduleMultiset
from .topology import INTEGER_TYPES, classify, global_horizon

logger = logging.getLogger(__name__)

HOPS = (1, 2, 3)

# supports examined when breaking LP ties
TIE_BREAK_BUDGET = 2000


def _lcm(a, b):
    return a * b // gcd(a, b)


def conflict_graph(net):
    """Undirected graph on users, {i, j} an edge iff i reaches D_j or j
    reaches D_i."""
    g = nx.Graph()
    g.add_nodes_from(net.users)
    g.add_edges_from(net.cross)
    return g


def _component_verdict(sub, cls, h):
    """Whether one component passes the h-test, and why."""
    kind = cls.kind
    if kind == 'Isolated':
        return True, 'isolated'
    if h == 1:
        return False, 'cross link'
    one_to_many = kind == 'ZNetwork' or (kind == 'DToMany' and cls.d == 1)
    if kind == 'FullyConnected':
        return True, 'fully connected'
    if one_to_many:
        return True, 'one-to-many'
    if h == 2:
        return False, str(cls)
    if kind in ('DToMany', 'ManyToD'):
        return True, str(cls)
    if cls.size == 3 and cls.letter != 'g':
        return True, 'three-user class (%s)' % cls.letter
    if global_horizon(sub) <= 3:
        return True, 'global view'
    return False, str(cls)


def is_independent_subgraph(users, net, h, return_reasons=False):
    """Test whether ``users`` form an independent subgraph for view h.

    Parameters
    ----------
    users : iterable of int
        The candidate user set S; links to users outside S are ignored.

    net : Network

    h : {1, 2, 3}
        At h=1 the induced sub-network must have no cross link. At h=2 each
        induced component must be one-to-many or fully connected. At h=3
        each component must be d-to-many, many-to-d, a 3-user class other
        than the open one (g), or small enough that 3-local view is global;
        this test is sufficient only.

    return_reasons : bool, optional (default=False)
        If True also return one reason string per induced component, and a
        final ``'sufficient-only'`` marker at h=3.

    Returns
    -------
    independent : bool

    reasons : list of str
        Only when ``return_reasons`` is True.
    """
    if h not in HOPS:
        raise ValueError("h must be 1, 2 or 3, got %r" % (h,))
    users = sorted(set(users))
    sub = net.subnetwork(users)
    verdict = True
    reasons = []
    for cls in classify(sub):
        ok, why = _component_verdict(sub.subnetwork(cls.users), cls, h)
        verdict = verdict and ok
        original = [users[u - 1] for u in cls.users]
        reasons.append('%s: %s' % (original, why))
        if not ok and not return_reasons:
            return False
    if h == 3:
        reasons.append('sufficient-only')
    if return_reasons:
        return verdict, reasons
    return verdict


def _check_cap(m, max_users, allow_approx, what):
    if m <= max_users:
        return True
    if not allow_approx:
        raise SizeCapError("%s on a component of %d users exceeds the cap "
                           "max_users=%d; enable allow_approx for a greedy "
                           "answer" % (what, m, max_users))
    warn("Component of %d users exceeds max_users=%d: %s falls back to a "
         "greedy enumeration and may be suboptimal."
         % (m, max_users, what), NonExhaustiveWarning)
    return False


def _greedy_subgraphs(sub, h):
    found = set()
    for seed in sub.users:
        chosen = [seed]
        for u in sorted(sub.users, reverse=True):
            if u not in chosen and \
                    is_independent_subgraph(chosen + [u], sub, h):
                chosen.append(u)
        found.add(tuple(sorted(chosen)))
    return sorted(found)


def _maximal_sets(sets):
    """Inclusion-maximal members of a family of bitmasks."""
    kept = []
    for s in sorted(set(sets), key=lambda m: -bin(m).count('1')):
        if not any(s & k == s for k in kept):
            kept.append(s)
    return kept


def _to_users(mask, m):
    return tuple(u for u in range(1, m + 1) if mask >> (u - 1) & 1)


def maximal_independent_subgraphs(net, h, max_users=None,
                                  allow_approx=None):
    """Inclusion-maximal independent subgraphs of a connected network.

    Parameters
    ----------
    net : Network
        Normally one connected component.

    h : {1, 2, 3}

    max_users : int, optional
        Exhaustive enumeration cap; defaults to the ``max_users`` setting.

    allow_approx : bool, optional
        Above the cap, use the greedy family instead of raising.

    Returns
    -------
    subgraphs : list of tuples of int
        Sorted lexicographically.

    exhaustive : bool
    """
    max_users = _resolve('max_users', max_users)
    allow_approx = _resolve('allow_approx', allow_approx)
    m = net.n_users
    if not _check_cap(m, max_users, allow_approx,
                      'independent subgraph enumeration'):
        return _greedy_subgraphs(net, h), False
    if h == 1:
        cliques = nx.find_cliques(nx.complement(conflict_graph(net)))
        return sorted(tuple(sorted(c)) for c in cliques), True
    independent = []
    for mask in range(1, 1 << m):
        if is_independent_subgraph(_to_users(mask, m), net, h):
            independent.append(mask)
    logger.debug("%d independent subgraphs among %d subsets (h=%d)",
                 len(independent), (1 << m) - 1, h)
    return sorted(_to_users(s, m) for s in _maximal_sets(independent)), True


def _sparsest_weights(columns, n_items, value, weights,
                      budget=TIE_BREAK_BUDGET):
    """Optimal weights on the fewest columns.

    Supports are tried by size, then in lexicographic order of column
    indices; the first one reaching ``value`` wins. Past ``budget``
    candidate supports the given ``weights`` are kept.
    """
    largest = sum(1 for w in weights if w > 0)
    masks = [sum(1 << j for j in col) for col in columns]
    full = (1 << n_items) - 1
    tried = 0
    for size in range(1, largest + 1):
        for support in combinations(range(len(columns)), size):
            tried += 1
            if tried > budget:
                logger.debug("tie break stopped after %d supports", budget)
                return weights
            if reduce(or_, [masks[i] for i in support]) != full:
                continue
            found, sub_weights = max_min_coverage(
                [columns[i] for i in support], n_items)
            if found == value:
                sparse = [Fraction(0)] * len(columns)
                for i, w in zip(support, sub_weights):
                    sparse[i] = w
                return sparse
    return weights


def _schedule_from_weights(subgraphs, weights):
    t = reduce(_lcm, [w.denominator for w in weights if w > 0], 1)
    slots = []
    for subgraph, w in zip(subgraphs, weights):
        slots.extend([subgraph] * int(w * t))
    return slots


class MIGScheduler(BaseEstimator):
    """ Maximal independent graph scheduler.

    Enumerates the maximal independent subgraphs of every connected
    component, solves the fractional covering program exactly over the
    rationals and turns the optimal weights into an integer multiset of
    slots. Among optimal weightings the one on the fewest subgraphs is
    kept, ties going to the lexicographically first set of subgraphs.
    Components run in parallel; the network-wide schedule repeats every
    component schedule up to a common length.

    Parameters
    ----------

    hops : int, optional (default=1)
        Local-view hop count h, one of 1, 2, 3.

    max_users : int or None, optional (default=None)
        Exhaustive enumeration cap per component. None reads the
        ``max_users`` setting.

    allow_approx : bool or None, optional (default=None)
        Above the cap, fall back to a greedy family of subgraphs instead of
        raising. None reads the ``allow_approx`` setting.

    Attributes
    ----------
    schedule_ : ScheduleMultiset
        The optimal schedule over the whole network.

    value_ : Fraction
        Its normalized sum-rate d/t.

    subgraphs_ : list of tuples
        The maximal independent subgraphs considered, original labels.

    weights_ : dict
        Optimal LP weight of each subgraph with positive weight.

    component_values_ : list of (tuple, Fraction)
        Value of each component's schedule.

    exhaustive_ : bool
        False when some component used the greedy family.
    """

    def __init__(self, hops=1, max_users=None, allow_approx=None):
        self.hops = hops
        self.max_users = max_users
        self.allow_approx = allow_approx

    def fit(self, net):
        """Compute the optimal MIG schedule of ``net``.

        Parameters
        ----------
        net : Network

        Returns
        -------
        self : object
            Returns self.
        """
        if self.hops not in HOPS:
            raise ValueError("hops must be 1, 2 or 3, got %r" % (self.hops,))
        if self.hops == 3:
            warn("3-hop independence is tested by a sufficient condition; "
                 "the schedule value is a lower bound.", SufficientOnlyWarning)

        self.subgraphs_ = []
        self.weights_ = OrderedDict()
        self.component_values_ = []
        self.exhaustive_ = True
        schedules = []
        for users in net.components():
            sub = net.subnetwork(users)
            subgraphs, exhaustive = maximal_independent_subgraphs(
                sub, self.hops, self.max_users, self.allow_approx)
            self.exhaustive_ = self.exhaustive_ and exhaustive
            columns = [[u - 1 for u in s] for s in subgraphs]
            value, weights = max_min_coverage(columns, sub.n_users)
            weights = _sparsest_weights(columns, sub.n_users, value, weights)
            original = [tuple(users[u - 1] for u in s) for s in subgraphs]
            self.subgraphs_.extend(original)
            for subgraph, w in zip(original, weights):
                if w > 0:
                    self.weights_[subgraph] = w
            slots = _schedule_from_weights(original, weights)
            schedules.append(slots)
            self.component_values_.append((users, value))

        t = reduce(_lcm, [len(s) for s in schedules], 1)
        merged = []
        for slot in range(t):
            active = []
            for slots in schedules:
                active.extend(slots[slot % len(slots)])
            merged.append(active)
        self.schedule_ = ScheduleMultiset(merged, net.n_users, self.hops)
        self.value_ = self.schedule_.value
        expected = min(v for _, v in self.component_values_)
        if self.value_ != expected:
            raise AssertionError("schedule value %s differs from the LP "
                                 "optimum %s" % (self.value_, expected))
        return self

    def to_dict(self):
        check_is_fitted(self, ['schedule_', 'value_'])
        doc = self.schedule_.to_dict()
        doc['exhaustive'] = self.exhaustive_
        return doc


def optimize_mig(net, h, max_users=None, allow_approx=None):
    """Best MIG schedule of ``net`` under h-local view.

    Returns
    -------
    schedule : ScheduleMultiset

    value : Fraction
        Equals the optimum of the fractional covering program.
    """
    est = MIGScheduler(h, max_users, allow_approx).fit(net)
    return est.schedule_, est.value_


ColoringResult = namedtuple('ColoringResult',
                            ['chi_f', 'xi', 'alpha_mis', 'best_k', 'exact'])


def _k_fold_chromatic(masks, n, k, lower):
    """Least t such that t independent sets cover every vertex k times."""
    memo = {}
    largest = max(bin(s).count('1') for s in masks)

    def feasible(t, demand):
        top = max(demand)
        if top == 0:
            return True
        if top > t or sum(demand) > t * largest:
            return False
        key = (t, demand)
        if key in memo:
            return memo[key]
        v = demand.index(top)
        answer = False
        for s in masks:
            if s >> v & 1:
                nxt = tuple(max(dv - (s >> u & 1), 0)
                            for u, dv in enumerate(demand))
                if feasible(t - 1, nxt):
                    answer = True
                    break
        memo[key] = answer
        return answer

    t = max(lower, k)
    while not feasible(t, (k,) * n):
        t += 1
    return t


def fractional_coloring(g, k_max=5, max_users=None, allow_approx=None):
    """Fractional and k-fold chromatic numbers of a conflict graph.

    Parameters
    ----------
    g : networkx.Graph

    k_max : int, optional (default=5)
        Largest k for which xi_k is computed.

    Returns
    -------
    result : ColoringResult
        ``chi_f`` (Fraction), ``xi`` (dict k -> xi_k), ``alpha_mis`` =
        1/chi_f, ``best_k`` the least k <= k_max with k/xi_k = alpha_mis
        (None if no such k), and ``exact``.
    """
    if not isinstance(k_max, INTEGER_TYPES) or k_max < 1:
        raise ValueError("k_max must be a positive integer, got %r"
                         % (k_max,))
    max_users = _resolve('max_users', max_users)
    allow_approx = _resolve('allow_approx', allow_approx)
    nodes = sorted(g.nodes())
    n = len(nodes)
    if n == 0:
        return ColoringResult(Fraction(0), OrderedDict(), Fraction(1),
                              None, True)
    index = dict((v, i) for i, v in enumerate(nodes))

    if not _check_cap(n, max_users, allow_approx, 'fractional coloring'):
        # float LP over a greedy family of maximal independent sets
        family = set()
        for seed in nodes:
            mis = nx.maximal_independent_set(g, [seed], seed=0)
            family.add(frozenset(index[v] for v in mis))
        family = sorted(family, key=sorted)
        A = np.array([[-float(v in s) for s in family] for v in range(n)])
        res = linprog(np.ones(len(family)), A_ub=A, b_ub=-np.ones(n),
                      bounds=(0, None), method='highs')
        chi_f = Fraction(res.fun).limit_denominator(1000)
        return ColoringResult(chi_f, OrderedDict(), 1 / chi_f, None, False)

    complement = nx.complement(g)
    masks = sorted(sum(1 << index[v] for v in clique)
                   for clique in nx.find_cliques(complement))
    columns = [[i for i in range(n) if s >> i & 1] for s in masks]
    value, _ = max_min_coverage(columns, n)
    chi_f = 1 / value

    xi = OrderedDict()
    best_k = None
    for k in range(1, k_max + 1):
        lower = -((-k * chi_f.numerator) // chi_f.denominator)
        xi[k] = _k_fold_chromatic(masks, n, k, lower)
        if best_k is None and Fraction(k, xi[k]) == value:
            best_k = k
    return ColoringResult(chi_f, xi, value, best_k, True)


def mis_optimality_predicate(g):
    """True iff some k-fold coloring uses at most 2k colors.

    Equivalently the fractional chromatic number is at most 2, which is
    checked exactly.
    """
    return fractional_coloring(g, k_max=1).chi_f <= 2
