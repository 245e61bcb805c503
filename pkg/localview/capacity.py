"""Normalized sum-capacity under local view.

alpha(h) is bracketed per connected component. Lower bounds come from MIG
schedules, coded set schedules, closed forms of recognized families and
the global-view rule; upper bounds from closed forms and from outer-bound
arguments on induced sub-networks. A network's alpha is the minimum over
its components.
"""
import logging
from collections import OrderedDict, namedtuple
from fractions import Fraction
from itertools import combinations
from warnings import warn

import networkx as nx

from ._config import _resolve
from .coded_sets import (certify, cycle_order, cyclic_chain_schedule,
                         search_best_cs)
from .exceptions import (BoundsInconsistencyError, NonExhaustiveWarning,
                         SizeCapError)
from .scheduler import conflict_graph, optimize_mig
from .topology import (INTEGER_TYPES, classify, classify_connected,
                       diameter, format_rational, global_horizon)

logger = logging.getLogger(__name__)

# alpha*(1) of the sixteen 3-user classes
THREE_USER_ALPHA1 = dict(
    [(c, Fraction(1)) for c in 'a'] +
    [(c, Fraction(1, 2)) for c in 'bcdefgijk'] +
    [(c, Fraction(1, 3)) for c in 'hlmnop'])

# outer bound on alpha(2); exact for the classes valued 1 and 2/3
THREE_USER_OUTER2 = dict(
    [(c, Fraction(1)) for c in 'abcdp'] +
    [(c, Fraction(2, 3)) for c in 'efhijmn'] +
    [(c, Fraction(4, 5)) for c in 'gklo'])

ProvenanceEntry = namedtuple('ProvenanceEntry',
                             ['side', 'value', 'source', 'users'])


class AlphaResult(object):
    """ Bracket on the normalized sum-capacity for one hop count.

    Parameters
    ----------

    h : int
        Local-view hop count.

    lower, upper : Fraction
        0 <= lower <= upper <= 1.

    provenance : iterable of ProvenanceEntry
        Every bound that contributed, with the component it applies to.
    """

    def __init__(self, h, lower, upper, provenance=()):
        self.h = h
        self.lower = Fraction(lower)
        self.upper = Fraction(upper)
        self.provenance = tuple(provenance)
        if self.lower > self.upper:
            raise BoundsInconsistencyError(
                "lower bound %s exceeds upper bound %s at h=%r: %r"
                % (self.lower, self.upper, h, self.provenance))
        if self.lower < 0 or self.upper > 1:
            raise ValueError("alpha bounds must lie in [0, 1], got [%s, %s]"
                             % (self.lower, self.upper))

    @property
    def exact(self):
        return self.lower == self.upper

    def sources(self, side):
        """Sources attaining the reported bound on ``side``."""
        target = self.lower if side == 'lower' else self.upper
        return sorted(set(e.source for e in self.provenance
                          if e.side == side and e.value == target))

    def to_dict(self):
        doc = OrderedDict()
        doc['h'] = self.h
        doc['lower'] = format_rational(self.lower)
        doc['upper'] = format_rational(self.upper)
        doc['exact'] = self.exact
        doc['provenance'] = [
            OrderedDict([('side', e.side), ('value', format_rational(e.value)),
                         ('source', e.source), ('users', list(e.users))])
            for e in self.provenance]
        return doc

    def __str__(self):
        if self.exact:
            return format_rational(self.lower)
        return '[%s, %s]' % (format_rational(self.lower),
                             format_rational(self.upper))

    def __repr__(self):
        return 'AlphaResult(h=%r, lower=%s, upper=%s)' % (
            self.h, self.lower, self.upper)


def closed_form(cls, h):
    """Known alpha of a recognized component class, else None.

    Parameters
    ----------
    cls : TopologyClass

    h : int
        Only h = 1 and h = 2 have closed forms.
    """
    kind, m, d = cls.kind, cls.size, cls.d
    if kind == 'Isolated':
        return Fraction(1)
    if m == 3:
        if h == 1:
            return THREE_USER_ALPHA1[cls.letter]
        if h == 2 and THREE_USER_OUTER2[cls.letter] != Fraction(4, 5):
            return THREE_USER_OUTER2[cls.letter]
        return None
    if h == 1:
        if kind == 'ZNetwork':
            return Fraction(1, 2)
        if kind == 'FullyConnected':
            return Fraction(1, m)
        if kind in ('DToMany', 'ManyToD'):
            return Fraction(1, d + 1)
        if kind in ('Chain', 'CyclicChain'):
            return Fraction(1, 2)
        return None
    if h == 2:
        if kind in ('ZNetwork', 'FullyConnected'):
            return Fraction(1)
        if kind == 'DToMany':
            return Fraction(d, 2 * d - 1)
        if kind == 'ManyToD' and d == 1:
            return Fraction(m - 1, 2 * m - 3)
        if kind == 'Chain':
            return Fraction(2, 3)
    return None


def _reduce(basis, v):
    for bit in sorted(basis, reverse=True):
        if v >> bit & 1:
            v ^= basis[bit]
    return v


def _insert(basis, v):
    v = _reduce(basis, v)
    if v:
        basis[v.bit_length() - 1] = v


def decode_closure(net, rx):
    """Users whose signals receiver ``rx`` can reconstruct.

    Works on the binary model. Starting from the output of ``rx``, user i
    is added once X_i or the whole output of receiver i lies in the GF(2)
    span of what is known, and X_i then joins the span.

    Returns
    -------
    decoded : frozenset of int

    residual : bool
        True when the output of ``rx`` still involves undecoded users.
    """
    def output(j):
        mask = 1 << (j - 1)
        for i in net.in_neighbors(j):
            mask |= 1 << (i - 1)
        return mask

    basis = {}
    _insert(basis, output(rx))
    decoded = set()
    changed = True
    while changed:
        changed = False
        for i in net.users:
            if i in decoded:
                continue
            if _reduce(basis, 1 << (i - 1)) == 0 or \
                    _reduce(basis, output(i)) == 0:
                decoded.add(i)
                _insert(basis, 1 << (i - 1))
                changed = True
    mask = sum(1 << (i - 1) for i in decoded)
    return frozenset(decoded), bool(output(rx) & ~mask)


def _connected_subsets(net, min_size):
    """Connected induced user sets of a component, largest first."""
    g = conflict_graph(net)
    for size in range(net.n_users, min_size - 1, -1):
        for users in combinations(net.users, size):
            if nx.is_connected(g.subgraph(users)):
                yield users


def _embedding_value(cls):
    """alpha(2) outer bound carried by an embedded class."""
    if cls.size == 3:
        return THREE_USER_OUTER2[cls.letter], 'outer/three-user-class'
    if cls.kind == 'Chain':
        return Fraction(2, 3), 'outer/chain'
    if cls.kind == 'DToMany' and cls.d >= 2:
        return Fraction(cls.d, 2 * cls.d - 1), 'outer/d-to-many'
    if cls.kind == 'ManyToD' and cls.d == 1:
        return (Fraction(cls.size - 1, 2 * cls.size - 3),
                'outer/many-to-one')
    return Fraction(1), None


def _component_outer(sub, users, h):
    """Best outer bound of one connected component, original labels."""
    best, entries = Fraction(1), []
    if h == 1:
        denominator = 1
        for subset in _connected_subsets(sub, 2):
            if len(subset) <= denominator:
                break
            part = sub.subnetwork(subset)
            for rx in part.users:
                decoded, residual = decode_closure(part, rx)
                size = len(decoded) + int(residual)
                if size > denominator:
                    denominator = size
                    source = 'outer/z-pair' if size == 2 \
                        else 'outer/decode-closure'
                    entries = [ProvenanceEntry(
                        'upper', Fraction(1, size), source,
                        tuple(users[u - 1] for u in subset))]
        return Fraction(1, denominator), entries
    for subset in _connected_subsets(sub, 3):
        value, source = _embedding_value(classify_connected(
            sub.subnetwork(subset)))
        if value < best:
            best = value
            entries = [ProvenanceEntry('upper', value, source,
                                       tuple(users[u - 1] for u in subset))]
    return best, entries


def outer_bound_recipe(net, h, max_users=None, allow_approx=None):
    """Upper bound on alpha(h) for h in {1, 2}.

    At h = 1 every connected induced sub-network U and receiver j in U is
    examined on the binary model: if j can reconstruct S users and its own
    output still carries interference from others, the symmetric rate is
    at most 1/(|S| + 1), otherwise 1/|S|. At h = 2 the bound is the least
    known value of a connected induced sub-network: 2/3 for a chain,
    d/(2d - 1) for d-to-many, (m - 1)/(2m - 3) for many-to-one and the
    3-user class table. Links leaving U are dropped, which cannot lower
    the capacity.

    Parameters
    ----------
    net : Network

    h : {1, 2}

    Returns
    -------
    bound : Fraction

    provenance : list of ProvenanceEntry
    """
    if h not in (1, 2):
        raise ValueError("outer bounds exist for h=1 and h=2, got %r" % (h,))
    max_users = _resolve('max_users', max_users)
    allow_approx = _resolve('allow_approx', allow_approx)
    bound, provenance = Fraction(1), []
    for users in net.components():
        sub = net.subnetwork(users).connectivity()
        if sub.n_users > max_users:
            if not allow_approx:
                raise SizeCapError("outer bound on a component of %d users "
                                   "exceeds max_users=%d"
                                   % (sub.n_users, max_users))
            warn("Component of %d users exceeds max_users=%d; only the "
                 "single cross link bound is used." % (sub.n_users,
                                                       max_users),
                 NonExhaustiveWarning)
            value, entries = Fraction(1), []
            if h == 1 and sub.cross:
                value = Fraction(1, 2)
                entries = [ProvenanceEntry('upper', value, 'outer/z-pair',
                                           users)]
        else:
            value, entries = _component_outer(sub, users, h)
        provenance.extend(entries)
        bound = min(bound, value)
    return bound, provenance


def _component_alpha(sub, users, h, search_cs, max_users, allow_approx):
    lowers, uppers = [], [ProvenanceEntry('upper', Fraction(1), 'trivial',
                                          users)]
    cls = classify(sub)[0]

    def lower(value, source):
        lowers.append(ProvenanceEntry('lower', Fraction(value), source,
                                      users))

    if h >= global_horizon(sub):
        lower(1, 'global-view')
    for hh in (1, 2):
        value = closed_form(cls, hh)
        if value is not None:
            if hh <= h:
                lower(value, 'closed-form')
            if hh >= h:
                uppers.append(ProvenanceEntry('upper', value, 'closed-form',
                                              users))
    for hh in (1, 2):
        if hh >= h:
            _, entries = outer_bound_recipe(sub, hh, max_users, allow_approx)
            uppers.extend(ProvenanceEntry(e.side, e.value, e.source,
                                          tuple(users[u - 1]
                                                for u in e.users))
                          for e in entries)

    _, value = optimize_mig(sub, min(h, 3), max_users, allow_approx)
    lower(value, 'lower/mig-lp')

    best_upper = min(e.value for e in uppers)
    incumbent = max(e.value for e in lowers)
    if cls.kind == 'CyclicChain' and cls.size % 2 == 1:
        certify(cyclic_chain_schedule(cls.size, cycle_order(sub)), sub)
        lower(Fraction(1, 2), 'lower/cyclic-chain')
    elif search_cs and incumbent < min(best_upper, Fraction(1, 2)) and \
            sub.n_users <= _resolve('cs_max_users', None):
        schedule, value = search_best_cs(sub, floor=incumbent,
                                       seed_mis=False)
        if schedule is not None:
            lower(value, 'lower/cs-search')
    return lowers, uppers


def alpha(net, h, search_cs=True, max_users=None, allow_approx=None):
    """Bracket the normalized sum-capacity under h-local view.

    Parameters
    ----------
    net : Network
        Only its links matter.

    h : int
        Hop count, at least 1. Beyond 3 only the global-view rule and the
        3-hop schedules contribute.

    search_cs : bool, optional (default=True)
        Run the bounded coded set search when the other bounds leave a gap.

    Returns
    -------
    result : AlphaResult
    """
    if not isinstance(h, INTEGER_TYPES) or h < 1:
        raise ValueError("h must be a positive integer, got %r" % (h,))
    lower, upper = Fraction(1), Fraction(1)
    provenance = []
    for users in net.components():
        sub = net.subnetwork(users).connectivity()
        lowers, uppers = _component_alpha(sub, users, h, search_cs,
                                          max_users, allow_approx)
        provenance.extend(lowers + uppers)
        comp_lower = max(e.value for e in lowers)
        comp_upper = min(e.value for e in uppers)
        logger.debug("component %r at h=%d: [%s, %s]", users, h,
                     comp_lower, comp_upper)
        lower = min(lower, comp_lower)
        upper = min(upper, comp_upper)
    return AlphaResult(h, lower, upper, provenance)


def binary_symcap_bounds(net, max_users=None, allow_approx=None):
    """Bracket the normalized symmetric capacity of the binary model.

    The lower bound is the best coded set schedule found by the bounded
    search, seeded with the best MIG schedule; the upper bound is the
    1-hop outer bound. The bracket equals that of alpha(1).

    Returns
    -------
    result : AlphaResult
        With h = 1.
    """
    binary = net.connectivity()
    provenance = []
    _, mig = optimize_mig(binary, 1, max_users, allow_approx)
    provenance.append(ProvenanceEntry('lower', mig, 'lower/mig-lp',
                                      binary.users))
    lower = mig
    upper, entries = outer_bound_recipe(binary, 1, max_users, allow_approx)
    provenance.extend(entries)
    if lower < upper:
        schedule, value = search_best_cs(binary, floor=lower, seed_mis=False)
        if schedule is not None:
            lower = value
            provenance.append(ProvenanceEntry('lower', value,
                                              'lower/cs-search',
                                              binary.users))
    return AlphaResult(1, lower, upper, provenance)


def curve_hops(net):
    """Hop counts reported by :func:`alpha_curve`."""
    diam = diameter(net)
    return sorted(set(h for h in (1, 2, 3, diam) if h <= diam))


def alpha_curve(net, search_cs=True, max_users=None, allow_approx=None):
    """alpha at h = 1, 2, 3 and at the diameter (when distinct).

    Lower bounds are carried forward so that they never decrease with h.

    Returns
    -------
    curve : list of (int, AlphaResult)
    """
    curve = []
    previous = None
    for h in curve_hops(net):
        result = alpha(net, h, search_cs, max_users, allow_approx)
        if previous is not None and previous.lower > result.lower:
            result = AlphaResult(h, previous.lower, result.upper,
                                 result.provenance + tuple(
                                     e for e in previous.provenance
                                     if e.side == 'lower'))
        curve.append((h, result))
        previous = result
    return curve
