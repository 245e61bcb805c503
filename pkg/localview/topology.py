"""Interference network topologies, their classification and local views.

A K-user single-hop interference network has transmitters T_1..T_K and
receivers D_1..D_K. Every pair (T_i, D_i) shares a direct link; a cross
link (i, j) with i != j means T_i is heard at D_j. Users are numbered from
1 throughout the package.
"""
import json
import numbers
from collections import OrderedDict, namedtuple
from fractions import Fraction
from itertools import permutations, product

import numpy as np
import networkx as nx
from sklearn.utils import check_random_state

from .exceptions import NetworkFormatError

INTEGER_TYPES = (numbers.Integral, np.integer)
REAL_TYPES = (numbers.Real, np.floating, np.integer)
MODELS = ('deterministic', 'gaussian', 'connectivity')

_DOCUMENT_KEYS = frozenset(['users', 'model', 'cross', 'direct'])
_CROSS_KEYS = frozenset(['tx', 'rx', 'gain'])
_DIRECT_KEYS = frozenset(['user', 'gain'])

# bit order of a 3-user cross-link pattern
PAIR_ORDER = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))


class Network(object):
    """An immutable single-hop interference network.

    Parameters
    ----------

    n_users : int
        The number of user pairs K.

    cross : iterable of (int, int)
        Directed cross links (i, j), i != j, meaning T_i reaches D_j.

    direct_gains : sequence of numbers, optional
        Gain of each direct link (n_ii or |h_ii|^2), indexed by user.
        Required unless ``model == 'connectivity'``.

    cross_gains : dict, optional
        Gain of each cross link keyed by (i, j). Required unless
        ``model == 'connectivity'``; must cover exactly ``cross``.

    model : {'connectivity', 'deterministic', 'gaussian'}
        Deterministic gains are nonnegative integers, Gaussian gains
        nonnegative reals. A connectivity-only network carries no gains.
    """

    def __init__(self, n_users, cross=(), direct_gains=None,
                 cross_gains=None, model='connectivity'):
        if not isinstance(n_users, INTEGER_TYPES) or n_users < 1:
            raise NetworkFormatError("n_users must be a positive integer, "
                                     "got %r" % (n_users,))
        if model not in MODELS:
            raise NetworkFormatError("model must be one of %s, got %r"
                                     % (MODELS, model))
        n_users = int(n_users)
        edges = set()
        for edge in cross:
            try:
                i, j = edge
            except (TypeError, ValueError):
                raise NetworkFormatError("cross link %r is not a pair"
                                         % (edge,))
            if not (isinstance(i, INTEGER_TYPES)
                    and isinstance(j, INTEGER_TYPES)):
                raise NetworkFormatError("cross link %r has non-integer "
                                         "indices" % (edge,))
            if not (1 <= i <= n_users and 1 <= j <= n_users):
                raise NetworkFormatError("cross link %r refers to a user "
                                         "outside 1..%d" % (edge, n_users))
            if i == j:
                raise NetworkFormatError("cross link %r is a direct link"
                                         % (edge,))
            edges.add((int(i), int(j)))

        if model == 'connectivity':
            if direct_gains is not None or cross_gains is not None:
                raise NetworkFormatError("a connectivity-only network "
                                         "carries no gains")
            self._direct_gains = None
            self._cross_gains = None
        else:
            if direct_gains is None or cross_gains is None:
                raise NetworkFormatError("model %r requires direct and cross"
                                         " gains" % model)
            direct_gains = tuple(direct_gains)
            if len(direct_gains) != n_users:
                raise NetworkFormatError("expected %d direct gains, got %d"
                                         % (n_users, len(direct_gains)))
            cross_gains = dict(cross_gains)
            undeclared = set(cross_gains) - edges
            if undeclared:
                raise NetworkFormatError("gain given on undeclared edge %r"
                                         % (sorted(undeclared)[0],))
            missing = edges - set(cross_gains)
            if missing:
                raise NetworkFormatError("missing gain on edge %r"
                                         % (sorted(missing)[0],))
            check = _check_integer_gain if model == 'deterministic' \
                else _check_real_gain
            self._direct_gains = tuple(check(g) for g in direct_gains)
            self._cross_gains = tuple(sorted(
                (e, check(g)) for e, g in cross_gains.items()))

        self._gain_lookup = dict(self._cross_gains or ())
        self._n_users = n_users
        self._cross = frozenset(edges)
        self._model = model

    @property
    def n_users(self):
        return self._n_users

    @property
    def cross(self):
        return self._cross

    @property
    def model(self):
        return self._model

    @property
    def direct_gains(self):
        return self._direct_gains

    @property
    def cross_gains(self):
        if self._cross_gains is None:
            return None
        return dict(self._cross_gains)

    @property
    def users(self):
        return tuple(range(1, self._n_users + 1))

    def gain(self, tx, rx):
        """Gain of the link T_tx -> D_rx, 0 when the link is absent.

        A connectivity-only network reports gain 1 on every declared link,
        which is the binary model.
        """
        if tx != rx and (tx, rx) not in self._cross:
            return 0
        if self._model == 'connectivity':
            return 1
        if tx == rx:
            return self._direct_gains[tx - 1]
        return self._gain_lookup[(tx, rx)]

    def gain_matrix(self):
        """Array G with G[k - 1, j - 1] the gain from T_k to D_j."""
        dtype = float if self._model == 'gaussian' else int
        G = np.zeros((self._n_users, self._n_users), dtype=dtype)
        for tx, rx in self.edges():
            G[tx - 1, rx - 1] = self.gain(tx, rx)
        return G

    @property
    def q(self):
        """Number of signal levels, the largest deterministic gain."""
        if self._model != 'deterministic':
            raise ValueError("q is defined for deterministic networks only,"
                             " got model %r" % self._model)
        return int(self.gain_matrix().max())

    def edges(self):
        """All links, direct ones included, sorted."""
        direct = [(i, i) for i in self.users]
        return sorted(direct + list(self._cross))

    def in_neighbors(self, rx):
        """Transmitters other than T_rx heard at D_rx."""
        return sorted(i for i, j in self._cross if j == rx)

    def out_neighbors(self, tx):
        """Receivers other than D_tx reached by T_tx."""
        return sorted(j for i, j in self._cross if i == tx)

    def bipartite_graph(self):
        """Undirected graph on ('tx', i) and ('rx', j) nodes."""
        g = nx.Graph()
        for i in self.users:
            g.add_node(('tx', i))
            g.add_node(('rx', i))
        g.add_edges_from((('tx', i), ('rx', j)) for i, j in self.edges())
        return g

    def components(self):
        """User sets of the connected components, ordered by least user."""
        comps = []
        for nodes in nx.connected_components(self.bipartite_graph()):
            comps.append(tuple(sorted(set(i for _, i in nodes))))
        return sorted(comps)

    def subnetwork(self, users):
        """Induced sub-network on ``users``, relabeled 1..m in order.

        Links leaving the user set are zeroed out.
        """
        users = sorted(set(users))
        if not users:
            raise ValueError("a sub-network needs at least one user")
        index = dict((u, k + 1) for k, u in enumerate(users))
        cross = [(index[i], index[j]) for i, j in self._cross
                 if i in index and j in index]
        if self._model == 'connectivity':
            return Network(len(users), cross)
        direct = [self._direct_gains[u - 1] for u in users]
        gains = dict(((index[i], index[j]), g)
                     for (i, j), g in self._cross_gains
                     if i in index and j in index)
        return Network(len(users), cross, direct, gains, self._model)

    def relabel(self, perm):
        """Copy with user i renamed ``perm[i - 1]``."""
        perm = [int(p) for p in perm]
        if sorted(perm) != list(self.users):
            raise ValueError("perm must be a permutation of 1..%d, got %r"
                             % (self._n_users, perm))
        cross = [(perm[i - 1], perm[j - 1]) for i, j in self._cross]
        if self._model == 'connectivity':
            return Network(self._n_users, cross)
        direct = [0] * self._n_users
        for i in self.users:
            direct[perm[i - 1] - 1] = self._direct_gains[i - 1]
        gains = dict(((perm[i - 1], perm[j - 1]), g)
                     for (i, j), g in self._cross_gains)
        return Network(self._n_users, cross, direct, gains, self._model)

    def connectivity(self):
        """The gain-free network with the same links."""
        return Network(self._n_users, self._cross)

    def binary(self):
        """The deterministic network with every declared link at gain 1."""
        return Network(self._n_users, self._cross, [1] * self._n_users,
                       dict((e, 1) for e in self._cross), 'deterministic')

    def with_random_gains(self, random_state=None, high=5):
        """Deterministic copy with gains drawn uniformly in 0..high."""
        rng = check_random_state(random_state)
        direct = rng.randint(0, high + 1, size=self._n_users)
        gains = dict((e, int(rng.randint(0, high + 1)))
                     for e in sorted(self._cross))
        return Network(self._n_users, self._cross,
                       [int(g) for g in direct], gains, 'deterministic')

    def to_dict(self):
        doc = OrderedDict()
        doc['users'] = self._n_users
        doc['model'] = self._model
        cross = []
        for i, j in sorted(self._cross):
            link = OrderedDict([('tx', i), ('rx', j)])
            if self._model != 'connectivity':
                link['gain'] = self.gain(i, j)
            cross.append(link)
        doc['cross'] = cross
        if self._model != 'connectivity':
            doc['direct'] = [OrderedDict([('user', i), ('gain', g)])
                             for i, g in zip(self.users, self._direct_gains)]
        return doc

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def _key(self):
        return (self._n_users, tuple(sorted(self._cross)), self._model,
                self._direct_gains, self._cross_gains)

    def __eq__(self, other):
        return isinstance(other, Network) and self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return 'Network(n_users=%d, cross=%r, model=%r)' % (
            self._n_users, sorted(self._cross), self._model)


def _check_integer_gain(gain):
    if isinstance(gain, bool) or not isinstance(gain, INTEGER_TYPES):
        raise NetworkFormatError("deterministic gains must be integers, "
                                 "got %r" % (gain,))
    if gain < 0:
        raise NetworkFormatError("gains must be nonnegative, got %r"
                                 % (gain,))
    return int(gain)


def _check_real_gain(gain):
    if isinstance(gain, bool) or not isinstance(gain, REAL_TYPES):
        raise NetworkFormatError("gaussian gains must be real numbers, "
                                 "got %r" % (gain,))
    if not np.isfinite(gain) or gain < 0:
        raise NetworkFormatError("gains must be finite and nonnegative, "
                                 "got %r" % (gain,))
    return float(gain)


def parse_network(text):
    """Build a Network from a JSON topology document.

    The document reads ``{"users": K, "model": ..., "cross": [{"tx": i,
    "rx": j, "gain": g}, ...], "direct": [{"user": i, "gain": g}, ...]}``
    with 1-based indices. Gains are required unless the model is
    ``"connectivity"``, and unknown keys are rejected.

    Parameters
    ----------
    text : str or dict
        The document, as text or already decoded.

    Returns
    -------
    net : Network
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except ValueError as exc:
            raise NetworkFormatError("invalid JSON: %s" % exc)
    else:
        doc = text
    if not isinstance(doc, dict):
        raise NetworkFormatError("topology document must be an object")
    unknown = set(doc) - _DOCUMENT_KEYS
    if unknown:
        raise NetworkFormatError("unknown keys %r" % sorted(unknown))
    if 'users' not in doc:
        raise NetworkFormatError("missing key 'users'")
    model = doc.get('model', 'connectivity')
    n_users = doc['users']
    with_gains = model != 'connectivity'

    cross, cross_gains = [], {}
    for link in doc.get('cross', []):
        if not isinstance(link, dict):
            raise NetworkFormatError("cross entry %r is not an object"
                                     % (link,))
        unknown = set(link) - _CROSS_KEYS
        if unknown or 'tx' not in link or 'rx' not in link:
            raise NetworkFormatError("malformed cross entry %r" % (link,))
        edge = (link['tx'], link['rx'])
        if edge in cross_gains or edge in cross:
            raise NetworkFormatError("duplicate cross entry %r" % (edge,))
        cross.append(edge)
        if with_gains:
            if 'gain' not in link:
                raise NetworkFormatError("cross entry %r needs a gain"
                                         % (link,))
            cross_gains[edge] = link['gain']
        elif 'gain' in link:
            raise NetworkFormatError("gain given in a connectivity-only "
                                     "document: %r" % (link,))

    direct = None
    if with_gains:
        entries = doc.get('direct')
        if entries is None:
            raise NetworkFormatError("model %r requires 'direct' gains"
                                     % model)
        direct = {}
        for entry in entries:
            if (not isinstance(entry, dict) or set(entry) != _DIRECT_KEYS):
                raise NetworkFormatError("malformed direct entry %r"
                                         % (entry,))
            if entry['user'] in direct:
                raise NetworkFormatError("duplicate direct entry %r"
                                         % (entry,))
            direct[entry['user']] = entry['gain']
        if not isinstance(n_users, INTEGER_TYPES) or \
                sorted(direct) != list(range(1, n_users + 1)):
            raise NetworkFormatError("direct gains must cover users 1..%r"
                                     % (n_users,))
        direct = [direct[i] for i in range(1, n_users + 1)]
        return Network(n_users, cross, direct, cross_gains, model)
    if 'direct' in doc:
        raise NetworkFormatError("direct gains given in a connectivity-only"
                                 " document")
    return Network(n_users, cross, model=model)


def load_network(path):
    """Read and parse a UTF-8 JSON topology document from ``path``."""
    with open(path, 'rb') as f:
        text = f.read().decode('utf-8')
    return parse_network(text)


class TopologyClass(namedtuple('TopologyClass',
                               ['kind', 'users', 'size', 'd', 'index'])):
    """Family of one connected component.

    ``kind`` is one of 'Isolated', 'ZNetwork', 'FullyConnected',
    'DToMany', 'ManyToD', 'CyclicChain', 'Chain', 'ThreeUserClass' and
    'Other'. ``users`` lists the component's users in the original labels,
    ``d`` is set for the d-to-many families and ``index`` for 3-user
    classes.
    """
    __slots__ = ()

    def __str__(self):
        if self.kind in ('Isolated', 'ZNetwork'):
            return self.kind
        if self.kind in ('DToMany', 'ManyToD'):
            return '%s(%d,%d)' % (self.kind, self.d, self.size)
        if self.kind == 'ThreeUserClass':
            return 'ThreeUserClass(%d)' % self.index
        return '%s(%d)' % (self.kind, self.size)

    @property
    def letter(self):
        """Letter a..p of a 3-user component, None otherwise."""
        if self.size != 3:
            return None
        return _LETTER_BY_INDEX[self.index]


def classify(net):
    """Classify every connected component of ``net``.

    Components are matched against the families in the fixed priority
    Isolated, FullyConnected, ZNetwork, DToMany, ManyToD, CyclicChain,
    Chain, ThreeUserClass, Other. Only connectivity matters.

    Parameters
    ----------
    net : Network

    Returns
    -------
    classes : list of TopologyClass
        One entry per component, ordered by the least user.
    """
    return [_classify_component(net, users) for users in net.components()]


def classify_connected(net):
    """Class of a network expected to be connected, else None."""
    classes = classify(net)
    if len(classes) != 1:
        return None
    return classes[0]


def _classify_component(net, users):
    sub = net.subnetwork(users)
    m = sub.n_users
    edges = sub.cross
    index = None
    if m == 3:
        index = canonical_three_user(sub)[0]

    def make(kind, d=None):
        return TopologyClass(kind, tuple(users), m, d, index)

    if m == 1:
        return make('Isolated')
    if len(edges) == m * (m - 1):
        return make('FullyConnected')
    if m == 2:
        return make('ZNetwork')
    senders = set(i for i, _ in edges)
    if edges == set((i, j) for i in senders for j in sub.users if j != i):
        return make('DToMany', len(senders))
    receivers = set(j for _, j in edges)
    if edges == set((i, j) for j in receivers for i in sub.users if i != j):
        return make('ManyToD', len(receivers))
    out_deg = dict((i, len(sub.out_neighbors(i))) for i in sub.users)
    in_deg = dict((j, len(sub.in_neighbors(j))) for j in sub.users)
    if max(out_deg.values()) <= 1 and max(in_deg.values()) <= 1:
        # a connected component with in/out degrees <= 1 is a path or cycle
        if len(edges) == m:
            return make('CyclicChain')
        if len(edges) == m - 1:
            return make('Chain')
    if m == 3:
        return make('ThreeUserClass')
    return make('Other')


def _pattern(edges, perm=(1, 2, 3)):
    relabeled = set((perm[i - 1], perm[j - 1]) for i, j in edges)
    return tuple(int(p in relabeled) for p in PAIR_ORDER)


def _canonical_pattern(edges):
    return min(_pattern(edges, perm) for perm in permutations((1, 2, 3)))


def _edges_of(pattern):
    return frozenset(p for p, bit in zip(PAIR_ORDER, pattern) if bit)


_CANONICAL_PATTERNS = sorted(set(_canonical_pattern(_edges_of(bits))
                                 for bits in product((0, 1), repeat=6)))


def canonical_three_user(net):
    """Orbit of a 3-user network under relabeling of the user pairs.

    Parameters
    ----------
    net : Network with three users

    Returns
    -------
    index : int
        Rank (0..15) of the orbit's canonical pattern, which is the
        lexicographically least 6-bit pattern over all relabelings.

    edges : frozenset of (int, int)
        Cross links of the canonical representative.
    """
    if net.n_users != 3:
        raise ValueError("canonical_three_user needs a 3-user network, "
                         "got %d users" % net.n_users)
    canonical = _canonical_pattern(net.cross)
    return _CANONICAL_PATTERNS.index(canonical), _edges_of(canonical)


def three_user_orbits():
    """All 16 orbits as ``(index, canonical edges, orbit size)``."""
    sizes = dict((p, 0) for p in _CANONICAL_PATTERNS)
    for bits in product((0, 1), repeat=6):
        sizes[_canonical_pattern(_edges_of(bits))] += 1
    return [(k, _edges_of(p), sizes[p])
            for k, p in enumerate(_CANONICAL_PATTERNS)]


THREE_USER_LETTERS = OrderedDict([
    ('a', frozenset()),
    ('b', frozenset([(1, 2)])),
    ('c', frozenset([(1, 2), (2, 1)])),
    ('d', frozenset([(1, 2), (1, 3)])),
    ('e', frozenset([(1, 2), (3, 2)])),
    ('f', frozenset([(1, 2), (2, 3)])),
    ('g', frozenset([(1, 2), (2, 1), (2, 3)])),
    ('h', frozenset([(1, 2), (1, 3), (2, 3)])),
    ('i', frozenset([(1, 2), (2, 3), (3, 1)])),
    ('j', frozenset([(1, 2), (2, 1), (3, 1)])),
    ('k', frozenset([(1, 3), (3, 1), (2, 3), (3, 2)])),
    ('l', frozenset([(1, 2), (1, 3), (2, 3), (3, 2)])),
    ('m', frozenset([(2, 1), (3, 2), (1, 3), (3, 1)])),
    ('n', frozenset([(2, 1), (3, 1), (2, 3), (3, 2)])),
    ('o', frozenset([(1, 2), (1, 3), (2, 1), (2, 3), (3, 2)])),
    ('p', frozenset(PAIR_ORDER)),
])

_LETTER_BY_INDEX = dict(
    (_CANONICAL_PATTERNS.index(_canonical_pattern(edges)), letter)
    for letter, edges in THREE_USER_LETTERS.items())


def three_user_letter(net):
    """Letter a..p of a 3-user network."""
    return _LETTER_BY_INDEX[canonical_three_user(net)[0]]


LocalView = namedtuple('LocalView', ['node', 'h', 'known_edges', 'gains'])


def _check_node(net, node):
    try:
        role, index = node
    except (TypeError, ValueError):
        raise ValueError("node must be a (role, index) pair, got %r"
                         % (node,))
    if role not in ('tx', 'rx') or not 1 <= index <= net.n_users:
        raise ValueError("unknown node %r" % (node,))
    return role, int(index)


def edge_hop_distances(net, node):
    """Hop distance of every link as seen from ``node``.

    The distance of a link is one plus the least number of links traversed
    in the undirected bipartite graph from ``node`` to either endpoint.

    Parameters
    ----------
    net : Network

    node : ('tx' | 'rx', int)

    Returns
    -------
    distances : dict
        Maps (tx, rx) links to positive integers. Links in other
        components are absent.
    """
    node = _check_node(net, node)
    lengths = nx.single_source_shortest_path_length(net.bipartite_graph(),
                                                    node)
    distances = {}
    for tx, rx in net.edges():
        reach = [lengths[v] for v in (('tx', tx), ('rx', rx)) if v in lengths]
        if reach:
            distances[(tx, rx)] = 1 + min(reach)
    return distances


def local_view(net, node, h):
    """Links (and gains) known at ``node`` under h-local view.

    A transmitter knows links within h hops, a receiver within h + 1.
    """
    if not isinstance(h, INTEGER_TYPES) or h < 1:
        raise ValueError("h must be a positive integer, got %r" % (h,))
    role, index = _check_node(net, node)
    limit = h if role == 'tx' else h + 1
    known = frozenset(e for e, d in edge_hop_distances(net, node).items()
                      if d <= limit)
    gains = None
    if net.model != 'connectivity':
        gains = dict((e, net.gain(*e)) for e in known)
    return LocalView((role, index), h, known, gains)


def diameter(net):
    """Largest diameter of the bipartite graph over the components."""
    g = net.bipartite_graph()
    return max(nx.diameter(g.subgraph(nodes))
               for nodes in nx.connected_components(g))


def global_horizon(net, users=None):
    """Smallest h at which every local view is global within a component.

    Parameters
    ----------
    net : Network

    users : iterable of int, optional
        Restrict to the component containing these users. By default the
        maximum over all components is returned.
    """
    if users is None:
        return max(global_horizon(net, comp) for comp in net.components())
    users = set(users)
    horizon = 1
    for index in sorted(users):
        for role, slack in (('tx', 0), ('rx', 1)):
            dist = edge_hop_distances(net, (role, index))
            horizon = max(horizon, max(dist.values()) - slack)
    return horizon


def format_rational(value):
    """Render an exact rational as a "p/q" string."""
    value = Fraction(value)
    return '%d/%d' % (value.numerator, value.denominator)


def parse_rational(text):
    """Inverse of :func:`format_rational`."""
    try:
        return Fraction(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValueError("not a rational: %r" % (text,))
