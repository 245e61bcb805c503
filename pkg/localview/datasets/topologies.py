"""Canonical interference topologies.

Generators return connectivity-only :class:`localview.Network` objects
unless gains are given; use ``Network.binary()`` or
``Network.with_random_gains()`` for a deterministic model.
"""
from fractions import Fraction

import pandas as pd
from sklearn.utils import Bunch

from ..capacity import THREE_USER_ALPHA1, THREE_USER_OUTER2
from ..topology import (INTEGER_TYPES, THREE_USER_LETTERS, Network,
                        canonical_three_user,
                        three_user_orbits)
from ..zchain import ZCHAIN_CROSS, ZChainDet, ZChainGauss


def _check_size(n_users, least=1):
    if not isinstance(n_users, INTEGER_TYPES) or n_users < least:
        raise ValueError("n_users must be an integer >= %d, got %r"
                         % (least, n_users))
    return int(n_users)


def _check_d(d, n_users):
    if not isinstance(d, INTEGER_TYPES) or not 1 <= d < n_users:
        raise ValueError("d must be an integer in 1..%d, got %r"
                         % (n_users - 1, d))
    return int(d)


def make_isolated(n_users):
    """K users and no cross links."""
    return Network(_check_size(n_users))


def make_z_network():
    """Two users, T_1 heard at D_2."""
    return Network(2, [(1, 2)])


def make_chain(n_users):
    """T_i heard at D_{i+1} for i < K."""
    n_users = _check_size(n_users, 2)
    return Network(n_users, [(i, i + 1) for i in range(1, n_users)])


def make_cyclic_chain(n_users):
    """A chain closed by T_K heard at D_1."""
    n_users = _check_size(n_users, 3)
    cross = [(i, i % n_users + 1) for i in range(1, n_users + 1)]
    return Network(n_users, cross)


def make_d_to_many(d, n_users):
    """T_1..T_d heard at every other receiver."""
    n_users = _check_size(n_users, 2)
    d = _check_d(d, n_users)
    return Network(n_users, [(i, j) for i in range(1, d + 1)
                             for j in range(1, n_users + 1) if j != i])


def make_many_to_d(d, n_users):
    """Every transmitter heard at D_1..D_d."""
    n_users = _check_size(n_users, 2)
    d = _check_d(d, n_users)
    return Network(n_users, [(i, j) for j in range(1, d + 1)
                             for i in range(1, n_users + 1) if i != j])


def make_fully_connected(n_users):
    n_users = _check_size(n_users)
    return Network(n_users, [(i, j) for i in range(1, n_users + 1)
                             for j in range(1, n_users + 1) if i != j])


def make_z_chain(gains=None, model='deterministic'):
    """Three users with cross links (1, 2) and (2, 3).

    Parameters
    ----------
    gains : sequence of 5 numbers, optional
        (n11, n22, n33, n12, n23), or the SNR/INR powers for
        ``model='gaussian'``. Without gains a connectivity-only network is
        returned.

    model : {'deterministic', 'gaussian'}, optional
    """
    if gains is None:
        return Network(3, ZCHAIN_CROSS)
    if model == 'deterministic':
        return ZChainDet(*gains).to_network()
    if model == 'gaussian':
        return ZChainGauss(*gains).to_network()
    raise ValueError("model must be 'deterministic' or 'gaussian', got %r"
                     % (model,))


def load_three_user_classes():
    """The sixteen 3-user topology classes.

    Returns
    -------
    dataset : Bunch
        ``data`` is a DataFrame with one row per class, ordered by letter:
        ``letter``, ``index`` (canonical orbit rank), ``edges``,
        ``orbit_size``, ``alpha1`` and ``outer2`` (the 1-hop normalized
        sum-capacity and the 2-hop outer bound). ``networks`` maps letters
        to representatives.
    """
    sizes = dict((index, size) for index, _, size in three_user_orbits())
    rows = []
    networks = {}
    for letter, edges in THREE_USER_LETTERS.items():
        net = Network(3, edges)
        index = canonical_three_user(net)[0]
        networks[letter] = net
        rows.append((letter, index, sorted(edges), sizes[index],
                     THREE_USER_ALPHA1[letter], THREE_USER_OUTER2[letter]))
    data = pd.DataFrame(rows, columns=['letter', 'index', 'edges',
                                       'orbit_size', 'alpha1', 'outer2'])
    return Bunch(data=data, networks=networks)


def load_worked_example():
    """Six users where T_1..T_4 are heard at every other receiver.

    Returns
    -------
    dataset : Bunch
        ``network`` and the exact ``alpha`` at 1 and 2 hops.
    """
    return Bunch(network=make_d_to_many(4, 6),
                 alpha={1: Fraction(1, 5), 2: Fraction(4, 7)},
                 description='4-to-many network with six users')
