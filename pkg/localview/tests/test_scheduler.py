"""
Testing for MIG scheduling and colorings (localview.scheduler).
"""
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from sklearn.base import clone
from sklearn.utils import check_random_state

from localview import Network
from localview.datasets import (load_worked_example, make_chain,
                                make_cyclic_chain, make_d_to_many,
                                make_fully_connected, make_isolated,
                                make_many_to_d, make_z_network)
from localview.exceptions import (NonExhaustiveWarning, SizeCapError,
                                  SufficientOnlyWarning)
from localview.exact_lp import max_min_coverage
from localview.scheduler import (HOPS, MIGScheduler, conflict_graph,
                                 fractional_coloring,
                                 is_independent_subgraph,
                                 maximal_independent_subgraphs,
                                 mis_optimality_predicate, optimize_mig)

rng = check_random_state(0)


def _random_network(max_users, p=0.3):
    n = rng.randint(1, max_users + 1)
    cross = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)
             if i != j and rng.rand() < p]
    return Network(n, cross)


def test_conflict_graph():
    g = conflict_graph(Network(3, [(1, 2), (2, 1), (3, 2)]))
    assert sorted(g.nodes()) == [1, 2, 3]
    assert sorted(tuple(sorted(e)) for e in g.edges()) == [(1, 2), (2, 3)]


def test_independent_subgraphs():
    """Check the h-tests on small topologies."""
    z = make_z_network()
    assert is_independent_subgraph([1], z, 1)
    assert not is_independent_subgraph([1, 2], z, 1)
    assert is_independent_subgraph([1, 2], z, 2)
    chain = make_chain(3)
    assert not is_independent_subgraph([1, 2, 3], chain, 2)
    assert is_independent_subgraph([1, 3], chain, 1)
    assert is_independent_subgraph([1, 2, 3], chain, 3)
    assert is_independent_subgraph([1, 2, 3], make_fully_connected(3), 2)
    assert is_independent_subgraph([1, 2, 3, 4], make_d_to_many(1, 4), 2)
    assert not is_independent_subgraph([1, 2, 3, 4], make_many_to_d(1, 4),
                                       2)

    verdict, reasons = is_independent_subgraph([1, 2, 3], chain, 3,
                                               return_reasons=True)
    assert verdict
    assert reasons[-1] == 'sufficient-only'
    verdict, reasons = is_independent_subgraph([1, 2], chain, 2,
                                               return_reasons=True)
    assert verdict and reasons == ['[1, 2]: one-to-many']
    with pytest.raises(ValueError):
        is_independent_subgraph([1], z, 4)


def test_maximal_independent_subgraphs():
    subgraphs, exhaustive = maximal_independent_subgraphs(make_chain(4), 1)
    assert exhaustive
    assert subgraphs == [(1, 3), (1, 4), (2, 4)]
    subgraphs, _ = maximal_independent_subgraphs(make_chain(4), 2)
    assert subgraphs == [(1, 2, 4), (1, 3, 4), (2, 3)]


def test_worked_example():
    """The 4-to-many network with six users."""
    data = load_worked_example()
    for h in (1, 2):
        schedule, value = optimize_mig(data.network, h)
        assert value == data.alpha[h]
        assert schedule.value == value


def test_mig_closed_forms():
    """MIG values of the families with known alpha."""
    for n in range(2, 7):
        assert optimize_mig(make_chain(n), 1)[1] == Fraction(1, 2)
        assert optimize_mig(make_fully_connected(n), 1)[1] == Fraction(1, n)
        assert optimize_mig(make_fully_connected(n), 2)[1] == 1
        for d in range(1, n):
            assert optimize_mig(make_d_to_many(d, n), 1)[1] == \
                Fraction(1, d + 1)
            assert optimize_mig(make_many_to_d(d, n), 1)[1] == \
                Fraction(1, d + 1)
    assert optimize_mig(make_many_to_d(1, 4), 2)[1] == Fraction(3, 5)
    assert optimize_mig(make_d_to_many(3, 5), 2)[1] == Fraction(3, 5)
    assert optimize_mig(make_chain(5), 2)[1] == Fraction(2, 3)
    assert optimize_mig(make_isolated(3), 1)[1] == 1


def test_mig_schedule_consistency():
    """Every slot is independent and the value is the least coverage."""
    for _ in range(40):
        net = _random_network(6)
        for h in (1, 2):
            est = MIGScheduler(hops=h).fit(net)
            sched = est.schedule_
            for slot in sched.subgraphs:
                assert is_independent_subgraph(slot, net, h)
            coverage = [sum(u in s for s in sched.subgraphs)
                        for u in net.users]
            assert est.value_ == Fraction(min(coverage), sched.t)
            assert est.value_ == min(v for _, v in est.component_values_)
            assert sum(est.weights_.values()) == len(net.components())


def test_mig_estimator():
    """Check fitted attributes, warnings and caps."""
    est = MIGScheduler(hops=1)
    assert clone(est).get_params() == est.get_params()
    with pytest.raises(ValueError):
        MIGScheduler(hops=5).fit(make_chain(3))
    with pytest.warns(SufficientOnlyWarning):
        MIGScheduler(hops=3).fit(make_chain(3))
    with pytest.raises(SizeCapError):
        MIGScheduler(max_users=3).fit(make_chain(5))
    with pytest.warns(NonExhaustiveWarning):
        est = MIGScheduler(max_users=3, allow_approx=True).fit(make_chain(5))
    assert not est.exhaustive_
    assert est.value_ <= Fraction(1, 2)
    doc = est.to_dict()
    assert doc['exhaustive'] is False
    assert doc['value'] == '%d/%d' % (est.value_.numerator,
                                      est.value_.denominator)


def test_fractional_coloring():
    """Check fractional and k-fold chromatic numbers."""
    triangle = conflict_graph(make_fully_connected(3))
    result = fractional_coloring(triangle)
    assert result.chi_f == 3
    assert result.xi[1] == 3
    assert result.best_k == 1
    assert result.exact

    pentagon = conflict_graph(make_cyclic_chain(5))
    result = fractional_coloring(pentagon, k_max=3)
    assert result.chi_f == Fraction(5, 2)
    assert result.alpha_mis == Fraction(2, 5)
    assert dict(result.xi) == {1: 3, 2: 5, 3: 8}
    assert result.best_k == 2

    empty = fractional_coloring(nx.Graph())
    assert empty.alpha_mis == 1
    with pytest.raises(ValueError):
        fractional_coloring(triangle, k_max=0)


def test_fractional_coloring_approx():
    pentagon = conflict_graph(make_cyclic_chain(5))
    with pytest.raises(SizeCapError):
        fractional_coloring(pentagon, max_users=4)
    with pytest.warns(NonExhaustiveWarning):
        result = fractional_coloring(pentagon, max_users=4,
                                     allow_approx=True)
    assert not result.exact
    assert result.chi_f >= Fraction(5, 2)


def test_mis_optimality_predicate():
    """MIS scheduling is optimal exactly for bipartite conflict graphs."""
    for net in (make_chain(5), make_z_network(), make_d_to_many(1, 5),
                make_many_to_d(1, 5), make_isolated(3)):
        assert mis_optimality_predicate(conflict_graph(net))
    assert not mis_optimality_predicate(conflict_graph(make_cyclic_chain(3)))
    assert optimize_mig(make_cyclic_chain(3), 1)[1] == Fraction(1, 3)
    for _ in range(30):
        g = conflict_graph(_random_network(7))
        assert mis_optimality_predicate(g) == nx.is_bipartite(g)


def test_one_hop_independence_is_conflict_independence():
    """At one hop independent subgraphs are the independent sets of the
    conflict graph."""
    links = [(i, j) for i in range(1, 4) for j in range(1, 4) if i != j]
    nets = [Network(3, [e for b, e in enumerate(links) if mask >> b & 1])
            for mask in range(1 << len(links))]
    nets.extend(_random_network(6, p=.2) for _ in range(20))
    for net in nets:
        g = conflict_graph(net)
        for size in range(1, net.n_users + 1):
            for users in combinations(net.users, size):
                assert is_independent_subgraph(users, net, 1) == \
                    (g.subgraph(users).number_of_edges() == 0)


def test_mig_value_is_inverse_fractional_chromatic():
    for _ in range(40):
        net = _random_network(6)
        g = conflict_graph(net)
        assert optimize_mig(net, 1)[1] == \
            fractional_coloring(g, k_max=1).alpha_mis


@pytest.mark.filterwarnings(
    'ignore::localview.exceptions.SufficientOnlyWarning')
def test_mig_value_nondecreasing_in_hops():
    for _ in range(30):
        net = _random_network(6)
        values = [optimize_mig(net, h)[1] for h in HOPS]
        assert values == sorted(values), (net, values)


def _sparsest_support(net, h):
    """First optimal support by size, then lexicographically."""
    subgraphs, _ = maximal_independent_subgraphs(net, h)
    columns = [[u - 1 for u in s] for s in subgraphs]
    value, _ = max_min_coverage(columns, net.n_users)
    for size in range(1, len(subgraphs) + 1):
        for support in combinations(range(len(subgraphs)), size):
            found, _ = max_min_coverage([columns[i] for i in support],
                                        net.n_users)
            if found == value:
                return [subgraphs[i] for i in support]


def test_mig_tie_break():
    """Fewest distinct subgraphs, then the lexicographically first."""
    est = MIGScheduler().fit(make_chain(4))
    assert list(est.weights_) == [(1, 3), (2, 4)]
    assert dict(est.schedule_.distinct()) == {(1, 3): 1, (2, 4): 1}
    est = MIGScheduler().fit(make_chain(5))
    assert list(est.weights_) == [(1, 3, 5), (2, 4)]
    assert est.schedule_.t == 2

    checked = 0
    while checked < 20:
        net = _random_network(5, p=.4)
        if len(net.components()) > 1:
            continue
        checked += 1
        for h in (1, 2):
            est = MIGScheduler(hops=h).fit(net)
            assert list(est.weights_) == _sparsest_support(net, h)
