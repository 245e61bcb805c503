"""
Testing for the normalized sum-capacity engine (localview.capacity).
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.utils import check_random_state

from localview import Network, config_context
from localview.capacity import (THREE_USER_ALPHA1, THREE_USER_OUTER2,
                                AlphaResult, ProvenanceEntry, alpha,
                                alpha_curve, binary_symcap_bounds,
                                closed_form, curve_hops, decode_closure,
                                outer_bound_recipe)
from localview.coded_sets import search_best_cs
from localview.datasets import (load_three_user_classes,
                                load_worked_example, make_chain,
                                make_cyclic_chain, make_d_to_many,
                                make_fully_connected, make_isolated,
                                make_many_to_d, make_z_network)
from localview.exceptions import (BoundsInconsistencyError,
                                  NonExhaustiveWarning, SizeCapError)
from localview.scheduler import optimize_mig
from localview.topology import classify

rng = check_random_state(0)


def _random_network(max_users, p=0.3):
    n = rng.randint(1, max_users + 1)
    cross = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)
             if i != j and rng.rand() < p]
    return Network(n, cross)


def _families(n):
    """(network, alpha(1), alpha(2) or None) for every family of size n."""
    yield make_chain(n), Fraction(1, 2), (Fraction(2, 3) if n > 2
                                          else Fraction(1))
    yield make_fully_connected(n), Fraction(1, n), Fraction(1)
    for d in range(1, n):
        yield make_d_to_many(d, n), Fraction(1, d + 1), \
            Fraction(d, 2 * d - 1)
        many_to_one = Fraction(n - 1, 2 * n - 3) if d == 1 else None
        yield make_many_to_d(d, n), Fraction(1, d + 1), many_to_one


def test_alpha_result():
    result = AlphaResult(2, Fraction(1, 2), Fraction(2, 3),
                         [ProvenanceEntry('lower', Fraction(1, 2),
                                          'lower/mig-lp', (1, 2, 3))])
    assert not result.exact
    assert str(result) == '[1/2, 2/3]'
    assert str(AlphaResult(1, Fraction(1, 3), Fraction(1, 3))) == '1/3'
    doc = result.to_dict()
    assert doc['lower'] == '1/2' and doc['upper'] == '2/3'
    assert doc['provenance'][0]['source'] == 'lower/mig-lp'
    assert result.sources('lower') == ['lower/mig-lp']
    with pytest.raises(BoundsInconsistencyError):
        AlphaResult(1, Fraction(2, 3), Fraction(1, 2))
    with pytest.raises(ValueError):
        AlphaResult(1, Fraction(1, 2), Fraction(3, 2))


def test_decode_closure():
    """Check closures on the binary model."""
    z = make_z_network()
    assert decode_closure(z, 2) == (frozenset([1, 2]), False)
    assert decode_closure(z, 1) == (frozenset([1]), False)
    full = make_fully_connected(3)
    assert decode_closure(full, 1) == (frozenset([1, 2, 3]), False)
    # D1 decodes X1 and still hears the other two
    many = make_many_to_d(1, 3)
    decoded, residual = decode_closure(many, 1)
    assert (decoded, residual) == (frozenset([1]), True)


def test_closed_form():
    classes = dict((str(c), c) for n in range(2, 6)
                   for c in classify(make_d_to_many(1, n)))
    assert closed_form(classes['ZNetwork'], 1) == Fraction(1, 2)
    assert closed_form(classes['DToMany(1,4)'], 2) == 1
    assert closed_form(classify(make_cyclic_chain(5))[0], 1) == \
        Fraction(1, 2)
    assert closed_form(classify(make_cyclic_chain(5))[0], 2) is None
    assert closed_form(classify(make_many_to_d(2, 5))[0], 2) is None
    assert closed_form(classify(make_isolated(1))[0], 3) == 1


def test_worked_example():
    """alpha(1) = 1/5 and alpha(2) = 4/7 on six users, four interferers."""
    data = load_worked_example()
    for h in (1, 2):
        result = alpha(data.network, h)
        assert result.exact
        assert result.lower == data.alpha[h]
        assert 'lower/mig-lp' in result.sources('lower')
    assert outer_bound_recipe(data.network, 1)[0] == Fraction(1, 5)
    assert outer_bound_recipe(data.network, 2)[0] == Fraction(4, 7)


def test_family_tables():
    """Exact alpha(1) and alpha(2) of the families for K = 2..8."""
    for n in range(2, 9):
        for net, alpha1, alpha2 in _families(n):
            result = alpha(net, 1)
            assert result.exact, (net, result)
            assert result.lower == alpha1
            assert outer_bound_recipe(net, 1)[0] == alpha1
            if alpha2 is not None:
                result = alpha(net, 2)
                assert result.exact, (net, result)
                assert result.lower == alpha2
    assert alpha(make_many_to_d(1, 4), 2).lower == Fraction(3, 5)
    assert alpha(make_d_to_many(3, 5), 2).lower == Fraction(3, 5)


def test_three_user_classes():
    """All sixteen 3-user classes at one and two hops."""
    data = load_three_user_classes()
    for letter, net in data.networks.items():
        result = alpha(net, 1)
        assert result.exact, letter
        assert result.lower == THREE_USER_ALPHA1[letter]
        assert result.lower in (1, Fraction(1, 2), Fraction(1, 3))

        result = alpha(net, 2)
        if THREE_USER_OUTER2[letter] == Fraction(4, 5):
            assert result.upper == Fraction(4, 5), letter
            assert alpha(net, 1).lower <= result.lower
        else:
            assert result.exact, letter
            assert result.lower == THREE_USER_OUTER2[letter]
    assert list(data.data['letter']) == list('abcdefghijklmnop')
    assert data.data['orbit_size'].sum() == 64


def test_odd_cyclic_chain():
    """Coded sets beat any time sharing on odd cycles."""
    for n in (3, 5, 7):
        result = alpha(make_cyclic_chain(n), 1)
        assert result.exact
        assert result.lower == Fraction(1, 2)
        assert 'lower/cyclic-chain' in result.sources('lower')


def test_three_hops():
    """Beyond two hops the upper bound is trivial."""
    result = alpha(make_chain(5), 3)
    assert result.upper == 1
    assert result.lower >= Fraction(2, 3)
    assert alpha(make_z_network(), 3).lower == 1
    assert alpha(make_isolated(2), 1).lower == 1
    with pytest.raises(ValueError):
        alpha(make_chain(3), 0)
    with pytest.raises(ValueError):
        outer_bound_recipe(make_chain(3), 3)


def test_caps():
    net = make_chain(6)
    with pytest.raises(SizeCapError):
        outer_bound_recipe(net, 1, max_users=4)
    with pytest.warns(NonExhaustiveWarning):
        bound, provenance = outer_bound_recipe(net, 1, max_users=4,
                                               allow_approx=True)
    assert bound == Fraction(1, 2)
    assert provenance[0].source == 'outer/z-pair'


@given(st.sets(st.sampled_from([(i, j) for i in range(1, 5)
                                for j in range(1, 5) if i != j])),
       st.permutations([1, 2, 3, 4]))
@settings(max_examples=30, deadline=None)
def test_relabeling_invariance(edges, perm):
    """Bounds do not depend on user labels."""
    net = Network(4, edges)
    for h in (1, 2):
        a = alpha(net, h, search_cs=False)
        b = alpha(net.relabel(perm), h, search_cs=False)
        assert (a.lower, a.upper) == (b.lower, b.upper)


@pytest.mark.filterwarnings(
    'ignore::localview.exceptions.NonExhaustiveWarning')
def test_binary_symcap_bounds():
    """Bounds agree with alpha(1) and never cross."""
    for n in range(2, 6):
        for net, alpha1, _ in _families(n):
            result = binary_symcap_bounds(net)
            assert result.exact
            assert result.lower == alpha1
    assert binary_symcap_bounds(make_cyclic_chain(3)).lower == \
        Fraction(1, 2)
    with config_context(cs_node_budget=200, cs_t_max=3):
        for _ in range(500):
            net = _random_network(5)
            result = binary_symcap_bounds(net)
            assert result.lower <= result.upper


def test_alpha_curve_monotone():
    """Lower bounds grow with h and reach 1 at the diameter."""
    for _ in range(500):
        net = _random_network(6)
        curve = alpha_curve(net, search_cs=False)
        hops = [h for h, _ in curve]
        assert hops == curve_hops(net)
        lowers = [r.lower for _, r in curve]
        assert lowers == sorted(lowers)
        assert lowers[-1] == 1
        for _, r in curve:
            assert r.lower <= r.upper


def test_curve_of_worked_example():
    curve = dict(alpha_curve(load_worked_example().network))
    assert sorted(curve) == [1, 2, 3, 4]
    assert curve[1].lower == Fraction(1, 5)
    assert curve[2].lower == Fraction(4, 7)
    assert curve[4].lower == 1
    chain = dict(alpha_curve(make_chain(5)))
    assert chain[1].lower == Fraction(1, 2)
    assert chain[2].lower == Fraction(2, 3)
    assert [h for h, _ in alpha_curve(make_isolated(3))] == [1]


def test_family_engine_matches_closed_form():
    """Schedules and the outer recipe meet the known values on their own."""
    for n in range(2, 8):
        for net, _, _ in _families(n):
            cls = classify(net)[0]
            for h in (1, 2):
                value = closed_form(cls, h)
                if value is None:
                    continue
                assert optimize_mig(net, h)[1] == value, (net, h)
                assert outer_bound_recipe(net, h)[0] == value, (net, h)
    for n in (3, 5):
        net = make_cyclic_chain(n)
        value = closed_form(classify(net)[0], 1)
        assert value == Fraction(1, 2)
        assert search_best_cs(net)[1] == value
        assert outer_bound_recipe(net, 1)[0] == value


def test_alpha_ignores_gains():
    for _ in range(20):
        net = _random_network(4)
        for h in (1, 2):
            base = alpha(net, h)
            for other in [net.binary()] + [net.with_random_gains(seed)
                                           for seed in range(3)]:
                result = alpha(other, h)
                assert (result.lower, result.upper) == \
                    (base.lower, base.upper)


@pytest.mark.filterwarnings(
    'ignore::localview.exceptions.SufficientOnlyWarning')
def test_alpha_lower_nondecreasing():
    """Without the coded set search nothing needs carrying forward."""
    for _ in range(100):
        net = _random_network(6)
        lowers = [alpha(net, h, search_cs=False).lower
                  for h in curve_hops(net)]
        assert lowers == sorted(lowers), net
