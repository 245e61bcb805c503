"""
Testing for the Z-chain rate calculators (localview.zchain).
"""
import numpy as np
import pytest
from sklearn.utils import check_random_state

from localview import config_context, get_config
from localview.datasets import make_chain, make_z_chain
from localview.zchain import (DEFAULT_GRID_DB, STRATEGIES, RateTriple,
                              ZChainDet, ZChainGauss, zchain_det_achievable,
                              zchain_det_case, zchain_det_in_region,
                              zchain_det_region_max, zchain_det_sweep,
                              zchain_gauss_achievable, zchain_gauss_case,
                              zchain_gauss_outer, zchain_gauss_regime,
                              zchain_gauss_sweep)

rng = check_random_state(0)


def test_gain_validation():
    with pytest.raises(ValueError):
        ZChainDet(1, 1, 1, 1, -1)
    with pytest.raises(ValueError):
        ZChainDet(1, 1, 1, 1.5, 1)
    with pytest.raises(ValueError):
        ZChainDet(True, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        ZChainGauss(1., np.nan, 1., 1., 1.)
    with pytest.raises(ValueError):
        ZChainGauss(1., 1., -1., 1., 1.)
    with pytest.raises(ValueError):
        ZChainDet.from_network(make_chain(3))
    with pytest.raises(ValueError):
        ZChainDet.from_network(make_z_chain((1, 1, 1, 1, 1), 'gaussian'))
    with pytest.raises(ValueError):
        zchain_det_sweep(-1)
    z = ZChainDet(3, 2, 3, 1, 2)
    assert ZChainDet.from_network(z.to_network()) == z
    assert np.isclose(ZChainGauss.from_db(10, 0, 0, 0, 0).snr1, 10.)


def test_det_example():
    """Check region, case and rates of a small instance."""
    z = ZChainDet(2, 2, 2, 1, 1)
    total, witness = zchain_det_region_max(z)
    assert total == 4
    assert witness == RateTriple(1, 1, 2)
    rates, case = zchain_det_achievable(z)
    assert case == 1
    assert rates == RateTriple(2, 0, 2)
    assert rates.sum == 4
    assert zchain_det_in_region(z, rates)
    assert not zchain_det_in_region(z, (2, 2, 2))


def test_det_cases():
    """Boundary ties go to the lower case."""
    assert zchain_det_case(ZChainDet(1, 1, 1, 1, 1)) == 1
    assert zchain_det_case(ZChainDet(0, 1, 1, 1, 1)) == 2
    assert zchain_det_case(ZChainDet(1, 2, 2, 2, 1)) == 3
    assert zchain_det_case(ZChainDet(1, 2, 0, 2, 1)) == 4
    assert zchain_det_case(ZChainDet(0, 4, 4, 1, 1)) == 5
    assert zchain_det_case(ZChainDet(1, 4, 4, 2, 3)) == 6
    assert zchain_det_case(ZChainDet(1, 4, 4, 2, 4)) == 7
    assert zchain_det_case(ZChainDet(0, 4, 0, 1, 1)) == 8
    assert zchain_det_case(ZChainDet(1, 4, 0, 2, 3)) == 9
    assert zchain_det_case(ZChainDet(1, 4, 0, 2, 4)) == 10
    assert zchain_det_case(ZChainDet(1, 4, 0, 2, 5)) == 11


def test_det_sweep():
    """Every instance up to gain 4 stays in the region."""
    table = zchain_det_sweep(4)
    assert len(table) == 3125
    assert table['in_region'].all()
    assert (table['achievable_sum'] <= table['region_max']).all()
    asserted = table[table['case'].isin([1, 2, 3, 11])]
    assert len(asserted) > 0
    assert asserted['optimal'].all()
    assert set(table['case']) <= set(range(1, 12))


@pytest.mark.filterwarnings(
    'ignore::localview.exceptions.PrintedFormulaWarning')
def test_det_strict_clips_at_zero():
    with config_context(strict_paper=True):
        for _ in range(50):
            z = ZChainDet(*rng.randint(0, 5, size=5).tolist())
            rates, _ = zchain_det_achievable(z)
            assert rates.R2 >= 0
            assert rates.R1 == z.n11 and rates.R3 == z.n33


def test_gauss_outer():
    """Check the symmetric unit instance."""
    z = ZChainGauss(1., 1., 1., 1., 1.)
    assert zchain_gauss_regime(z) == 1
    outer, regime = zchain_gauss_outer(z)
    assert regime == 1
    assert np.isclose(outer, 1. + np.log2(3.))
    result = zchain_gauss_achievable(z)
    assert result.gap >= -get_config()['rate_atol']
    assert result.gap <= 4.


def test_gauss_regimes():
    assert zchain_gauss_regime(ZChainGauss(10., 1., 1., 20., .5)) == 2
    assert zchain_gauss_regime(ZChainGauss(10., 1., 1., 1., 5.)) == 3
    assert zchain_gauss_regime(ZChainGauss(10., 100., 10., 1., 0.)) == 4


def test_gauss_strict_case():
    """The printed A.1 formula loses two bits."""
    z = ZChainGauss(10., 100., 10., 1., 0.)
    assert zchain_gauss_case(z) == 'A.1'
    result = zchain_gauss_achievable(z, strict=True)
    assert result.case == 'A.1'
    assert np.isclose(result.rates.R2, np.log2(51.) - 2.)
    assert np.isclose(result.rates.R1, np.log2(11.))
    assert np.isclose(result.rates.R3, np.log2(11.))
    assert result.strategy == 'case'
    corrected = zchain_gauss_achievable(z)
    assert corrected.rates.R2 >= result.rates.R2
    assert corrected.gap <= result.gap
    alone = zchain_gauss_achievable(z, generic=False)
    assert alone.strategy == 'case'
    assert alone.rates.R2 <= corrected.rates.R2
    assert corrected.strategy in STRATEGIES


def test_gauss_sweep():
    """Within four bits of the outer bound on the default grid."""
    table = zchain_gauss_sweep(DEFAULT_GRID_DB)
    assert len(table) == 7 ** 5
    assert table['in_region'].all()
    assert table['gap'].min() >= -get_config()['rate_atol']
    assert table['gap'].max() <= 4. + get_config()['gap_atol']
    assert set(table['regime']) == set([1, 2, 3, 4])

    # rows whose R2 comes from the generic scheme, by case
    generic = table[table['strategy'] == 'generic']
    assert len(generic) == 3869
    counts = generic['case'].value_counts()
    assert (counts['C'], counts['E'], counts['F'], counts['J'],
            counts['D.1']) == (1568, 546, 434, 320, 294)
    assert set(generic['case']) <= set(['C', 'D.1', 'D.2', 'D.3', 'E',
                                         'F', 'H', 'I', 'J', 'K'])


def test_gauss_case_formulas_alone():
    """The corrected case formulas miss the gap without the generic
    scheme."""
    table = zchain_gauss_sweep(DEFAULT_GRID_DB, generic=False)
    assert (table['strategy'] == 'case').all()
    assert table['in_region'].all()
    assert (table['gap'] > 4.).sum() == 835
    assert abs(table['gap'].max() - 16.48) < .01


def test_gauss_small_sweep_columns():
    table = zchain_gauss_sweep((0, 20))
    assert len(table) == 32
    assert list(table.columns[:8]) == ['snr1', 'snr2', 'snr3', 'inr2',
                                       'inr3', 'regime', 'case', 'strategy']
    assert set(table['strategy']) <= set(STRATEGIES)
