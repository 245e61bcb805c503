from sklearn.base import clone

from localview import CodedSetSearch, MIGScheduler
from localview.datasets import load_three_user_classes


def test_estimator_params():
    for est in (MIGScheduler(hops=2, max_users=8),
                CodedSetSearch(t_max=3, k_max=1, node_budget=10)):
        params = est.get_params()
        assert clone(est).get_params() == params
        assert repr(est).startswith(type(est).__name__)


def test_load_three_user_classes():
    assert load_three_user_classes().data.shape[0] == 16
