"""Global configuration, modelled on ``sklearn.get_config``."""
from contextlib import contextmanager

_global_config = {
    'max_users': 12,
    'cs_max_users': 6,
    'cs_t_max': 4,
    'cs_k_max': 2,
    'cs_node_budget': 50000,
    'allow_approx': False,
    'strict_paper': False,
    'rate_atol': 1e-9,
    'gap_atol': 1e-6,
    'residual_tol': 1e-9,
}


def get_config():
    """Retrieve current values of the configuration.

    Returns
    -------
    config : dict
        Keys are parameter names that can be passed to :func:`set_config`.
    """
    return _global_config.copy()


def set_config(**params):
    """Set global configuration.

    Parameters
    ----------
    max_users : int, optional
        Largest connected component handled by exhaustive subgraph
        enumeration (MIG, outer-bound recipe, colorings).

    cs_max_users : int, optional
        Largest network handled by exhaustive coded-set search.

    cs_t_max, cs_k_max : int, optional
        Slot and codeword caps of the coded-set search.

    cs_node_budget : int, optional
        Number of search nodes explored per (t, k) pair.

    allow_approx : bool, optional
        If True, routines above their cap degrade to greedy or partial
        answers with a warning instead of raising ``SizeCapError``.

    strict_paper : bool, optional
        If True, the Z-chain calculators report formulas as printed.

    rate_atol, gap_atol, residual_tol : float, optional
        Numerical tolerances of the Gaussian calculators and of the real
        feasibility check.
    """
    for key, value in params.items():
        if key not in _global_config:
            raise ValueError("Unknown configuration key %r" % key)
        if value is not None:
            _global_config[key] = value


@contextmanager
def config_context(**params):
    """Context manager for global configuration.

    Examples
    --------
    >>> from localview import config_context, get_config
    >>> with config_context(cs_t_max=3):
    ...     get_config()['cs_t_max']
    3
    """
    old_config = get_config()
    set_config(**params)
    try:
        yield
    finally:
        _global_config.clear()
        _global_config.update(old_config)


def _resolve(name, value):
    """Return ``value`` unless it is None, else the configured default."""
    if value is None:
        return _global_config[name]
    return value
