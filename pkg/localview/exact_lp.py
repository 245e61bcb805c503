"""Exact linear programming over the rationals.

A dense tableau simplex on :class:`fractions.Fraction` entries. Only the
form needed by the covering programs of this package is supported:
maximize c.x subject to A x <= b, x >= 0 with b >= 0, so the origin is a
feasible starting basis and no phase one is required. Bland's rule keeps
degenerate programs from cycling.
"""
import logging
from collections import namedtuple
from fractions import Fraction

logger = logging.getLogger(__name__)

LPResult = namedtuple('LPResult', ['value', 'x', 'n_pivots'])


def maximize(c, A_ub, b_ub):
    """Maximize ``c . x`` subject to ``A_ub x <= b_ub`` and ``x >= 0``.

    Parameters
    ----------
    c : sequence of numbers, length n

    A_ub : sequence of m sequences of numbers, each of length n

    b_ub : sequence of m nonnegative numbers

    Returns
    -------
    result : LPResult
        ``value`` and ``x`` are exact Fractions; ``x`` is a basic optimal
        solution.
    """
    c = [Fraction(v) for v in c]
    b = [Fraction(v) for v in b_ub]
    n, m = len(c), len(b)
    if len(A_ub) != m:
        raise ValueError("A_ub has %d rows but b_ub has %d entries"
                         % (len(A_ub), m))
    if any(v < 0 for v in b):
        raise ValueError("b_ub must be nonnegative, got %r"
                         % ([str(v) for v in b],))
    tableau = []
    for i, row in enumerate(A_ub):
        if len(row) != n:
            raise ValueError("row %d of A_ub has length %d, expected %d"
                             % (i, len(row), n))
        slack = [Fraction(int(i == r)) for r in range(m)]
        tableau.append([Fraction(v) for v in row] + slack + [b[i]])
    objective = [-v for v in c] + [Fraction(0)] * (m + 1)
    basis = list(range(n, n + m))

    n_pivots = 0
    while True:
        entering = next((j for j in range(n + m) if objective[j] < 0), None)
        if entering is None:
            break
        leaving = None
        for i in range(m):
            a = tableau[i][entering]
            if a > 0:
                ratio = tableau[i][-1] / a
                if (leaving is None or ratio < leaving[0] or
                        (ratio == leaving[0] and
                         basis[i] < basis[leaving[1]])):
                    leaving = (ratio, i)
        if leaving is None:
            raise ValueError("the linear program is unbounded")
        r = leaving[1]
        pivot = tableau[r][entering]
        tableau[r] = [v / pivot for v in tableau[r]]
        for i in range(m):
            factor = tableau[i][entering]
            if i != r and factor != 0:
                tableau[i] = [v - factor * p
                              for v, p in zip(tableau[i], tableau[r])]
        factor = objective[entering]
        objective = [v - factor * p for v, p in zip(objective, tableau[r])]
        basis[r] = entering
        n_pivots += 1

    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = tableau[i][-1]
    logger.debug("simplex on %dx%d finished after %d pivots", m, n, n_pivots)
    return LPResult(objective[-1], x, n_pivots)


def max_min_coverage(columns, n_items):
    """Best fractional time sharing of item sets.

    Solves max lambda subject to sum_A x_A = 1, x >= 0 and, for every item
    j, sum over columns A containing j of x_A >= lambda.

    Parameters
    ----------
    columns : list of iterables of int
        Item sets, items numbered 0..n_items - 1.

    n_items : int

    Returns
    -------
    value : Fraction
        The optimal lambda.

    weights : list of Fraction
        Weight of each column, summing to one.
    """
    n = len(columns)
    # variables: x_A for every column, then lambda
    A_ub = []
    for item in range(n_items):
        row = [Fraction(-int(item in col)) for col in columns]
        A_ub.append(row + [Fraction(1)])
    A_ub.append([Fraction(1)] * n + [Fraction(0)])
    b_ub = [Fraction(0)] * n_items + [Fraction(1)]
    result = maximize([0] * n + [1], A_ub, b_ub)
    weights = result.x[:n]
    total = sum(weights)
    if total == 0:
        return Fraction(0), weights
    return result.value / total, [w / total for w in weights]
