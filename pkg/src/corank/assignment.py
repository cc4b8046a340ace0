"""Exact minimum-cost assignment of a sample onto a grid.

The empirical center-outward map is the bijection between observations
and gridpoints minimizing the total squared Euclidean distance.  The
production solver wraps an exact linear-sum-assignment routine; a
brute-force enumerator over all permutations is kept alongside it as an
independent oracle for small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from .errors import InvalidInputError

BRUTE_FORCE_MAX_N = 9


@dataclass(frozen=True)
class Pairing:
    """An observation-to-gridpoint bijection and its total cost.

    ``assignment[i]`` is the index of the gridpoint paired with
    observation ``i``.
    """

    assignment: np.ndarray
    total_cost: float


def squared_cost(sample, grid):
    """Pairwise squared Euclidean distances, ``entry (i, j) = ||z_i - g_j||^2``.

    Parameters
    ----------
    sample : (n, d) array
    grid : (n, d) array or Grid

    Returns
    -------
    (n, n) ndarray
    """
    pts = getattr(grid, "points", grid)
    sample = np.asarray(sample, dtype=float)
    pts = np.asarray(pts, dtype=float)
    if sample.ndim != 2 or pts.ndim != 2:
        raise InvalidInputError("sample and grid must be 2-d arrays")
    if sample.shape != pts.shape:
        raise InvalidInputError(
            f"sample and grid shapes differ: {sample.shape} vs {pts.shape}"
        )
    if not (np.isfinite(sample).all() and np.isfinite(pts).all()):
        raise InvalidInputError("non-finite coordinates in sample or grid")
    # cdist forms the differences directly, so entries are exact to rounding
    return cdist(sample, pts, metric="sqeuclidean")


def _check_cost(cost):
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise InvalidInputError(f"cost matrix must be square, got {cost.shape}")
    if not np.isfinite(cost).all():
        raise InvalidInputError("cost matrix has non-finite entries")
    return cost


def solve_assignment(cost):
    """Exact minimum-cost bijection for a square cost matrix.

    Ties between optimal bijections are broken in an unspecified but
    deterministic way (same input, same output).

    Returns
    -------
    Pairing
    """
    cost = _check_cost(cost)
    rows, cols = linear_sum_assignment(cost)
    order = np.argsort(rows)
    assignment = cols[order]
    total = float(cost[rows, cols].sum())
    return Pairing(assignment=assignment, total_cost=total)


def brute_force_assignment(cost):
    """Enumerate all n! bijections; oracle for instances with n <= 9.

    Returns the first permutation (in lexicographic order) attaining the
    minimum, so ties resolve deterministically.
    """
    cost = _check_cost(cost)
    n = cost.shape[0]
    if n > BRUTE_FORCE_MAX_N:
        raise InvalidInputError(
            f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got n={n}"
        )
    perms = np.array(list(itertools.permutations(range(n))), dtype=int)
    totals = cost[np.arange(n), perms].sum(axis=1)
    best = int(np.argmin(totals))
    return Pairing(assignment=perms[best].copy(), total_cost=float(totals[best]))
