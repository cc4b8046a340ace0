"""Empirical center-outward ranks and signs.

The empirical center-outward distribution function sends each
observation to the ball gridpoint it is matched with under the exact
minimum-squared-distance assignment.  The rank of an observation is the
radius index of its gridpoint (0 at the origin, 1/2 at a tie-break
point), its sign the gridpoint's unit direction.  Both are carried as
exact grid bookkeeping, never recomputed from floating coordinates, so
any statistic built on them is a pure function of the assignment.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .assignment import solve_assignment, squared_cost
from .errors import InvalidInputError, InvalidSpecError
from .sphere_grid import Grid, GridSpec, build_grid


@dataclass(frozen=True)
class CenterOutwardMap:
    """Result of assigning a sample onto a ball grid.

    Attributes
    ----------
    values : (n, d) ndarray
        Gridpoint coordinates assigned to each observation; row ``i``
        is the empirical map evaluated at observation ``i``.
    assignment : (n,) ndarray
        Index into ``grid.points`` per observation.
    total_cost : float
        Total squared distance of the optimal pairing.
    grid : Grid
        The target grid (carries the rank/sign bookkeeping).
    """

    values: np.ndarray
    assignment: np.ndarray
    total_cost: float
    grid: Grid


@dataclass(frozen=True)
class RanksSigns:
    """Per-observation ranks and unit sign vectors.

    ``rank`` takes values in {0, 1/2, 1, ..., n_r}; the zero vector
    stands in as the sign of an observation mapped to the origin.
    Normalized ranks are ``rank / (n_r + 1)``.  Elliptical ranks reuse
    this container with ``n_r = n`` (divisor ``n + 1``).
    """

    rank: np.ndarray
    sign: np.ndarray
    n_r: int

    @property
    def n(self):
        return self.rank.shape[0]

    @property
    def d(self):
        return self.sign.shape[1]

    @property
    def rank_divisor(self):
        return self.n_r + 1


def empirical_map(sample, grid, tie_break_seed=0):
    """Compute the empirical center-outward map of a sample.

    Parameters
    ----------
    sample : (n, d) array
        Observations, d >= 2, all finite.
    grid : GridSpec or Grid
        Target grid.  A GridSpec is built here (using
        ``tie_break_seed``); a prebuilt Grid is used as-is, which lets
        callers reuse one grid across many samples or supply a rotated
        grid.
    tie_break_seed : int
        Seed for tie-break directions when building from a GridSpec.

    Returns
    -------
    CenterOutwardMap
    """
    sample = np.asarray(sample, dtype=float)
    if sample.ndim != 2:
        raise InvalidInputError(f"sample must be 2-d, got shape {sample.shape}")
    n, d = sample.shape
    if d < 2:
        raise InvalidSpecError(f"center-outward ranks need d >= 2, got d={d}")
    if not np.isfinite(sample).all():
        raise InvalidInputError("sample has non-finite entries")
    if isinstance(grid, GridSpec):
        grid = build_grid(grid, tie_break_seed=tie_break_seed)
    elif not isinstance(grid, Grid):
        raise InvalidInputError("grid must be a GridSpec or a Grid")
    if grid.n != n or grid.d != d:
        raise InvalidInputError(
            f"grid shape ({grid.n}, {grid.d}) does not match sample shape ({n}, {d})"
        )
    pairing = solve_assignment(squared_cost(sample, grid.points))
    return CenterOutwardMap(
        values=grid.points[pairing.assignment],
        assignment=pairing.assignment,
        total_cost=pairing.total_cost,
        grid=grid,
    )


def ranks_signs(com):
    """Extract ranks and signs from a CenterOutwardMap.

    Returns
    -------
    RanksSigns
    """
    grid = com.grid
    rank = grid.rank_values()[com.assignment]
    sign = grid.sign_vectors()[com.assignment]
    n_r = grid.spec.n_r if grid.spec is not None else grid.n_r
    return RanksSigns(rank=rank, sign=sign, n_r=n_r)


def ranks_signs_to_csv(com, path):
    """Dump per-observation ranks, signs, and map values to CSV.

    Columns: obs_index, rank, s1..sd, fx1..fxd.
    """
    rs = ranks_signs(com)
    d = rs.d
    header = (
        ["obs_index", "rank"]
        + [f"s{j + 1}" for j in range(d)]
        + [f"fx{j + 1}" for j in range(d)]
    )
    if hasattr(path, "write"):
        _write_ranks_signs(path, header, rs, com)
        return
    with open(path, "w", newline="") as fh:
        _write_ranks_signs(fh, header, rs, com)


def _write_ranks_signs(fh, header, rs, com):
    writer = csv.writer(fh)
    writer.writerow(header)
    for i in range(rs.n):
        row = [i, repr(float(rs.rank[i]))]
        row += [repr(float(v)) for v in rs.sign[i]]
        row += [repr(float(v)) for v in com.values[i]]
        writer.writerow(row)
