"""Classical and elliptical-rank baselines.

Three families, kept deliberately close to the textbook forms so the
center-outward tests have honest competitors:

* Hotelling T^2 and Pillai's trace with their F reference laws;
* elliptical (Mahalanobis) rank tests: sphericize the pooled data,
  rank the moduli, keep the directions, and reuse the same linear
  rank statistic machinery with divisor n+1;
* a sphericized variant of the center-outward tests that standardizes
  the data before assigning it to the grid.

Sphericization uses the symmetric inverse root by default.  The
sphericized center-outward test uses the Cholesky root instead: the
symmetric root leaves a data-dependent orthogonal factor behind, and
with a fixed grid only the Cholesky choice makes the statistic exactly
invariant under shifts and positive-diagonal triangular rescalings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import betainc
from scipy.stats import rankdata

from .center_outward import RanksSigns
from .errors import (
    DegenerateInputError,
    InvalidInputError,
    NumericalError,
)
from .rank_tests import TestResult, _co_k_sample, _validate_groups, k_sample_statistic
from .scores import chi_sq_sf, get_score

TYLER_TOL = 1e-9
TYLER_MAX_ITER = 500


@dataclass(frozen=True)
class ScatterEstimate:
    """A location vector and scatter matrix estimated from data."""

    matrix: np.ndarray
    location: np.ndarray
    kind: str


def _as_sample(z):
    z = np.asarray(z, dtype=float)
    if z.ndim != 2 or z.shape[0] < 2:
        raise InvalidInputError(f"need a 2-d sample with n >= 2, got shape {z.shape}")
    if not np.isfinite(z).all():
        raise InvalidInputError("sample has non-finite entries")
    return z


def sample_covariance(z):
    """Mean and unbiased covariance.  Singularity is rejected downstream."""
    z = _as_sample(z)
    loc = z.mean(axis=0)
    diffs = z - loc
    mat = diffs.T @ diffs / (z.shape[0] - 1)
    return ScatterEstimate(matrix=mat, location=loc, kind="sample")


def tyler_scatter(z, location=None):
    """Tyler's distribution-free M-estimator of scatter.

    Fixed-point iteration from the identity, trace normalized to d at
    every step; converged when successive iterates differ by less than
    ``TYLER_TOL`` in max norm.

    Raises
    ------
    DegenerateInputError
        If some observation coincides with the location.
    NumericalError
        If the iteration has not converged after ``TYLER_MAX_ITER``
        steps.
    """
    z = _as_sample(z)
    n, d = z.shape
    loc = z.mean(axis=0) if location is None else np.asarray(location, dtype=float)
    diffs = z - loc
    if np.any(np.linalg.norm(diffs, axis=1) < 1e-300):
        raise DegenerateInputError("an observation equals the Tyler location")
    v = np.eye(d)
    for _ in range(TYLER_MAX_ITER):
        try:
            quad = np.einsum("ij,ji->i", diffs, np.linalg.solve(v, diffs.T))
        except np.linalg.LinAlgError as err:
            raise NumericalError(f"Tyler iteration hit a singular iterate: {err}") from err
        if np.any(quad <= 0):
            raise DegenerateInputError("degenerate configuration in Tyler iteration")
        nxt = (d / n) * (diffs / quad[:, None]).T @ diffs
        nxt *= d / np.trace(nxt)
        if np.abs(nxt - v).max() < TYLER_TOL:
            return ScatterEstimate(matrix=nxt, location=loc, kind="tyler")
        v = nxt
    raise NumericalError(
        f"Tyler iteration did not converge in {TYLER_MAX_ITER} steps"
    )


def _inverse_root(matrix, root):
    if root == "cholesky":
        try:
            low = np.linalg.cholesky(matrix)
        except np.linalg.LinAlgError as err:
            raise DegenerateInputError(f"scatter matrix not positive definite: {err}") from err
        return low, None
    w, u = np.linalg.eigh(matrix)
    if w[0] < 1e-10 * max(w[-1], 1e-300) or w[-1] <= 0:
        raise DegenerateInputError(
            f"scatter matrix is numerically singular (eigenvalues {w})"
        )
    return None, (u / np.sqrt(w)) @ u.T


def sphericize(z, scatter, root="symmetric"):
    """Standardize a sample by a scatter estimate.

    ``root="symmetric"`` (default) applies the symmetric inverse square
    root; ``root="cholesky"`` solves against the lower Cholesky factor.
    """
    z = _as_sample(z)
    if root not in ("symmetric", "cholesky"):
        raise InvalidInputError(f"unknown root {root!r}")
    diffs = z - scatter.location
    low, sym = _inverse_root(np.asarray(scatter.matrix, dtype=float), root)
    if root == "cholesky":
        return solve_triangular(low, diffs.T, lower=True).T
    return diffs @ sym


def elliptical_ranks_signs(z_ell):
    """Ranks of the moduli (ties by input order) and unit directions.

    Returned in the shared rank container with ``n_r = n``, so the
    normalized ranks are ``R/(n+1)``.
    """
    z_ell = _as_sample(z_ell)
    moduli = np.linalg.norm(z_ell, axis=1)
    if np.any(moduli < 1e-300):
        raise DegenerateInputError("zero residual has no direction")
    ranks = rankdata(moduli, method="ordinal").astype(float)
    return RanksSigns(rank=ranks, sign=z_ell / moduli[:, None], n_r=z_ell.shape[0])


def elliptical_rank_test(samples, score="wilcoxon"):
    """K-group location test from elliptical ranks and signs.

    Pooled data is sphericized by its sample covariance; the moduli
    ranks and directions then feed the same standardized linear rank
    statistic as the center-outward tests (chi-square, (K-1)*d dof).
    """
    samples = _validate_groups(samples, 2)
    pooled = np.vstack(samples)
    n, d = pooled.shape
    score = get_score(score, d)
    rs = elliptical_ranks_signs(sphericize(pooled, sample_covariance(pooled)))
    stat = k_sample_statistic(rs, [s.shape[0] for s in samples], score)
    dof = (len(samples) - 1) * d
    method = "elliptical-two-sample" if len(samples) == 2 else "elliptical-manova"
    return TestResult(
        method=method,
        statistic=stat,
        dof=dof,
        p_value=float(chi_sq_sf(dof, stat)),
        n=n,
        d=d,
        score=getattr(score, "kind", "vector"),
    )


def sphericized_center_outward_test(samples, score="wilcoxon", scatter="sample", *,
                                    n_r=None, n_s=None, symmetrize=True,
                                    tie_break_seed=0):
    """Center-outward K-group test on standardized data.

    The pooled sample is sphericized (Cholesky root; ``scatter`` is
    "sample" or "tyler") and the usual center-outward test runs on the
    result.  Trades some distribution-freeness for affine invariance.
    """
    samples = _validate_groups(samples, 2)
    pooled = np.vstack(samples)
    if scatter == "sample":
        est = sample_covariance(pooled)
    elif scatter == "tyler":
        est = tyler_scatter(pooled)
    else:
        raise InvalidInputError(f"unknown scatter {scatter!r}")
    z = sphericize(pooled, est, root="cholesky")
    sizes = np.cumsum([s.shape[0] for s in samples])[:-1]
    groups = np.split(z, sizes)
    method = (
        "co-sphericized-two-sample" if len(samples) == 2 else "co-sphericized-manova"
    )
    return _co_k_sample(
        groups, score, method, n_r, n_s, symmetrize, tie_break_seed, None
    )


def _f_sf(x, df1, df2):
    # F upper tail via the regularized incomplete beta
    if x <= 0:
        return 1.0
    return float(betainc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * x)))


def hotelling_two_sample(sample1, sample2):
    """Two-sample Hotelling T^2 with its exact-normal F reference.

    ``T^2 = (n1 n2 / n) (xbar1 - xbar2)' S_pooled^{-1} (xbar1 - xbar2)``
    reported through ``F = T^2 (n - 1 - d) / ((n - 2) d)`` on
    ``(d, n - 1 - d)`` degrees of freedom.
    """
    x = _as_sample(sample1)
    y = _as_sample(sample2)
    if x.shape[1] != y.shape[1]:
        raise InvalidInputError("samples differ in dimension")
    n1, d = x.shape
    n2 = y.shape[0]
    n = n1 + n2
    if n - 1 - d < 1:
        raise InvalidInputError(
            f"Hotelling needs n >= d + 2, got n={n}, d={d}"
        )
    s1 = np.cov(x, rowvar=False, ddof=1).reshape(d, d)
    s2 = np.cov(y, rowvar=False, ddof=1).reshape(d, d)
    pooled = ((n1 - 1) * s1 + (n2 - 1) * s2) / (n - 2)
    w = np.linalg.eigvalsh(pooled)
    if w[0] < 1e-12 * max(w[-1], 1e-300) or w[-1] <= 0:
        raise DegenerateInputError("pooled covariance is singular")
    diff = x.mean(axis=0) - y.mean(axis=0)
    t_sq = float(n1 * n2 / n * diff @ np.linalg.solve(pooled, diff))
    f_stat = t_sq * (n - 1 - d) / ((n - 2) * d)
    dof = (d, n - 1 - d)
    return TestResult(
        method="hotelling",
        statistic=t_sq,
        dof=dof,
        p_value=_f_sf(f_stat, *dof),
        null_dist="f",
        n=n,
        d=d,
    )


def pillai_manova(samples):
    """Pillai's trace with the standard F approximation.

    ``V = trace(H (H + E)^{-1})`` from the between- and within-group
    SSCP matrices.
    """
    samples = _validate_groups(samples, 2)
    pooled = np.vstack(samples)
    n, d = pooled.shape
    k = len(samples)
    if n - k - d - 1 < 0:
        raise InvalidInputError(
            f"Pillai needs n >= K + d + 1, got n={n}, K={k}, d={d}"
        )
    grand = pooled.mean(axis=0)
    h = np.zeros((d, d))
    e = np.zeros((d, d))
    for group in samples:
        mean_k = group.mean(axis=0)
        dev = (mean_k - grand)[:, None]
        h += group.shape[0] * (dev @ dev.T)
        resid = group - mean_k
        e += resid.T @ resid
    total = h + e
    w = np.linalg.eigvalsh(total)
    if w[0] < 1e-12 * max(w[-1], 1e-300) or w[-1] <= 0:
        raise DegenerateInputError("total SSCP matrix is singular")
    v = float(np.trace(np.linalg.solve(total, h)))
    s = min(d, k - 1)
    m_par = (abs(d - k + 1) - 1) / 2.0
    n_par = (n - k - d - 1) / 2.0
    df1 = int(round(s * (2 * m_par + s + 1)))
    df2 = int(round(s * (2 * n_par + s + 1)))
    f_stat = (df2 / df1) * (v / (s - v)) if s > v else np.inf
    return TestResult(
        method="pillai",
        statistic=v,
        dof=(df1, df2),
        p_value=_f_sf(f_stat, df1, df2),
        null_dist="f",
        n=n,
        d=d,
    )
