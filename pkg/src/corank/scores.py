"""Score functions on normalized ranks, and chi-square helpers.

A (spherical) score function J maps normalized ranks in [0, 1) to the
real line; the per-observation vector score is ``J(R/(n_r+1)) * S``
with S the unit sign vector.  Shipped kinds:

==========  =====================================  ==========
kind        J(r)                                   integral of J^2
==========  =====================================  ==========
sign        1                                      1
wilcoxon    r                                      1/3
vdw         sqrt(Q_d(r)), chi-square(d) quantile   d
==========  =====================================  ==========

Non-spherical scores are supported through :class:`VectorScore`, a raw
map from ball points to score vectors with a user-supplied (or
grid-estimated) d x d score covariance.

The chi-square tail helpers are built on the regularized incomplete
gamma; the quantile inverts the cdf by bracketed root-finding.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq
from scipy.special import gammainc, gammaincc

from .errors import InvalidInputError, InvalidScoreError

VDW_CLAMP = 1.0 - 1e-12


def chi_sq_cdf(d, x):
    """Chi-square(d) cdf via the regularized lower incomplete gamma."""
    if d < 1:
        raise InvalidInputError(f"dof must be >= 1, got {d}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise InvalidInputError("chi-square argument must be >= 0")
    return gammainc(d / 2.0, x / 2.0)


def chi_sq_sf(d, x):
    """Chi-square(d) survival function (upper tail)."""
    if d < 1:
        raise InvalidInputError(f"dof must be >= 1, got {d}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise InvalidInputError("chi-square argument must be >= 0")
    return gammaincc(d / 2.0, x / 2.0)


def chi_sq_quantile(d, p):
    """Chi-square(d) quantile by root-finding on the cdf.

    Parameters
    ----------
    d : int
        Degrees of freedom, >= 1.
    p : float
        Probability in (0, 1).

    Returns
    -------
    float
    """
    if d < 1:
        raise InvalidInputError(f"dof must be >= 1, got {d}")
    if not 0.0 < p < 1.0:
        raise InvalidInputError(f"quantile level must be in (0, 1), got {p}")
    hi = d + 10.0 * np.sqrt(d) + 10.0
    while chi_sq_cdf(d, hi) < p:
        hi *= 2.0
    return brentq(
        lambda x: chi_sq_cdf(d, x) - p, 0.0, hi,
        xtol=1e-13, rtol=4.0 * np.finfo(float).eps,
    )


def _vdw_j(d, r):
    # quantiles are monotone and ranks repeat, so evaluate per unique value
    uniq, inv = np.unique(r, return_inverse=True)
    q = np.array([0.0 if u == 0.0 else chi_sq_quantile(d, u) for u in uniq])
    return np.sqrt(q)[inv].reshape(np.shape(r))


@dataclass(frozen=True)
class ScoreFunction:
    """A spherical score: scalar J on [0, 1) applied along the sign.

    Build through :func:`sign_score`, :func:`wilcoxon_score`,
    :func:`van_der_waerden_score`, or :func:`custom_score`.
    """

    kind: str
    d: int | None = None
    fn: Callable | None = field(default=None, repr=False)
    norm_sq_value: float | None = None

    def evaluate(self, r):
        """J at normalized ranks ``r`` (scalar or array) in [0, 1)."""
        arr = np.asarray(r, dtype=float)
        if np.any(arr < 0.0) or np.any(arr >= 1.0):
            raise InvalidInputError("normalized ranks must lie in [0, 1)")
        if self.kind == "sign":
            out = np.ones_like(arr)
        elif self.kind == "wilcoxon":
            out = arr.copy()
        elif self.kind == "vdw":
            if np.any(arr > VDW_CLAMP):
                warnings.warn(
                    "normalized rank clamped to 1 - 1e-12 for the van der "
                    "Waerden score",
                    stacklevel=2,
                )
                arr = np.minimum(arr, VDW_CLAMP)
            out = _vdw_j(self.d, arr)
        else:
            out = np.asarray(self.fn(arr), dtype=float)
        return out if np.ndim(r) else float(out)

    def norm_sq(self):
        """Integral of J^2 over [0, 1]."""
        return self.norm_sq_value

    def vector_scores(self, rs):
        """Per-observation vector scores ``J(rank/(n_r+1)) * sign``, (n, d)."""
        j = self.evaluate(rs.rank / rs.rank_divisor)
        return np.asarray(j)[:, None] * rs.sign

    def score_cov(self, d):
        """Score covariance; spherical scores give ``(norm_sq/d) * I``."""
        return (self.norm_sq() / d) * np.eye(d)


def sign_score():
    """Pure sign test score, J = 1."""
    return ScoreFunction(kind="sign", norm_sq_value=1.0)


def wilcoxon_score():
    """Linear rank score, J(r) = r."""
    return ScoreFunction(kind="wilcoxon", norm_sq_value=1.0 / 3.0)


def van_der_waerden_score(d):
    """Gaussian quantile score for dimension d, J(r) = sqrt(Q_d(r))."""
    if d < 1:
        raise InvalidInputError(f"dof must be >= 1, got {d}")
    return ScoreFunction(kind="vdw", d=int(d), norm_sq_value=float(d))


def custom_score(fn, norm_sq=None):
    """Wrap a user J; the squared norm is integrated if not supplied.

    Raises
    ------
    InvalidScoreError
        If the quadrature diverges or the squared norm is not a
        positive finite number.
    """
    if norm_sq is None:
        with warnings.catch_warnings():
            warnings.simplefilter("error", IntegrationWarning)
            try:
                norm_sq, abserr = quad(
                    lambda r: float(fn(r)) ** 2, 0.0, 1.0, epsabs=0.0,
                    epsrel=1e-10, limit=200,
                )
            except (IntegrationWarning, OverflowError, ZeroDivisionError) as err:
                raise InvalidScoreError(
                    f"squared-norm quadrature failed: {err}"
                ) from err
        if not np.isfinite(norm_sq) or abserr > 1e-8 * max(abs(norm_sq), 1.0):
            raise InvalidScoreError("score has no finite squared norm")
    if not np.isfinite(norm_sq) or norm_sq <= 0:
        raise InvalidScoreError(f"squared norm must be positive, got {norm_sq}")
    return ScoreFunction(kind="custom", fn=fn, norm_sq_value=float(norm_sq))


def vector_score(score, rank, sign, n_r):
    """Single-observation vector score ``J(rank/(n_r+1)) * sign``."""
    sign = np.asarray(sign, dtype=float)
    return score.evaluate(np.asarray(rank, dtype=float) / (n_r + 1)) * sign


@dataclass(frozen=True)
class VectorScore:
    """A general (possibly non-spherical) score on ball points.

    Parameters
    ----------
    fn : callable
        Maps an (n, d) array of ball points to an (n, d) array of score
        vectors.
    cov : (d, d) array, optional
        Integral of the score outer product over the uniform ball
        distribution.  When omitted, tests estimate it by averaging the
        outer products over the gridpoints (see
        :func:`estimate_score_cov`).
    """

    fn: Callable = field(repr=False)
    cov: np.ndarray | None = None

    def vector_scores(self, rs):
        pts = (rs.rank / rs.rank_divisor)[:, None] * rs.sign
        out = np.asarray(self.fn(pts), dtype=float)
        if out.shape != pts.shape:
            raise InvalidScoreError(
                f"vector score returned shape {out.shape}, expected {pts.shape}"
            )
        return out

    def score_cov(self, d, grid=None):
        if self.cov is not None:
            cov = np.asarray(self.cov, dtype=float)
            if cov.shape != (d, d):
                raise InvalidScoreError(
                    f"score covariance must be {d}x{d}, got {cov.shape}"
                )
            return cov
        if grid is None:
            raise InvalidScoreError(
                "vector score has no covariance and no grid to estimate it from"
            )
        return estimate_score_cov(self.fn, grid)


def estimate_score_cov(fn, grid):
    """Average outer product of the score over the gridpoints.

    The grid discretizes the uniform ball distribution, so this is a
    quadrature estimate of the score covariance.
    """
    vals = np.asarray(fn(grid.points), dtype=float)
    return vals.T @ vals / vals.shape[0]


_FACTORIES = {
    "sign": lambda d: sign_score(),
    "wilcoxon": lambda d: wilcoxon_score(),
    "vdw": lambda d: van_der_waerden_score(d),
}


def get_score(name, d):
    """Resolve a score by name ("sign", "wilcoxon", "vdw") for dimension d."""
    if isinstance(name, (ScoreFunction, VectorScore)):
        return name
    try:
        return _FACTORIES[name](d)
    except KeyError:
        raise InvalidScoreError(
            f"unknown score {name!r}; expected one of {sorted(_FACTORIES)}"
        ) from None
