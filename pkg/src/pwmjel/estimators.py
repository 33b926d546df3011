"""Point estimators for probability weighted moments.

The target quantity is ``beta_r = E[X * F(X)**r]``, the r-th probability
weighted moment of a continuous distribution F.  Three sample versions are
provided:

* ``dn_estimate``      -- plug-in with empirical CDF weights ``(i/n)**r``,
* ``vexler_estimate``  -- weights from differenced powers of the empirical CDF,
* ``ustat_estimate``   -- U-statistic with the max kernel, using the identity
  ``(r+1) * beta_r = E[max(X_1, ..., X_{r+1})]``.

The U-statistic form admits an exact order-statistic representation

    beta_r = sum_{i=r+1..n} C(i-1, r) * x_(i) / ((r+1) * C(n, r+1)),

which is what ``ustat_estimate`` evaluates; ``ustat_brute_force`` enumerates
subsets directly and exists to cross-check it on small inputs.  Jackknife
pseudo-values of the U-statistic feed the empirical likelihood machinery in
:mod:`pwmjel.inference`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import InsufficientSampleError, PwmInputError

__all__ = [
    "SortedSample",
    "PseudoValues",
    "dn_estimate",
    "vexler_estimate",
    "ustat_estimate",
    "ustat_brute_force",
    "jackknife_pseudo_values",
    "variance_s",
]

# Subset enumeration cap for the brute-force cross-check.
_BRUTE_FORCE_LIMIT = 10**6


@dataclass(frozen=True)
class SortedSample:
    """Immutable ascending sample.

    Build through :meth:`from_data`, which validates and sorts.  The wrapped
    array is marked read-only so downstream code can hold references safely.
    """

    values: np.ndarray

    @classmethod
    def from_data(cls, data) -> "SortedSample":
        arr = np.asarray(data, dtype=float)
        if arr.ndim != 1:
            raise PwmInputError("sample must be one-dimensional")
        if arr.size == 0:
            raise PwmInputError("sample is empty")
        if not np.all(np.isfinite(arr)):
            raise PwmInputError("sample contains non-finite values")
        out = np.sort(arr, kind="stable")
        out.flags.writeable = False
        return cls(values=out)

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class PseudoValues:
    """Jackknife pseudo-values of the U-statistic estimator.

    ``values[k] = n * b - (n-1) * b_k`` where ``b`` is the full-sample
    estimate and ``b_k`` the estimate with observation k deleted.  Their mean
    reproduces ``ustat_estimate`` exactly.
    """

    values: np.ndarray
    ustat_estimate: float
    r: int
    n: int


def _as_sample(sample) -> SortedSample:
    if isinstance(sample, SortedSample):
        return sample
    return SortedSample.from_data(sample)


def _check_order(r: int) -> int:
    if not isinstance(r, (int, np.integer)) or isinstance(r, bool):
        raise PwmInputError(f"moment order must be an integer, got {r!r}")
    if r < 0:
        raise PwmInputError(f"moment order must be non-negative, got {r}")
    return int(r)


def dn_estimate(sample, r: int) -> float:
    """Estimate beta_r with empirical-CDF plug-in weights.

    Computes ``(1/n) * sum_i (i/n)**r * x_(i)`` on the ascending sample.

    Parameters
    ----------
    sample : array_like or SortedSample
        Observations; sorted internally when raw data is passed.
    r : int
        Moment order, ``r >= 0``.

    Returns
    -------
    float
    """
    r = _check_order(r)
    s = _as_sample(sample)
    n = s.n
    w = (np.arange(1, n + 1, dtype=float) / n) ** r
    return float(np.mean(w * s.values))


def vexler_estimate(sample, r: int) -> float:
    """Estimate beta_r with differenced-power empirical-CDF weights.

    Computes ``sum_i x_(i) * ((i/n)**(r+1) - ((i-1)/n)**(r+1)) / (r+1)``.
    The weights inside the sum telescope to one, so a constant sample c
    yields exactly ``c / (r+1)``, matching the U-statistic estimator.
    """
    r = _check_order(r)
    s = _as_sample(sample)
    n = s.n
    grid = np.arange(0, n + 1, dtype=float) / n
    w = np.diff(grid ** (r + 1))
    return float(np.sum(w * s.values) / (r + 1))


def _log_binom(top, k: int) -> np.ndarray:
    """log C(top, k) elementwise; -inf where top < k."""
    top = np.asarray(top, dtype=float)
    out = np.full(top.shape, -np.inf)
    ok = top >= k
    t = top[ok]
    out[ok] = gammaln(t + 1.0) - gammaln(t - k + 1.0) - gammaln(k + 1.0)
    return out


def _ustat_weights(n: int, r: int) -> np.ndarray:
    """Normalized order-statistic weights ``C(i-1, r) / C(n, r+1)``, i=1..n.

    Evaluated in log space; raw factorials would overflow long before the
    supported sample sizes are reached.
    """
    i = np.arange(1, n + 1, dtype=float)
    log_d = float(gammaln(n + 1.0) - gammaln(n - r) - gammaln(r + 2.0))
    logs = _log_binom(i - 1.0, r) - log_d
    return np.exp(logs)


def ustat_estimate(sample, r: int) -> float:
    """U-statistic estimate of beta_r via the max kernel.

    Averages ``max(x over subset) / (r+1)`` across all subsets of size
    ``r+1``, evaluated in closed form from the order statistics in O(n).

    Parameters
    ----------
    sample : array_like or SortedSample
    r : int
        Moment order, ``r >= 1``.  (r = 0 reduces to the sample mean; the
        closed form handles it, but inference below needs r >= 1.)

    Raises
    ------
    InsufficientSampleError
        If ``n < r + 1``, where no subset of the required size exists.
    """
    r = _check_order(r)
    s = _as_sample(sample)
    if s.n < r + 1:
        raise InsufficientSampleError(
            f"need at least r+1 = {r + 1} observations, got {s.n}"
        )
    w = _ustat_weights(s.n, r)
    return float(np.sum(w * s.values) / (r + 1))


def ustat_brute_force(sample, r: int) -> float:
    """Subset-enumeration version of :func:`ustat_estimate`.

    Exponentially slow by design; guarded so it refuses workloads past
    ``C(n, r+1) = 10**6`` subsets.  Kept as an independent cross-check.
    """
    r = _check_order(r)
    s = _as_sample(sample)
    n = s.n
    if n < r + 1:
        raise InsufficientSampleError(
            f"need at least r+1 = {r + 1} observations, got {n}"
        )
    n_subsets = math.comb(n, r + 1)
    if n_subsets > _BRUTE_FORCE_LIMIT:
        raise PwmInputError(
            f"brute force refused: C({n}, {r + 1}) = {n_subsets} subsets "
            f"exceeds the {_BRUTE_FORCE_LIMIT} cap"
        )
    total = 0.0
    for subset in itertools.combinations(s.values, r + 1):
        total += max(subset)
    return total / (n_subsets * (r + 1))


def jackknife_pseudo_values(sample, r: int) -> PseudoValues:
    """Leave-one-out pseudo-values of the U-statistic estimator.

    For each k the deleted-sample estimate ``b_k`` is obtained from prefix
    and suffix sums of reweighted order statistics (deleting the k-th order
    statistic shifts the ranks above it down by one), so the whole vector
    costs O(n) after sorting rather than O(n^2).

    Returns
    -------
    PseudoValues
        With ``values`` in the order of the ascending sample.
    """
    r = _check_order(r)
    if r < 1:
        raise PwmInputError("pseudo-values require moment order r >= 1")
    s = _as_sample(sample)
    n = s.n
    if n < r + 2:
        raise InsufficientSampleError(
            f"need at least r+2 = {r + 2} observations for the jackknife, got {n}"
        )
    x = s.values
    i = np.arange(1, n + 1, dtype=float)
    log_d = float(gammaln(n + 1.0) - gammaln(n - r) - gammaln(r + 2.0))
    w_keep = np.exp(_log_binom(i - 1.0, r) - log_d)   # rank unchanged (below k)
    w_shift = np.exp(_log_binom(i - 2.0, r) - log_d)  # rank drops by one (above k)

    beta_full = float(np.sum(w_keep * x) / (r + 1))

    prefix = np.concatenate(([0.0], np.cumsum(w_keep * x)[:-1]))
    suffix = np.concatenate((np.cumsum((w_shift * x)[::-1])[::-1][1:], [0.0]))
    # rescale from C(n, r+1) to the deleted-sample denominator C(n-1, r+1)
    beta_del = (prefix + suffix) * (n / ((n - r - 1.0) * (r + 1.0)))

    v = n * beta_full - (n - 1) * beta_del
    v.flags.writeable = False
    return PseudoValues(values=v, ustat_estimate=beta_full, r=r, n=n)


def variance_s(pseudo_values: PseudoValues, beta: float) -> float:
    """Mean squared deviation of the pseudo-values about ``beta``.

    ``S = (1/n) * sum_k (v_k - beta)**2``, the scale that standardizes the
    log likelihood ratio.  Centered at the hypothesized value, not at the
    pseudo-value mean.
    """
    if not np.isfinite(beta):
        raise PwmInputError("beta must be finite")
    d = pseudo_values.values - beta
    return float(np.mean(d * d))
