"""Sampling, true moment values, and chi-square helpers.

Parameterization conventions, fixed and documented here once:

* exponential: ``param1`` is the MEAN theta (not the rate),
* normal: mean zero, ``param1`` is the standard deviation sigma (so the
  common variance notation N(0, 4) maps to ``param1 = 2``),
* lognormal: ``exp(sigma * Z)`` with Z standard normal, ``param1 = sigma``,
* constant: point mass at ``param1``; a sampling hook for degenerate-input
  tests, with no defined moment target.

``param2`` is reserved for a future location shift and must stay zero.

Draws go through inverse transforms of open-interval uniforms from a seeded
PCG64 generator, so replication streams are reproducible and independent of
library version quirks in the convenience samplers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import ndtr, ndtri

from .errors import ConvergenceError, NumericError, PwmInputError

__all__ = [
    "EXPONENTIAL",
    "NORMAL",
    "LOGNORMAL",
    "CONSTANT",
    "DistSpec",
    "make_rng",
    "sample",
    "true_beta",
    "true_beta_quadrature",
    "chi2_1_cdf",
    "chi2_1_quantile",
    "sigma_sq_oracle",
]

EXPONENTIAL = "exponential"
NORMAL = "normal"
LOGNORMAL = "lognormal"
CONSTANT = "constant"

_FAMILIES = (EXPONENTIAL, NORMAL, LOGNORMAL, CONSTANT)

# Standard-normal quadrature window; the integrands below are negligible
# beyond |z| = 10 for every supported parameter.
_Z_LIM = 10.0


@dataclass(frozen=True)
class DistSpec:
    """A sampling distribution named by family and one parameter."""

    family: str
    param1: float
    param2: float = 0.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise PwmInputError(
                f"unknown family {self.family!r}; expected one of {_FAMILIES}"
            )
        if not np.isfinite(self.param1):
            raise PwmInputError("param1 must be finite")
        if self.family != CONSTANT and self.param1 <= 0:
            raise PwmInputError(f"{self.family} requires param1 > 0")
        if self.param2 != 0.0:
            raise PwmInputError("param2 is reserved and must be 0")

    @property
    def label(self) -> str:
        return f"{self.family}({self.param1:g})"


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator."""
    return np.random.Generator(np.random.PCG64(seed))


def _uniform_open(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniforms strictly inside (0, 1): inverse transforms stay finite."""
    return (rng.integers(0, 1 << 53, size=n, dtype=np.int64) + 0.5) * 2.0**-53


def sample(dist: DistSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n observations from dist using inverse-CDF transforms."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise PwmInputError(f"sample size must be a positive integer, got {n!r}")
    n = int(n)
    if dist.family == CONSTANT:
        return np.full(n, float(dist.param1))
    u = _uniform_open(rng, n)
    if dist.family == EXPONENTIAL:
        return -dist.param1 * np.log(u)
    z = ndtri(u)
    if dist.family == NORMAL:
        return dist.param1 * z
    return np.exp(dist.param1 * z)  # lognormal


def _harmonic(m: int) -> float:
    return sum(1.0 / j for j in range(1, m + 1))


def _check_r(r: int) -> int:
    if not isinstance(r, (int, np.integer)) or isinstance(r, bool) or r < 0:
        raise PwmInputError(f"moment order must be a non-negative integer, got {r!r}")
    return int(r)


def _quad(fn, lo, hi) -> float:
    value, abserr = integrate.quad(fn, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=300)
    if abserr > 1e-7 * max(1.0, abs(value)):
        raise NumericError(
            f"quadrature error estimate {abserr:.2e} too large for value {value:.6e}"
        )
    return float(value)


def _phi(z):
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def true_beta(dist: DistSpec, r: int) -> float:
    """Population value of ``E[X * F(X)**r]``.

    Exponential uses the closed form ``theta * H_{r+1} / (r+1)`` with H the
    harmonic numbers; normal and lognormal integrate over the standard
    normal z with absolute tolerance well under 1e-10.  A point mass at c
    gets ``c / (r+1)``, the common limit of all the sample estimators.
    """
    r = _check_r(r)
    if dist.family == EXPONENTIAL:
        return dist.param1 * _harmonic(r + 1) / (r + 1)
    if dist.family == CONSTANT:
        return dist.param1 / (r + 1)
    if dist.family == NORMAL:
        s = dist.param1
        return _quad(lambda z: s * z * _phi(z) * ndtr(z) ** r, -_Z_LIM, _Z_LIM)
    if dist.family == LOGNORMAL:
        s = dist.param1
        return _quad(lambda z: math.exp(s * z) * _phi(z) * ndtr(z) ** r, -_Z_LIM, _Z_LIM)
    raise PwmInputError(f"no population moment defined for family {dist.family!r}")


def true_beta_quadrature(dist: DistSpec, r: int) -> float:
    """Direct quadrature of ``E[X * F(X)**r]`` for every continuous family.

    For the exponential this duplicates the closed form in
    :func:`true_beta` through an entirely different route, which makes it a
    useful consistency oracle.
    """
    r = _check_r(r)
    if dist.family == EXPONENTIAL:
        theta = dist.param1

        def f(x):
            u = -math.expm1(-x / theta)  # CDF, stable near zero
            return x * u**r * math.exp(-x / theta) / theta

        return _quad(f, 0.0, np.inf)
    if dist.family in (NORMAL, LOGNORMAL):
        return true_beta(dist, r)
    raise PwmInputError(f"no population moment defined for family {dist.family!r}")


def chi2_1_cdf(x: float) -> float:
    """CDF of the chi-square distribution with one degree of freedom."""
    if not (np.isscalar(x) or isinstance(x, np.generic)):
        raise PwmInputError("chi2_1_cdf expects a scalar")
    x = float(x)
    if math.isnan(x) or x < 0.0:
        raise PwmInputError(f"chi-square argument must be >= 0, got {x}")
    return math.erf(math.sqrt(0.5 * x))


def _chi2_1_pdf(x: float) -> float:
    return math.exp(-0.5 * x) / math.sqrt(2.0 * math.pi * x)


def chi2_1_quantile(p: float, tol: float = 1e-13, max_iter: int = 100) -> float:
    """Inverse of :func:`chi2_1_cdf` on the open interval (0, 1).

    Newton iteration seeded by the square of the standard-normal quantile,
    safeguarded with a bisection bracket.  The returned x satisfies
    ``|chi2_1_cdf(x) - p| <= 1e-13`` or a bit better.
    """
    if not 0.0 < p < 1.0:
        raise PwmInputError(f"quantile level must be in (0, 1), got {p}")
    lo, hi = 0.0, 1.0
    while chi2_1_cdf(hi) < p:
        hi *= 2.0
        if hi > 1e8:
            raise ConvergenceError(f"quantile bracket failed for p = {p}")
    x = max(float(ndtri(0.5 * (1.0 + p))) ** 2, 1e-300)
    for _ in range(max_iter):
        err = chi2_1_cdf(x) - p
        if abs(err) <= tol:
            return x
        if err > 0.0:
            hi = x
        else:
            lo = x
        step = x - err / _chi2_1_pdf(x)
        x = step if lo < step < hi else 0.5 * (lo + hi)
    err = chi2_1_cdf(x) - p
    if abs(err) <= 1e-10:
        return x
    raise ConvergenceError(f"chi-square quantile stalled at p = {p}", best=x)


def _conditional_max_mean(dist: DistSpec, r: int):
    """Return g(x) = E[max of r+1 draws | one draw pinned at x], per family.

    The function is expressed in the natural integration variable of each
    family (x itself for exponential, standard-normal z otherwise).
    """
    if dist.family == EXPONENTIAL:
        theta = dist.param1

        def cdf(y):
            return -math.expm1(-y / theta)

        def pdf(y):
            return math.exp(-y / theta) / theta

        def g(x):
            tail = _quad(lambda y: y * cdf(y) ** (r - 1) * pdf(y), x, np.inf)
            return x * cdf(x) ** r + r * tail

        return g

    if dist.family == NORMAL:
        s = dist.param1

        def g(z):
            tail = _quad(lambda t: s * t * _phi(t) * ndtr(t) ** (r - 1), z, _Z_LIM)
            return s * z * ndtr(z) ** r + r * tail

        return g

    if dist.family == LOGNORMAL:
        s = dist.param1

        def g(z):
            tail = _quad(
                lambda t: math.exp(s * t) * _phi(t) * ndtr(t) ** (r - 1), z, _Z_LIM
            )
            return math.exp(s * z) * ndtr(z) ** r + r * tail

        return g

    raise PwmInputError(f"no variance functional for family {dist.family!r}")


def sigma_sq_oracle(dist: DistSpec, r: int) -> float:
    """Asymptotic variance of ``sqrt(n) * (beta_hat_r - beta_r)``.

    Equals the variance of the conditional mean of the max kernel given one
    coordinate, computed by nested quadrature.  Slow but independent of the
    estimator code, which is the point: simulation output is checked
    against this number, not against itself.
    """
    r = _check_r(r)
    if r < 1:
        raise PwmInputError("variance functional requires r >= 1")
    g = _conditional_max_mean(dist, r)
    if dist.family == EXPONENTIAL:
        theta = dist.param1
        pdf = lambda x: math.exp(-x / theta) / theta
        m1 = _quad(lambda x: g(x) * pdf(x), 0.0, np.inf)
        m2 = _quad(lambda x: g(x) ** 2 * pdf(x), 0.0, np.inf)
    else:
        m1 = _quad(lambda z: g(z) * _phi(z), -_Z_LIM, _Z_LIM)
        m2 = _quad(lambda z: g(z) ** 2 * _phi(z), -_Z_LIM, _Z_LIM)
    return m2 - m1 * m1
