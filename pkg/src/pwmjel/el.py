"""One-dimensional empirical likelihood for a mean.

Given points z_1..z_m and a hypothesized mean mu, the EL weights are
``p_k = 1 / (m * (1 + lam * (z_k - mu)))`` where the multiplier lam solves

    (1/m) * sum_k (z_k - mu) / (1 + lam * (z_k - mu)) = 0.

The score is strictly decreasing in lam on the feasibility interval
``(-1/(max z - mu), 1/(mu - min z))``, so the root is unique whenever mu
lies strictly inside the hull of the points (Owen 1988).  The log ratio
``l = -sum_k log(1 + lam * (z_k - mu))`` is never positive and ``-2 l`` is
the usual chi-square calibrated statistic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, HullError, PwmInputError

__all__ = ["ELSolution", "hull_contains", "solve_lambda", "neg2_log_ratio"]

# Relative shrink applied to the feasibility endpoints before bracketing.
_EDGE_MARGIN = 1e-12


@dataclass(frozen=True)
class ELSolution:
    """Solved multiplier with its weights and log likelihood ratio."""

    lam: float
    weights: np.ndarray
    log_ratio: float
    iterations: int
    converged: bool


def _validate_points(z, mu):
    z = np.asarray(z, dtype=float)
    if z.ndim != 1:
        raise PwmInputError("EL points must be one-dimensional")
    if z.size < 2:
        raise PwmInputError("EL needs at least two points")
    if not np.all(np.isfinite(z)):
        raise PwmInputError("EL points contain non-finite values")
    if not np.isfinite(mu):
        raise PwmInputError("hypothesized mean must be finite")
    return z, float(mu)


def hull_contains(z, mu) -> bool:
    """True when mu lies strictly between min(z) and max(z)."""
    z, mu = _validate_points(z, mu)
    return bool(z.min() < mu < z.max())


def _scale(z, mu):
    return max(1.0, abs(mu), float(np.max(np.abs(z - mu))))


def solve_lambda(z, mu, tol: float = 1e-10, max_iter: int = 100) -> ELSolution:
    """Solve the EL score equation for the multiplier.

    Newton iteration started at lam = 0, safeguarded by bisection against
    the feasibility bracket, which keeps every iterate on the side where
    all weights stay positive.  Convergence means the score magnitude fell
    below ``tol`` times ``max(1, |mu|, max|z - mu|)``.

    Raises
    ------
    HullError
        If mu is not strictly inside the hull of z (a constant z fails for
        every mu, including its own value).
    ConvergenceError
        If the budget runs out; the best iterate rides along as ``best``.
    """
    z, mu = _validate_points(z, mu)
    d = z - mu
    dmin, dmax = float(d.min()), float(d.max())
    if not (dmin < 0.0 < dmax):
        raise HullError(
            f"mean {mu} is not interior to the sample hull [{z.min()}, {z.max()}]"
        )
    m = z.size
    scale = _scale(z, mu)
    gtol = tol * scale

    lo = (-1.0 / dmax) * (1.0 - _EDGE_MARGIN)
    hi = (-1.0 / dmin) * (1.0 - _EDGE_MARGIN)

    def score_and_slope(lam):
        w = 1.0 + lam * d
        g = float(np.mean(d / w))
        gp = -float(np.mean((d / w) ** 2))
        return g, gp

    lam = 0.0
    a, b = lo, hi  # invariant: score(a) > 0 > score(b)
    g, gp = score_and_slope(lam)
    iterations = 0
    converged = abs(g) <= gtol
    while not converged and iterations < max_iter:
        if g > 0.0:
            a = lam
        else:
            b = lam
        step = lam - g / gp
        lam = step if a < step < b else 0.5 * (a + b)
        g, gp = score_and_slope(lam)
        iterations += 1
        converged = abs(g) <= gtol

    w = 1.0 / (m * (1.0 + lam * d))
    # rounding can push the ratio epsilon-positive at lam ~ 0
    log_ratio = min(0.0, -float(np.sum(np.log1p(lam * d))))
    solution = ELSolution(
        lam=float(lam),
        weights=w,
        log_ratio=log_ratio,
        iterations=iterations,
        converged=converged,
    )
    if not converged:
        raise ConvergenceError(
            f"EL multiplier did not converge in {max_iter} iterations "
            f"(|score| = {abs(g):.3e}, tol = {gtol:.3e})",
            best=solution,
        )
    return solution


def neg2_log_ratio(z, mu, tol: float = 1e-10, max_iter: int = 100) -> float:
    """Minus twice the log empirical likelihood ratio for mean mu.

    Returns ``math.inf`` when mu falls outside the open hull of z, which is
    the natural limit of the statistic and lets interval searches treat the
    hull boundary as an infinitely rejected point.
    """
    z, mu = _validate_points(z, mu)
    if not (z.min() < mu < z.max()):
        return math.inf
    sol = solve_lambda(z, mu, tol=tol, max_iter=max_iter)
    return max(0.0, -2.0 * sol.log_ratio)
