#!/usr/bin/env python3
"""
Critical Order Module
Finds nu_0, the unique root in (1/2, 3/2) of
G(nu) = r_nu(sqrt(5 - 2nu)) - (3 - 2nu) / sqrt(5 - 2nu),
above which the noncentral chi density is log-concave for every a >= 0.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

from config import NU0_MIN_TOL, NU0_SECANT_WIDTH, PUBLISHED_NU0, PUBLISHED_NU0_GATE
from errors import BracketError, ConvergenceError, DomainError
from special_fn import check_finite, ratio

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RootResult:
    """Root of G with its residual |G(root)|, iteration count and final bracket (lo, hi)."""

    root: float
    residual: float
    iterations: int
    bracket: Tuple[float, float]

    @property
    def published_gap(self) -> float:
        """Distance to the published value 0.78449776."""
        return abs(self.root - PUBLISHED_NU0)


def critical_order_fn(nu: float) -> float:
    """
    G(nu) = r_nu(sqrt(5 - 2nu)) - (3 - 2nu) / sqrt(5 - 2nu) on [1/2, 3/2].

    Args:
        nu (float): Order in [1/2, 3/2]

    Returns:
        float: G(nu); strictly increasing, negative at 1/2 and positive at 3/2
    """
    nu = check_finite('nu', nu)
    if not 0.5 <= nu <= 1.5:
        raise DomainError('nu', f"must lie in [1/2, 3/2], got {nu}")
    s = math.sqrt(5.0 - 2.0 * nu)
    return ratio(nu, s).value - (3.0 - 2.0 * nu) / s


def solve_nu0(tol: float = 1e-12, max_iter: int = 200,
              bracket: Tuple[float, float] = (0.5, 1.5)) -> RootResult:
    """
    Bisection down to a narrow bracket, then bracket-safeguarded secant steps.

    Args:
        tol (float): Residual target |G(root)| <= tol, at least 1e-13
        max_iter (int): Iteration cap
        bracket (tuple): Starting bracket inside [1/2, 3/2]

    Returns:
        RootResult: root, residual, iterations and the bracket that still encloses the root

    Raises:
        DomainError: tol below 1e-13 or a bracket outside [1/2, 3/2]
        BracketError: G does not change sign across the bracket
        ConvergenceError: max_iter reached first
    """
    tol = check_finite('tol', tol)
    if tol < NU0_MIN_TOL:
        raise DomainError('tol', f"must be at least {NU0_MIN_TOL:g}, got {tol:g}")
    if max_iter < 1:
        raise DomainError('max_iter', f"must be positive, got {max_iter}")
    lo, hi = (check_finite('bracket', v) for v in bracket)
    if not 0.5 <= lo < hi <= 1.5:
        raise DomainError('bracket', f"needs 1/2 <= lo < hi <= 3/2, got ({lo}, {hi})")

    g_lo, g_hi = critical_order_fn(lo), critical_order_fn(hi)
    if g_lo * g_hi >= 0.0:
        raise BracketError(f"G({lo})={g_lo:.3g} and G({hi})={g_hi:.3g} do not straddle zero")

    # stop well inside tol so two runs from different brackets agree to ~tol
    target = 0.1 * tol
    prev = cur = None
    for iteration in range(1, max_iter + 1):
        x = 0.5 * (lo + hi)
        if hi - lo <= NU0_SECANT_WIDTH:
            if prev is None:
                prev, cur = (lo, g_lo), (hi, g_hi)
            (x0, g0), (x1, g1) = prev, cur
            if g1 != g0:
                step = x1 - g1 * (x1 - x0) / (g1 - g0)
                if lo < step < hi:
                    x = step
        gx = critical_order_fn(x)
        if abs(gx) <= target or (hi - lo <= 4e-16 * hi and abs(gx) <= tol):
            result = RootResult(x, abs(gx), iteration, (lo, hi))
            logger.info("✅ nu_0 = %.12f after %d iterations (|G| = %.2e)", x, iteration, abs(gx))
            if tol <= PUBLISHED_NU0_GATE and result.published_gap > PUBLISHED_NU0_GATE:
                logger.warning("⚠️ nu_0 = %.12f is %.2e away from %s", x, result.published_gap, PUBLISHED_NU0)
            return result
        if prev is not None:
            prev, cur = cur, (x, gx)
        if (gx < 0.0) == (g_lo < 0.0):
            lo, g_lo = x, gx
        else:
            hi, g_hi = x, gx

    raise ConvergenceError(f"nu_0 not found to |G| <= {tol:g} within {max_iter} iterations")
