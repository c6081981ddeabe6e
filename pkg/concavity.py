#!/usr/bin/env python3
"""
Concavity Diagnostics Module
The functions h_nu and l_nu that decide log-concavity of the noncentral chi density,
its closed-form log curvature, the statistic f'(t) / (t f(t)), a unimodal shape
classifier and a sign scanner for h_nu / l_nu.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from config import (
    SCAN_MIN_POINTS,
    SCAN_XTOL,
    SHAPE_CURVATURE_SLACK,
    SHAPE_GRID_POINTS,
    SHAPE_MIN_POINTS,
    SHAPE_T_MIN,
)
from errors import DomainError, GridTooCoarseError
from marcum import MarcumPoint, log_integrand
from special_fn import check_finite, ratio_derivative_unchecked, ratio_unchecked

logger = logging.getLogger(__name__)

_EPS = float(np.finfo(float).eps)
_Sampler = Callable[[float, float], Tuple[float, float]]


class Phase(str, Enum):
    """Log-concavity verdict for one phase of a unimodal density."""

    YES = "yes"
    NO = "no"
    EMPTY = "empty-phase"


class Diagnostic(str, Enum):
    H = "h"
    L = "l"


@dataclass(frozen=True)
class ShapeReport:
    """
    Rise / decline structure of the noncentral chi density on a grid.

    mode_location is None when the density declines from t = 0 (boundary mode);
    worst_violation is (most positive second difference of log f, its t).
    """

    mode_location: Optional[float]
    rising_logconcave: Phase
    declining_logconcave: Phase
    worst_violation: Tuple[float, float]

    @property
    def mode_at_boundary(self) -> bool:
        return self.mode_location is None

    def describe(self) -> str:
        mode = "boundary" if self.mode_at_boundary else f"{self.mode_location:.8g}"
        value, where = self.worst_violation
        return (f"mode={mode} rising_logconcave={self.rising_logconcave.value} "
                f"declining_logconcave={self.declining_logconcave.value} "
                f"worst_second_difference={value:.8g}@t={where:.8g}")


@dataclass(frozen=True)
class Crossing:
    t: float
    direction: str  # "-+" or "+-"


@dataclass(frozen=True)
class CrossingReport:
    """Sign changes of a scanned diagnostic, ordered by t."""

    crossings: List[Crossing] = field(default_factory=list)
    positive_found: bool = False
    witness: Tuple[float, float] = (math.nan, -math.inf)


def _check_nu_t(nu, t) -> Tuple[float, float]:
    nu = check_finite('nu', nu)
    t = check_finite('t', t)
    if nu <= 0.0:
        raise DomainError('nu', f"must be positive, got {nu}")
    if t <= 0.0:
        raise DomainError('t', f"must be positive, got {t}")
    return nu, t


def _h_with_err(nu: float, t: float) -> Tuple[float, float]:
    """h_nu(t) from the defining form, with an absolute rounding bound."""
    if nu == 0.5:
        # every (2nu-1) term vanishes: h_{1/2} = r'_{1/2} = sech^2 t
        dr = ratio_derivative_unchecked(nu, t)
        return dr.value, dr.abs_err
    r = ratio_unchecked(nu, t)
    c = 2.0 * nu - 1.0
    slope = c / t
    value = (1.0 - r.value) * (1.0 + r.value) - slope * r.value - c / (t * t)
    abs_err = ((abs(slope) + 2.0 * r.value) * r.abs_err
               + 4 * _EPS * (1.0 + abs(slope) * r.value + abs(c) / (t * t)))
    return value, abs_err


def h(nu: float, t: float) -> float:
    """
    h_nu(t) = 1 - (2nu-1)/t^2 - (2nu-1)/t r_nu(t) - r_nu(t)^2.

    The density is log-concave for every a >= 0 exactly when h_nu <= 0 on (0, inf).
    Defined for every nu > 0.
    """
    nu, t = _check_nu_t(nu, t)
    return _h_with_err(nu, t)[0]


def h_alt(nu: float, t: float) -> float:
    """h_nu(t) written as r'_nu(t) - (2nu-1)/t^2."""
    nu, t = _check_nu_t(nu, t)
    return ratio_derivative_unchecked(nu, t).value - (2.0 * nu - 1.0) / (t * t)


def _l_with_err(nu: float, t: float) -> Tuple[float, float]:
    r = ratio_unchecked(nu, t)
    shift = (3.0 - 2.0 * nu) / t
    return r.value - shift, r.abs_err + 2 * _EPS * (r.value + abs(shift))


def l(nu: float, t: float) -> float:  # noqa: E741
    """l_nu(t) = r_nu(t) - (3 - 2nu)/t."""
    nu, t = _check_nu_t(nu, t)
    return _l_with_err(nu, t)[0]



def log_density_curvature(point: MarcumPoint, t: float) -> float:
    """
    Second derivative of log f at t, in closed form:
    -(2nu-1)/t^2 - 1 + a^2 r'_nu(at). Equals a^2 h_nu(at) - 1.

    Args:
        point (MarcumPoint): Parameters with a > 0; point.b is ignored
        t (float): Evaluation point, t > 0

    Returns:
        float: d^2/dt^2 log f(t)
    """
    _, t = _check_nu_t(point.nu, t)
    if point.a <= 0.0:
        raise DomainError('a', f"must be positive, got {point.a}")
    nu, a = point.nu, point.a
    return -(2.0 * nu - 1.0) / (t * t) - 1.0 + a * a * ratio_derivative_unchecked(nu, a * t).value


def lemma2_statistic(point: MarcumPoint, t: float) -> float:
    """
    psi(t) = f'(t) / (t f(t)) = (2nu-1)/t^2 - 1 + a r_nu(at)/t.

    Positive while the density rises, negative while it declines; decreasing in t
    for nu >= 1/2.
    """
    _, t = _check_nu_t(point.nu, t)
    nu, a = point.nu, point.a
    value = (2.0 * nu - 1.0) / (t * t) - 1.0
    if a > 0.0:
        value += a * ratio_unchecked(nu, a * t).value / t
    return value


def default_t_grid(a: float) -> np.ndarray:
    """512 log-spaced points over [1e-3, max(50, 3a + 30)]."""
    return np.geomspace(SHAPE_T_MIN, max(50.0, 3.0 * a + 30.0), SHAPE_GRID_POINTS)


def log_density_second_difference(point: MarcumPoint, t: float) -> float:
    """Central second difference of log f at t with step max(1e-4, 1e-4 t)."""
    step = max(1e-4, 1e-4 * t)
    if t - step <= 0.0:
        raise DomainError('t', f"too close to 0 for a second difference, got {t}")
    nu, a = point.nu, point.a
    return (log_integrand(nu, a, t + step) - 2.0 * log_integrand(nu, a, t)
            + log_integrand(nu, a, t - step)) / (step * step)


def _phase_verdict(point: MarcumPoint, ts: Sequence[float]) -> Tuple[Phase, float, float]:
    if len(ts) == 0:
        return Phase.EMPTY, -math.inf, math.nan
    second = [log_density_second_difference(point, t) for t in ts]
    worst = int(np.argmax(second))
    verdict = Phase.YES if second[worst] <= SHAPE_CURVATURE_SLACK else Phase.NO
    return verdict, second[worst], float(ts[worst])


def classify_shape(point: MarcumPoint, t_grid: Optional[Sequence[float]] = None) -> ShapeReport:
    """
    Locate the mode from the sign change of psi and test log-concavity of each phase.

    Args:
        point (MarcumPoint): Parameters; point.b is ignored
        t_grid: Increasing positive grid with at least 64 points spanning [0.01, a + 20];
            defaults to default_t_grid(a)

    Returns:
        ShapeReport: mode, phase verdicts and the worst second difference

    Raises:
        DomainError: grid does not meet the coverage requirement, or nu < 1/2 with a > 0
            (the density falls from an infinite value at 0 to a dip before its mode, so it
            is not unimodal)
        GridTooCoarseError: psi changes sign more than once, or never turns negative
    """
    if point.nu < 0.5 and point.a > 0.0:
        raise DomainError('nu', f"density is not unimodal for nu < 1/2 with a > 0, got nu={point.nu}")
    grid = default_t_grid(point.a) if t_grid is None else np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or len(grid) < SHAPE_MIN_POINTS:
        raise DomainError('t_grid', f"needs at least {SHAPE_MIN_POINTS} points")
    if grid[0] <= 0.0 or np.any(np.diff(grid) <= 0.0):
        raise DomainError('t_grid', "must be positive and strictly increasing")
    if grid[0] > 0.01 or grid[-1] < point.a + 20.0:
        raise DomainError('t_grid', f"must span [0.01, {point.a + 20.0:g}]")

    psi = np.array([lemma2_statistic(point, t) for t in grid])
    signs = np.sign(psi)
    nonzero = np.flatnonzero(signs)
    changes = [(i, j) for i, j in zip(nonzero[:-1], nonzero[1:]) if signs[i] != signs[j]]
    if len(changes) > 1:
        raise GridTooCoarseError(
            f"psi changes sign {len(changes)} times for {point}; expected at most one"
        )

    if changes:
        i, j = changes[0]
        if psi[i] < 0.0:
            raise GridTooCoarseError(f"density for {point} declines then rises on the grid")
        mode = optimize.brentq(lambda t: lemma2_statistic(point, t), grid[i], grid[j], xtol=SCAN_XTOL)
    elif psi[nonzero[0]] > 0.0:
        raise GridTooCoarseError(f"density for {point} still rises at t={grid[-1]:g}")
    else:
        mode = None

    usable = grid[grid - np.maximum(1e-4, 1e-4 * grid) > 0.0]
    if mode is None:
        rising_ts, declining_ts = usable[:0], usable
    else:
        rising_ts, declining_ts = usable[usable < mode], usable[usable > mode]

    rising, rise_worst, rise_at = _phase_verdict(point, rising_ts)
    declining, decl_worst, decl_at = _phase_verdict(point, declining_ts)
    worst = (rise_worst, rise_at) if rise_worst > decl_worst else (decl_worst, decl_at)
    logger.debug("shape of %s: mode=%s rising=%s declining=%s", point, mode, rising.value, declining.value)
    return ShapeReport(mode, rising, declining, worst)


def _diagnostic(fn_id: Union[Diagnostic, str]) -> Tuple[Diagnostic, _Sampler]:
    try:
        fn_id = Diagnostic(fn_id)
    except ValueError:
        raise DomainError('fn_id', f"must be 'h' or 'l', got {fn_id!r}") from None
    return fn_id, (_h_with_err if fn_id is Diagnostic.H else _l_with_err)


def scan_sign(fn_id: Union[Diagnostic, str], nu: float,
              t_range: Tuple[float, float] = (1e-3, 1e3), n: int = 2000) -> CrossingReport:
    """
    Sample h_nu or l_nu on a log-spaced grid, bisect every bracketed sign change and
    report whether the diagnostic takes a positive value.

    Samples within their rounding bound of zero carry no sign: they neither open a
    bracket nor count as positive.

    Args:
        fn_id: 'h' or 'l'
        nu (float): Order, nu > 0
        t_range (tuple): (t_lo, t_hi) with 0 < t_lo < t_hi
        n (int): Number of samples, at least 100

    Returns:
        CrossingReport: crossings ordered by t, positive flag and the most positive point
    """
    fn_id, fn = _diagnostic(fn_id)
    nu = check_finite('nu', nu)
    if nu <= 0.0:
        raise DomainError('nu', f"must be positive, got {nu}")
    t_lo, t_hi = (check_finite('t_range', v) for v in t_range)
    if not 0.0 < t_lo < t_hi:
        raise DomainError('t_range', f"needs 0 < t_lo < t_hi, got ({t_lo}, {t_hi})")
    if n < SCAN_MIN_POINTS:
        raise DomainError('n', f"must be at least {SCAN_MIN_POINTS}, got {n}")

    grid = np.geomspace(t_lo, t_hi, int(n))
    samples = np.array([fn(nu, t) for t in grid])
    values, errs = samples[:, 0], samples[:, 1]
    signs = np.where(np.abs(values) <= errs, 0.0, np.sign(values))

    def target(t):
        return fn(nu, t)[0]

    nonzero = np.flatnonzero(signs)
    brackets = [(grid[i], grid[j], signs[i] < 0.0)
                for i, j in zip(nonzero[:-1], nonzero[1:]) if signs[i] != signs[j]]

    best = int(np.argmax(values))
    witness = (float(grid[best]), float(values[best]))
    positive = bool(signs[best] > 0.0)
    if not positive:
        # a narrow positive bump can sit between samples
        lo = grid[max(best - 1, 0)]
        hi = grid[min(best + 1, len(grid) - 1)]
        res = optimize.minimize_scalar(lambda t: -target(t), bounds=(lo, hi), method='bounded',
                                       options={'xatol': SCAN_XTOL})
        peak_value, peak_err = fn(nu, float(res.x))
        if peak_value > witness[1]:
            witness = (float(res.x), float(peak_value))
        if peak_value > peak_err:
            positive = True
            peak = witness[0]
            if lo < peak and target(lo) < 0.0:
                brackets.append((lo, peak, True))
            if peak < hi and target(hi) < 0.0:
                brackets.append((peak, hi, False))

    crossings = []
    for lo, hi, rising in sorted(brackets):
        root = optimize.brentq(target, lo, hi, xtol=SCAN_XTOL)
        crossings.append(Crossing(float(root), "-+" if rising else "+-"))
    logger.debug("scan_sign(%s, nu=%s): %d crossings, max %.3g at t=%.6g",
                 fn_id.value, nu, len(crossings), witness[1], witness[0])
    return CrossingReport(crossings, positive, witness)
