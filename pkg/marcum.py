#!/usr/bin/env python3
"""
Marcum Q Module
Evaluates the generalized Marcum Q function Q_nu(a, b) and its complement by
independent methods: the a = 0 incomplete-gamma closed form, the Poisson mixture
of regularized incomplete gamma terms (noncentral chi-square), and quadrature of
the noncentral chi density.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy import integrate, special

from config import (
    DEFAULT_TOL,
    MAX_TOL,
    MIN_TOL,
    POISSON_AUTO_MAX_LAMBDA,
    POISSON_INITIAL_HALF_WIDTH,
    POISSON_MAX_TERMS,
    QUAD_EPSREL,
    QUAD_LIMIT,
    QUADRATURE_CUTOFF,
    TAIL_FLOOR,
)
from errors import ConvergenceError, DomainError
from special_fn import EvalResult, Method, check_finite, log_bessel_i_scaled

logger = logging.getLogger(__name__)

_EPS = 2.220446049250313e-16


class MethodChoice(str, Enum):
    """Evaluator selection for marcum_q / marcum_cdf."""

    AUTO = "auto"
    QUADRATURE = "quadrature"
    POISSON_SERIES = "poisson_series"
    GAMMA_CLOSED_FORM = "gamma_closed_form"


@dataclass(frozen=True)
class MarcumPoint:
    """Parameter triple (nu, a, b) with nu > 0, a >= 0, b >= 0."""

    nu: float
    a: float
    b: float

    def __post_init__(self):
        for name in ('nu', 'a', 'b'):
            object.__setattr__(self, name, check_finite(name, getattr(self, name)))
        if self.nu <= 0.0:
            raise DomainError('nu', f"must be positive, got {self.nu}")
        if self.a < 0.0:
            raise DomainError('a', f"must be nonnegative, got {self.a}")
        if self.b < 0.0:
            raise DomainError('b', f"must be nonnegative, got {self.b}")


def log_integrand(nu: float, a: float, t: float) -> float:
    """log f(t) for the noncentral chi density; no validation."""
    if a == 0.0 or a * t == 0.0:
        # a -> 0 limit: t^{2nu-1} e^{-t^2/2} / (2^{nu-1} Gamma(nu))
        return ((2.0 * nu - 1.0) * math.log(t) - 0.5 * t * t
                - (nu - 1.0) * math.log(2.0) - math.lgamma(nu))
    return (nu * math.log(t) - (nu - 1.0) * math.log(a) - 0.5 * (t - a) ** 2
            + log_bessel_i_scaled(nu - 1.0, a * t))


def integrand_f(point: MarcumPoint, t: float, log_scale: bool = False) -> float:
    """
    Integrand of the Marcum Q integral, i.e. the noncentral chi density at t.

    Args:
        point (MarcumPoint): Parameters; point.b is ignored
        t (float): Evaluation point, t > 0
        log_scale (bool): Return log f(t)

    Returns:
        float: f(t), or log f(t) when log_scale is set
    """
    t = check_finite('t', t)
    if t <= 0.0:
        raise DomainError('t', f"must be positive, got {t}")
    log_value = log_integrand(point.nu, point.a, t)
    return log_value if log_scale else math.exp(log_value)


def _check_tol(tol) -> float:
    tol = check_finite('tol', tol)
    if not MIN_TOL <= tol <= MAX_TOL:
        raise DomainError('tol', f"must lie in [{MIN_TOL:g}, {MAX_TOL:g}], got {tol:g}")
    return tol


def _coerce_method(method: Union[MethodChoice, str]) -> MethodChoice:
    try:
        return MethodChoice(method)
    except ValueError:
        choices = ', '.join(m.value for m in MethodChoice)
        raise DomainError('method', f"unknown method {method!r} (choose from {choices})") from None


def _gamma_closed_form(nu: float, b: float, upper: bool) -> EvalResult:
    x = 0.5 * b * b
    value = float(special.gammaincc(nu, x) if upper else special.gammainc(nu, x))
    return EvalResult(value, 32 * _EPS * value, Method.CLOSED_FORM)


def _poisson_mixture(nu: float, a: float, b: float, upper: bool, tol: float) -> EvalResult:
    """
    Sum Poisson(a^2/2) weights times regularized incomplete gamma terms, widening a
    window around the modal index until the neglected part is below tol/10 of the sum.
    """
    lam = 0.5 * a * a
    x = 0.5 * b * b
    mode = int(math.floor(lam))
    half = POISSON_INITIAL_HALF_WIDTH
    while True:
        lo = max(0, mode - half)
        hi = mode + half
        k = np.arange(lo, hi + 1, dtype=float)
        weights = np.exp(special.xlogy(k, lam) - lam - special.gammaln(k + 1.0))
        if upper:
            terms = special.gammaincc(nu + k, x)
        else:
            terms = special.gammainc(nu + k, x)
        total = math.fsum(weights * terms)
        below = float(special.pdtr(lo - 1, lam)) if lo > 0 else 0.0
        above = float(special.pdtrc(hi, lam))
        # upper-gamma terms increase with k, lower-gamma terms decrease
        if upper:
            bound = below * terms[0] + above
        else:
            bound = below + above * terms[-1]
        if bound <= 0.1 * tol * max(total, TAIL_FLOOR):
            break
        if hi - lo + 1 >= POISSON_MAX_TERMS:
            raise ConvergenceError(
                f"Poisson window for nu={nu}, a={a}, b={b} exceeded {POISSON_MAX_TERMS} terms"
            )
        half *= 2
    logger.debug("Poisson mixture nu=%s a=%s b=%s: window [%d, %d]", nu, a, b, lo, hi)
    value = min(max(total, 0.0), 1.0)
    return EvalResult(value, bound + value * len(k) * _EPS, Method.SERIES)


def _quadrature(nu: float, a: float, b: float, upper: bool, tol: float) -> EvalResult:
    """Integrate exp(log f) over [b, max(a, b) + cutoff] (upper) or [0, b] (lower)."""

    def density(t):
        if t <= 0.0:
            return 0.0
        return math.exp(log_integrand(nu, a, t))

    if upper:
        lo, hi = b, max(a, b) + QUADRATURE_CUTOFF
    else:
        lo, hi = 0.0, b
    peaks = [a, math.sqrt(max(2.0 * nu - 1.0, 0.0))]
    points = sorted({p for p in peaks if lo < p < hi}) or None

    result = integrate.quad(
        density, lo, hi, points=points, epsabs=0.1 * tol, epsrel=QUAD_EPSREL,
        limit=QUAD_LIMIT, full_output=1,
    )
    if len(result) > 3:
        raise ConvergenceError(f"quadrature for nu={nu}, a={a}, b={b} failed: {result[3]}")
    value, err = result[0], result[1]

    tail = 0.0
    if upper:
        # Gaussian-type decay beyond hi: tail <= f(hi) / (hi - a) up to a polynomial factor
        tail = 2.0 * density(hi) / max(hi - a, 1.0)
    abs_err = err + tail
    if abs_err > tol:
        raise ConvergenceError(
            f"quadrature for nu={nu}, a={a}, b={b} reached {abs_err:.3g} > tol {tol:.3g}"
        )
    value = min(max(value, 0.0), 1.0)
    return EvalResult(value, abs_err, Method.QUADRATURE)


def _evaluate(point: MarcumPoint, method, tol, upper: bool) -> EvalResult:
    tol = _check_tol(tol)
    method = _coerce_method(method)
    if method is MethodChoice.GAMMA_CLOSED_FORM and point.a != 0.0:
        raise DomainError('method', "gamma_closed_form requires a = 0")
    if point.b == 0.0:
        return EvalResult(1.0 if upper else 0.0, 0.0, Method.CLOSED_FORM)

    if method is MethodChoice.AUTO:
        if point.a == 0.0:
            method = MethodChoice.GAMMA_CLOSED_FORM
        elif 0.5 * point.a * point.a <= POISSON_AUTO_MAX_LAMBDA:
            method = MethodChoice.POISSON_SERIES
        else:
            method = MethodChoice.QUADRATURE
    logger.debug("evaluating %s with %s", point, method.value)

    if method is MethodChoice.GAMMA_CLOSED_FORM:
        return _gamma_closed_form(point.nu, point.b, upper)
    if method is MethodChoice.POISSON_SERIES:
        return _poisson_mixture(point.nu, point.a, point.b, upper, tol)
    return _quadrature(point.nu, point.a, point.b, upper, tol)


def marcum_q(point: MarcumPoint, method: Union[MethodChoice, str] = MethodChoice.AUTO,
             tol: float = DEFAULT_TOL) -> EvalResult:
    """
    Generalized Marcum Q function Q_nu(a, b).

    Args:
        point (MarcumPoint): (nu, a, b)
        method (MethodChoice): auto, quadrature, poisson_series or gamma_closed_form
        tol (float): Absolute error target in [1e-14, 1e-4]

    Returns:
        EvalResult: Q_nu(a, b) in [0, 1]

    Raises:
        DomainError: invalid tolerance or method
        ConvergenceError: tol not met within the iteration caps
    """
    return _evaluate(point, method, tol, upper=True)


def marcum_cdf(point: MarcumPoint, method: Union[MethodChoice, str] = MethodChoice.AUTO,
               tol: float = DEFAULT_TOL) -> EvalResult:
    """1 - Q_nu(a, b), computed directly so it keeps relative accuracy near b = 0."""
    return _evaluate(point, method, tol, upper=False)


def rice_survival(a: float, b: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """Survival function Q_1(a, b) of the Rice distribution."""
    return marcum_q(MarcumPoint(1.0, a, b), MethodChoice.AUTO, tol)


def _chi2_point(x, dof, nc) -> MarcumPoint:
    x = check_finite('x', x)
    dof = check_finite('dof', dof)
    nc = check_finite('nc', nc)
    if x < 0.0:
        raise DomainError('x', f"must be nonnegative, got {x}")
    if dof <= 0.0:
        raise DomainError('dof', f"must be positive, got {dof}")
    if nc < 0.0:
        raise DomainError('nc', f"must be nonnegative, got {nc}")
    return MarcumPoint(0.5 * dof, math.sqrt(nc), math.sqrt(x))


def noncentral_chi2_cdf(x: float, dof: float, nc: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """CDF of a noncentral chi-square variable: 1 - Q_{dof/2}(sqrt(nc), sqrt(x))."""
    return marcum_cdf(_chi2_point(x, dof, nc), MethodChoice.AUTO, tol)


def noncentral_chi2_sf(x: float, dof: float, nc: float, tol: float = DEFAULT_TOL) -> EvalResult:
    """Survival function of a noncentral chi-square variable: Q_{dof/2}(sqrt(nc), sqrt(x))."""
    return marcum_q(_chi2_point(x, dof, nc), MethodChoice.AUTO, tol)
