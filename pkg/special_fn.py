#!/usr/bin/env python3
"""
Special Function Module
Modified Bessel function of the first kind, the Bessel ratio r_nu(t) = I_nu(t) / I_{nu-1}(t),
its derivative, and an integral-representation oracle for r_nu(t) / t.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from scipy import integrate

from config import (
    BESSEL_WINDOW,
    CF_BASE_ITERATIONS,
    CF_REL_TOL,
    QUAD_EPSREL,
    QUAD_LIMIT,
    QUAD_RETRY_EPSREL,
    SERIES_MAX_TERMS,
    SERIES_REL_CUTOFF,
    SERIES_SWITCH,
    SMALL_T,
)
from errors import BesselOverflowError, ConvergenceError, DomainError

logger = logging.getLogger(__name__)

_EPS = 2.220446049250313e-16
_LOG_MAX = math.log(1.7976931348623157e308)
_LENTZ_TINY = 1e-300
_ONE_BELOW = 1.0 - _EPS / 2.0
_TINY = 5e-324


class Method(str, Enum):
    """How a value was obtained."""

    SERIES = "series"
    CONTINUED_FRACTION = "continued_fraction"
    QUADRATURE = "quadrature"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class EvalResult:
    """A numerical value with its estimated absolute error and the method used."""

    value: float
    abs_err: float
    method: Method

    def __post_init__(self):
        if not self.abs_err >= 0.0:
            raise ValueError(f"abs_err must be nonnegative, got {self.abs_err}")


def check_finite(name: str, value) -> float:
    """Coerce to float and reject NaN / infinity, naming the parameter."""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DomainError(name, f"expected a real number, got {value!r}") from None
    if not math.isfinite(value):
        raise DomainError(name, f"must be finite, got {value}")
    return value


def _series_log(order: float, t: float) -> Tuple[float, float]:
    """
    Log of the power series for I_order(t), t > 0, order > -1.

    Returns:
        tuple: (log I_order(t), relative error estimate)
    """
    log_lead = order * math.log(0.5 * t) - math.lgamma(order + 1.0)
    q = 0.25 * t * t
    total = 1.0
    term = 1.0
    for k in range(1, SERIES_MAX_TERMS + 1):
        term *= q / (k * (order + k))
        total += term
        if term < SERIES_REL_CUTOFF * total:
            break
    else:
        raise ConvergenceError(
            f"I_{order}({t}) series did not converge in {SERIES_MAX_TERMS} terms"
        )
    return log_lead + math.log(total), (k + 4) * _EPS


def _integral_log_scaled(order: float, t: float) -> Tuple[float, float]:
    """
    log(e^{-t} I_order(t)) from the Poisson integral, order > -1/2.

    The exponential weight e^{t(s-1)} confines the mass to a window of width
    ~1/t below s = 1; the algebraic factor (1-s)^(order-1/2) is the quadrature
    weight, so the endpoint singularity never reaches the integrand.
    """
    alpha = order - 0.5
    width = (BESSEL_WINDOW + 2.0 * abs(order)) / t
    if width < 2.0:
        lower = 1.0 - width

        def integrand(s):
            return math.exp(t * (s - 1.0)) * (1.0 + s) ** alpha

        wvar = (0.0, alpha)
    else:
        lower = -1.0

        def integrand(s):
            return math.exp(t * (s - 1.0))

        wvar = (alpha, alpha)

    def attempt(epsrel):
        return integrate.quad(
            integrand, lower, 1.0, weight='alg', wvar=wvar,
            epsabs=0.0, epsrel=epsrel, limit=QUAD_LIMIT, full_output=1,
        )

    result = attempt(QUAD_EPSREL)
    if len(result) > 3:
        logger.debug("I_%s(%s): quadrature reported %r, retrying at epsrel=%g",
                     order, t, result[3], QUAD_RETRY_EPSREL)
        result = attempt(QUAD_RETRY_EPSREL)
    # QUADPACK's algebraic-weight routine can return a negative error estimate
    value, err = result[0], abs(result[1])
    if len(result) > 3 and not err <= QUAD_RETRY_EPSREL * abs(value):
        raise ConvergenceError(f"I_{order}({t}) integral failed: {result[3]}")
    if not value > 0.0:
        raise ConvergenceError(f"I_{order}({t}) integral evaluated to {value}")
    log_prefactor = order * math.log(0.5 * t) - 0.5 * math.log(math.pi) - math.lgamma(order + 0.5)
    return log_prefactor + math.log(value), err / value + 8 * _EPS


def _half_order_log_scaled(t: float) -> float:
    # I_{-1/2}(t) = sqrt(2 / (pi t)) cosh t
    return 0.5 * math.log(2.0 / (math.pi * t)) + math.log1p(math.exp(-2.0 * t)) - math.log(2.0)


def _scaled_log(order: float, t: float) -> Tuple[float, float, Method]:
    """log(e^{-t} I_order(t)) for t > 0 and order > -1, with error and method."""
    if order == -0.5:
        return _half_order_log_scaled(t), 4 * _EPS, Method.CLOSED_FORM
    if t <= SERIES_SWITCH:
        log_value, rel_err = _series_log(order, t)
        return log_value - t, rel_err + t * _EPS, Method.SERIES
    if order > -0.5:
        log_value, rel_err = _integral_log_scaled(order, t)
        return log_value, rel_err, Method.QUADRATURE
    # -1 < order < -1/2: I_mu = I_{mu+2} + (2(mu+1)/t) I_{mu+1}, both terms positive
    log_next, err_next, _ = _scaled_log(order + 1.0, t)
    log_next2, err_next2, method = _scaled_log(order + 2.0, t)
    combined = math.exp(log_next2) + 2.0 * (order + 1.0) / t * math.exp(log_next)
    return math.log(combined), max(err_next, err_next2) + 4 * _EPS, method


def log_bessel_i_scaled(order: float, t: float) -> float:
    """
    log(e^{-t} I_order(t)) for order > -1 and t > 0.

    Wider than bessel_i on purpose: the Marcum integrand needs I_{nu-1} for
    every nu > 0, which reaches orders below -1/2.
    """
    order = check_finite('order', order)
    t = check_finite('t', t)
    if order <= -1.0:
        raise DomainError('order', f"must exceed -1, got {order}")
    if t <= 0.0:
        raise DomainError('t', f"must be positive, got {t}")
    return _scaled_log(order, t)[0]


def bessel_i(nu: float, t: float, scaled: bool = False) -> EvalResult:
    """
    Modified Bessel function of the first kind.

    Args:
        nu (float): Order, nu >= -1/2
        t (float): Argument, t >= 0
        scaled (bool): Return e^{-t} I_nu(t) instead of I_nu(t)

    Returns:
        EvalResult: value, absolute error estimate and method

    Raises:
        DomainError: t < 0 or nu < -1/2
        BesselOverflowError: the unscaled value is not representable
    """
    nu = check_finite('nu', nu)
    t = check_finite('t', t)
    if t < 0.0:
        raise DomainError('t', f"must be nonnegative, got {t}")
    if nu < -0.5:
        raise DomainError('nu', f"must be at least -1/2, got {nu}")

    if t == 0.0:
        if nu == 0.0:
            return EvalResult(1.0, 0.0, Method.SERIES)
        if nu > 0.0:
            return EvalResult(0.0, 0.0, Method.SERIES)
        raise BesselOverflowError(f"I_{nu}(0) is infinite for negative order")

    log_scaled, rel_err, method = _scaled_log(nu, t)
    log_value = log_scaled if scaled else log_scaled + t
    if log_value > _LOG_MAX:
        raise BesselOverflowError(f"I_{nu}({t}) overflows; use scaled=True")
    value = math.exp(log_value)
    return EvalResult(value, value * rel_err, method)


def _ratio_continued_fraction(nu: float, t: float) -> Tuple[float, float]:
    """
    r_nu(t) = 1 / (2nu/t + 1 / (2(nu+1)/t + 1 / (2(nu+2)/t + ...))).

    Modified Lentz on the denominator; converges to the minimal-solution ratio
    of the three-term recurrence, which is I_nu / I_{nu-1}.
    """
    f = 2.0 * nu / t
    if f == 0.0:
        f = _LENTZ_TINY
    c = f
    d = 0.0
    cap = CF_BASE_ITERATIONS + int(t)
    for j in range(1, cap + 1):
        b = 2.0 * (nu + j) / t
        d = b + d
        if d == 0.0:
            d = _LENTZ_TINY
        c = b + 1.0 / c
        if c == 0.0:
            c = _LENTZ_TINY
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < CF_REL_TOL:
            break
    else:
        raise ConvergenceError(f"r_{nu}({t}) continued fraction did not converge in {cap} terms")
    logger.debug("r_%s(%s): continued fraction converged after %d terms", nu, t, j)
    value = 1.0 / f
    return value, value * (j * _EPS + abs(delta - 1.0))


def _half_order_ratio(t: float) -> EvalResult:
    # r_{1/2} = tanh t rounds to 1 from t ~ 19 on; keep it strictly below
    value = math.tanh(t)
    clamped = min(value, _ONE_BELOW)
    return EvalResult(clamped, _EPS * value + (value - clamped), Method.CLOSED_FORM)


def _half_order_ratio_derivative(t: float) -> EvalResult:
    # r'_{1/2} = sech^2 t, formed from e^{-2t} so no difference of r values is taken
    e = math.exp(-2.0 * t)
    value = 4.0 * e / ((1.0 + e) * (1.0 + e))
    # sech^2 underflows past t ~ 372; the sign is kept
    clamped = max(value, _TINY)
    return EvalResult(clamped, 4 * _EPS * value + (clamped - value), Method.CLOSED_FORM)


def ratio_unchecked(nu: float, t: float) -> EvalResult:
    """r_nu(t) for any nu > 0 and t > 0 (callers validate)."""
    if nu == 0.5:
        return _half_order_ratio(t)
    if t < SMALL_T:
        value = t / (2.0 * nu)
        return EvalResult(value, value * t * t / (2.0 * nu + 2.0), Method.SERIES)
    if t <= SERIES_SWITCH:
        log_num, err_num, _ = _scaled_log(nu, t)
        log_den, err_den, _ = _scaled_log(nu - 1.0, t)
        value = math.exp(log_num - log_den)
        return EvalResult(value, value * (err_num + err_den), Method.SERIES)
    value, abs_err = _ratio_continued_fraction(nu, t)
    if nu > 0.5 and value > _ONE_BELOW:
        abs_err += value - _ONE_BELOW
        value = _ONE_BELOW
    return EvalResult(value, abs_err, Method.CONTINUED_FRACTION)


def _check_ratio_args(nu, t) -> Tuple[float, float]:
    nu = check_finite('nu', nu)
    t = check_finite('t', t)
    if t <= 0.0:
        raise DomainError('t', f"must be positive, got {t}")
    if nu < 0.5:
        raise DomainError('nu', f"must be at least 1/2, got {nu}")
    return nu, t


def ratio(nu: float, t: float) -> EvalResult:
    """
    Bessel ratio r_nu(t) = I_nu(t) / I_{nu-1}(t), in (0, 1) for nu >= 1/2.

    Args:
        nu (float): Order, nu >= 1/2
        t (float): Argument, t > 0

    Returns:
        EvalResult: scaled-series quotient for t <= 30, continued fraction beyond
    """
    nu, t = _check_ratio_args(nu, t)
    return ratio_unchecked(nu, t)


def ratio_derivative_unchecked(nu: float, t: float) -> EvalResult:
    """r'_nu(t) = 1 - (2nu-1)/t r_nu(t) - r_nu(t)^2 for any nu > 0."""
    if nu == 0.5:
        return _half_order_ratio_derivative(t)
    if t < SMALL_T:
        # r ~ t/(2nu) - t^3/(8nu^2(nu+1)) gives r' ~ 1/(2nu) - 3t^2/(8nu^2(nu+1))
        return EvalResult(1.0 / (2.0 * nu), 3.0 * t * t / (8.0 * nu * nu * (nu + 1.0)), Method.SERIES)
    r = ratio_unchecked(nu, t)
    slope = (2.0 * nu - 1.0) / t
    # 1 - r is exact for r in [1/2, 2]; (1 - r)(1 + r) keeps the digits 1 - r^2 loses
    value = (1.0 - r.value) * (1.0 + r.value) - slope * r.value
    abs_err = (abs(slope) + 2.0 * r.value) * r.abs_err + 4 * _EPS * (1.0 + abs(slope) * r.value)
    return EvalResult(value, abs_err, r.method)


def ratio_derivative(nu: float, t: float) -> EvalResult:
    """
    Derivative of the Bessel ratio via the recurrence identity, never by differencing.

    Args:
        nu (float): Order, nu >= 1/2
        t (float): Argument, t > 0

    Returns:
        EvalResult: r'_nu(t), which lies in (0, 1] for nu >= 1/2
    """
    nu, t = _check_ratio_args(nu, t)
    return ratio_derivative_unchecked(nu, t)


def ratio_over_t_integral_oracle(nu: float, t: float) -> EvalResult:
    """
    Independent evaluation of r_nu(t) / t as a quotient of two integrals over s in (0, 1)
    with kernel g(s, t) = (1 - s^2)^(nu - 3/2) cosh(ts). Meant for tests.

    Args:
        nu (float): Order, nu > 1/2
        t (float): Argument, t > 0

    Returns:
        EvalResult: r_nu(t) / t by algebraic-weight quadrature
    """
    nu = check_finite('nu', nu)
    t = check_finite('t', t)
    if nu <= 0.5:
        raise DomainError('nu', f"must exceed 1/2, got {nu}")
    if t <= 0.0:
        raise DomainError('t', f"must be positive, got {t}")

    alpha = nu - 1.5

    def kernel(s):
        # (1+s)^alpha * e^{-t} cosh(ts); the (1-s)^alpha half is the weight
        return (1.0 + s) ** alpha * 0.5 * (math.exp(t * (s - 1.0)) + math.exp(-t * (s + 1.0)))

    options = dict(weight='alg', wvar=(0.0, alpha), epsabs=0.0, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    den, den_err = integrate.quad(kernel, 0.0, 1.0, **options)
    num, num_err = integrate.quad(lambda s: (1.0 - s * s) * kernel(s), 0.0, 1.0, **options)
    value = num / ((2.0 * nu - 1.0) * den)
    return EvalResult(value, value * (abs(num_err) / num + abs(den_err) / den), Method.QUADRATURE)
