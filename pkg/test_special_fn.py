#!/usr/bin/env python3
"""
Unit tests for the Bessel function and Bessel ratio evaluators
"""

import math
import os
import sys
import unittest

import numpy as np
from scipy import special

# Add the current directory to the path so we can import our modules
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from errors import BesselOverflowError, DomainError
from special_fn import (
    EvalResult,
    Method,
    bessel_i,
    check_finite,
    log_bessel_i_scaled,
    ratio,
    ratio_derivative,
    ratio_derivative_unchecked,
    ratio_over_t_integral_oracle,
    ratio_unchecked,
)


class TestBesselI(unittest.TestCase):
    """Test cases for bessel_i"""

    def test_half_order_closed_form(self):
        """I_{1/2}(1) = sqrt(2/pi) sinh(1)"""
        result = bessel_i(0.5, 1.0)
        self.assertAlmostEqual(result.value, 0.9376748, delta=1e-7)
        self.assertAlmostEqual(result.value, math.sqrt(2.0 / math.pi) * math.sinh(1.0), places=13)

    def test_minus_half_order(self):
        """I_{-1/2}(t) = sqrt(2/(pi t)) cosh(t) on both sides of the switch"""
        for t in (0.5, 3.0, 45.0):
            expected = math.sqrt(2.0 / (math.pi * t)) * math.cosh(t)
            self.assertTrue(math.isclose(bessel_i(-0.5, t).value, expected, rel_tol=1e-12), t)

    def test_zero_argument(self):
        """I_0(0) = 1, I_nu(0) = 0 for nu > 0"""
        self.assertEqual(bessel_i(0.0, 0.0).value, 1.0)
        self.assertEqual(bessel_i(2.5, 0.0).value, 0.0)

    def test_matches_scipy(self):
        """Series and integral representation agree with scipy.special.ive"""
        for nu in (-0.5, -0.2, 0.0, 0.3, 1.0, 2.5, 7.0):
            for t in (0.1, 1.0, 10.0, 29.0, 31.0, 50.0, 200.0):
                got = bessel_i(nu, t, scaled=True)
                self.assertTrue(math.isclose(got.value, special.ive(nu, t), rel_tol=1e-9),
                                f"nu={nu} t={t}: {got.value} vs {special.ive(nu, t)}")

    def test_high_orders_large_argument(self):
        """Quadrature at orders 7 to 10 beyond the switch returns a usable error estimate"""
        for nu in (7.0, 8.0, 10.0):
            for t in (31.0, 50.0, 60.0, 100.0):
                got = bessel_i(nu, t, scaled=True)
                self.assertEqual(got.method, Method.QUADRATURE)
                self.assertGreaterEqual(got.abs_err, 0.0)
                self.assertTrue(math.isclose(got.value, special.ive(nu, t), rel_tol=1e-9),
                                f"nu={nu} t={t}: {got.value} vs {special.ive(nu, t)}")

    def test_scaled_matches_unscaled(self):
        """e^t * scaled value equals the unscaled value"""
        for nu in (0.0, 0.5, 2.5, 7.0):
            for t in np.geomspace(0.05, 600.0, 15):
                scaled = bessel_i(nu, t, scaled=True).value
                unscaled = bessel_i(nu, t).value
                self.assertTrue(math.isclose(scaled * math.exp(t), unscaled, rel_tol=1e-12),
                                f"nu={nu} t={t}")

    def test_method_tags(self):
        """Series up to the switch, quadrature beyond"""
        self.assertEqual(bessel_i(1.0, 5.0).method, Method.SERIES)
        self.assertEqual(bessel_i(1.0, 80.0, scaled=True).method, Method.QUADRATURE)

    def test_abs_err_nonnegative(self):
        """Error estimates are never negative"""
        for t in (0.01, 2.0, 40.0):
            self.assertGreaterEqual(bessel_i(1.5, t, scaled=True).abs_err, 0.0)

    def test_overflow(self):
        """Unscaled I_0(1000) is not representable"""
        with self.assertRaises(BesselOverflowError):
            bessel_i(0.0, 1000.0)
        scaled = bessel_i(0.0, 1000.0, scaled=True)
        self.assertTrue(math.isclose(scaled.value, special.ive(0.0, 1000.0), rel_tol=1e-9))

    def test_domain_errors(self):
        """Negative argument and orders below -1/2 are rejected"""
        with self.assertRaises(DomainError) as ctx:
            bessel_i(1.0, -1.0)
        self.assertEqual(ctx.exception.parameter, 't')
        with self.assertRaises(DomainError) as ctx:
            bessel_i(-0.6, 1.0)
        self.assertEqual(ctx.exception.parameter, 'nu')

    def test_log_scaled_below_minus_half(self):
        """Orders in (-1, -1/2) via the series and the upward recurrence"""
        for t in (0.5, 5.0, 50.0):
            self.assertTrue(math.isclose(log_bessel_i_scaled(-0.7, t), math.log(special.ive(-0.7, t)),
                                         rel_tol=1e-9, abs_tol=1e-12), t)
        with self.assertRaises(DomainError):
            log_bessel_i_scaled(-1.0, 1.0)


class TestRatio(unittest.TestCase):
    """Test cases for r_nu(t) and r'_nu(t)"""

    def test_half_order_is_tanh(self):
        """r_{1/2}(1) = tanh(1)"""
        self.assertAlmostEqual(ratio(0.5, 1.0).value, 0.76159416, places=8)
        self.assertAlmostEqual(ratio(0.5, 1.0).value, math.tanh(1.0), places=14)

    def test_derivative_half_order(self):
        """r'_{1/2}(1) = sech^2(1)"""
        self.assertAlmostEqual(ratio_derivative(0.5, 1.0).value, 0.41997434, places=8)

    def test_matches_scipy(self):
        """Series quotient and continued fraction agree with ive(nu)/ive(nu-1)"""
        for nu in (0.5, 0.75, 1.0, 1.5, 3.0, 10.0):
            for t in (0.01, 0.5, 2.0, 15.0, 30.0, 30.5, 100.0, 1000.0):
                expected = special.ive(nu, t) / special.ive(nu - 1.0, t)
                self.assertTrue(math.isclose(ratio(nu, t).value, expected, rel_tol=1e-10),
                                f"nu={nu} t={t}")

    def test_method_switch(self):
        """Continued fraction beyond t = 30"""
        self.assertEqual(ratio(1.0, 10.0).method, Method.SERIES)
        self.assertEqual(ratio(1.0, 31.0).method, Method.CONTINUED_FRACTION)

    def test_bounds(self):
        """0 < r < 1 and 0 < r' <= 1 for nu >= 1/2"""
        for nu in np.linspace(0.5, 5.0, 10):
            for t in np.geomspace(1e-4, 1e3, 25):
                r = ratio(nu, t).value
                dr = ratio_derivative(nu, t).value
                self.assertTrue(0.0 < r < 1.0)
                self.assertTrue(0.0 < dr <= 1.0)

    def test_half_order_large_argument(self):
        """r_{1/2} stays below 1 and r'_{1/2} stays positive where tanh rounds to 1"""
        for t in (19.5, 34.8, 100.0, 510.9, 1e4):
            self.assertLess(ratio(0.5, t).value, 1.0, t)
            self.assertGreater(ratio_derivative(0.5, t).value, 0.0, t)
        self.assertTrue(math.isclose(ratio_derivative(0.5, 30.0).value, 1.0 / math.cosh(30.0) ** 2,
                                     rel_tol=1e-12))

    def test_half_order_closure(self):
        """r_{1/2}(t) = tanh t across [0.01, 20]"""
        for t in np.linspace(0.01, 20.0, 200):
            self.assertAlmostEqual(ratio(0.5, t).value, math.tanh(t), delta=1e-12)

    def test_increasing_below_fifty(self):
        """r_nu strictly increasing in t and inside (0, 1)"""
        cases = [(0.5, np.geomspace(1e-3, 15.0, 120))]
        cases += [(nu, np.geomspace(1e-3, 50.0, 120)) for nu in (0.55, 0.75, 1.0, 2.0, 5.0)]
        for nu, grid in cases:
            values = [ratio(nu, t).value for t in grid]
            self.assertTrue(all(0.0 < r < 1.0 for r in values), nu)
            self.assertTrue(all(y > x for x, y in zip(values, values[1:])), nu)

    def test_ratio_over_t_decreasing(self):
        """r_nu(t) / t strictly decreasing for nu > 1/2"""
        for nu in (0.6, 1.0, 2.0, 5.0):
            grid = np.geomspace(1e-3, 1e3, 200)
            values = [ratio(nu, t).value / t for t in grid]
            self.assertTrue(all(y < x for x, y in zip(values, values[1:])), nu)

    def test_small_t_limits(self):
        """r ~ t/(2nu), r' -> 1/(2nu)"""
        self.assertAlmostEqual(ratio(1.0, 1e-10).value, 5e-11, places=20)
        self.assertAlmostEqual(ratio_derivative(2.0, 1e-10).value, 0.25, places=14)

    def test_derivative_against_central_difference(self):
        """Recurrence identity agrees with a finite difference of r"""
        for nu in (0.6, 0.8, 1.5, 3.0, 6.0):
            for t in np.geomspace(0.05, 200.0, 12):
                step = 1e-5 * t
                fd = (ratio(nu, t + step).value - ratio(nu, t - step).value) / (2.0 * step)
                self.assertAlmostEqual(ratio_derivative(nu, t).value, fd, delta=1e-6, msg=f"nu={nu} t={t}")

    def test_unchecked_extends_below_half(self):
        """The internal variants accept 0 < nu < 1/2"""
        expected = special.ive(0.3, 2.0) / special.ive(-0.7, 2.0)
        self.assertTrue(math.isclose(ratio_unchecked(0.3, 2.0).value, expected, rel_tol=1e-10))
        self.assertTrue(math.isfinite(ratio_derivative_unchecked(0.3, 2.0).value))
        with self.assertRaises(DomainError):
            ratio(0.3, 2.0)

    def test_integral_oracle(self):
        """Quotient of kernel integrals reproduces r_nu(t) / t"""
        for nu in (0.75, 1.0, 1.6, 2.5, 4.0):
            for t in np.geomspace(0.1, 60.0, 10):
                oracle = ratio_over_t_integral_oracle(nu, t)
                self.assertEqual(oracle.method, Method.QUADRATURE)
                self.assertTrue(math.isclose(oracle.value, ratio(nu, t).value / t, rel_tol=1e-8),
                                f"nu={nu} t={t}")
        with self.assertRaises(DomainError):
            ratio_over_t_integral_oracle(0.5, 1.0)


class TestHelpers(unittest.TestCase):
    """Test cases for EvalResult and check_finite"""

    def test_eval_result_rejects_negative_error(self):
        with self.assertRaises(ValueError):
            EvalResult(1.0, -1e-3, Method.SERIES)

    def test_check_finite(self):
        self.assertEqual(check_finite('x', 2), 2.0)
        with self.assertRaises(DomainError) as ctx:
            check_finite('x', float('nan'))
        self.assertEqual(ctx.exception.parameter, 'x')
        with self.assertRaises(DomainError):
            check_finite('x', 'abc')


if __name__ == '__main__':
    unittest.main(verbosity=2)
