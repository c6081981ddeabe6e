#!/usr/bin/env python3
"""
Unit tests for the Marcum Q evaluators
"""

import math
import os
import sys
import unittest
from unittest.mock import patch

import numpy as np
from scipy import integrate, special, stats

# Add the current directory to the path so we can import our modules
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from errors import ConvergenceError, DomainError
from marcum import (
    MarcumPoint,
    MethodChoice,
    integrand_f,
    marcum_cdf,
    marcum_q,
    noncentral_chi2_cdf,
    noncentral_chi2_sf,
    rice_survival,
)
from special_fn import Method


class TestMarcumPoint(unittest.TestCase):
    """Test cases for MarcumPoint validation"""

    def test_valid_point(self):
        point = MarcumPoint(1, 2, 3)
        self.assertEqual((point.nu, point.a, point.b), (1.0, 2.0, 3.0))

    def test_invalid_points(self):
        """Each bad coordinate is named in the error"""
        for args, name in (((0.0, 1.0, 1.0), 'nu'), ((1.0, -1.0, 0.0), 'a'),
                           ((1.0, 0.0, -0.5), 'b'), ((1.0, float('inf'), 1.0), 'a')):
            with self.assertRaises(DomainError) as ctx:
                MarcumPoint(*args)
            self.assertEqual(ctx.exception.parameter, name)


class TestMarcumQ(unittest.TestCase):
    """Test cases for marcum_q and marcum_cdf"""

    def setUp(self):
        """Set up test fixtures"""
        self.points = [
            MarcumPoint(0.3, 1.0, 0.5),
            MarcumPoint(1.0, 2.0, 2.5),
            MarcumPoint(2.5, 3.0, 4.0),
            MarcumPoint(7.0, 0.5, 3.0),
            MarcumPoint(0.784, 10.0, 9.0),
        ]

    def test_rayleigh_closed_form(self):
        """Q_1(0, 1) = exp(-1/2) by every method"""
        point = MarcumPoint(1.0, 0.0, 1.0)
        for method in MethodChoice:
            with self.subTest(method=method):
                self.assertAlmostEqual(marcum_q(point, method).value, 0.60653066, places=8)
                self.assertAlmostEqual(marcum_q(point, method).value, math.exp(-0.5), places=10)

    def test_auto_selects_closed_form_at_zero_a(self):
        self.assertEqual(marcum_q(MarcumPoint(2.0, 0.0, 1.0)).method, Method.CLOSED_FORM)
        self.assertEqual(marcum_q(MarcumPoint(2.0, 1.0, 1.0)).method, Method.SERIES)

    def test_zero_threshold(self):
        """Q_nu(a, 0) = 1"""
        result = marcum_q(MarcumPoint(2.0, 1.0, 0.0))
        self.assertEqual(result.value, 1.0)
        self.assertEqual(result.abs_err, 0.0)
        self.assertEqual(marcum_cdf(MarcumPoint(2.0, 1.0, 0.0)).value, 0.0)

    def test_methods_agree(self):
        """Poisson mixture and quadrature agree to the tolerance"""
        for point in self.points:
            with self.subTest(point=point):
                series = marcum_q(point, MethodChoice.POISSON_SERIES, 1e-11).value
                quad = marcum_q(point, MethodChoice.QUADRATURE, 1e-11).value
                self.assertAlmostEqual(series, quad, delta=1e-10)

    def test_methods_agree_on_grid(self):
        """Quadrature and the Poisson mixture agree on a 120-cell grid"""
        for nu in (0.5, 1.0, 2.5, 4.0):
            for a in (0.5, 1.5, 3.0, 6.0, 10.0):
                for b in (0.5, 1.0, 2.0, 3.0, 5.0, 8.0):
                    point = MarcumPoint(nu, a, b)
                    series = marcum_q(point, MethodChoice.POISSON_SERIES, 1e-11).value
                    quad = marcum_q(point, MethodChoice.QUADRATURE, 1e-11).value
                    self.assertAlmostEqual(series, quad, delta=1e-9, msg=str(point))

    def test_gamma_closed_form_grid(self):
        """Q_nu(0, b) = Gamma(nu, b^2/2) / Gamma(nu); Q_1(0, b) = exp(-b^2/2)"""
        for b in (0.1, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0):
            self.assertAlmostEqual(marcum_q(MarcumPoint(1.0, 0.0, b)).value, math.exp(-0.5 * b * b), delta=1e-12)
            for nu in (0.3, 0.5, 2.5, 6.0):
                expected = special.gammaincc(nu, 0.5 * b * b)
                self.assertAlmostEqual(marcum_q(MarcumPoint(nu, 0.0, b)).value, expected, delta=1e-12)

    def test_normalization_grid(self):
        """Q_nu(a, 0) = 1 and 1 - Q_nu(a, 0) = 0"""
        for nu in (0.3, 0.5, 0.78, 1.0, 2.5, 7.0):
            for a in (0.0, 0.5, 1.0, 3.0, 10.0):
                point = MarcumPoint(nu, a, 0.0)
                self.assertAlmostEqual(marcum_q(point).value, 1.0, delta=1e-12)
                self.assertAlmostEqual(marcum_cdf(point).value, 0.0, delta=1e-12)

    def test_nondecreasing_in_nu(self):
        """Q_nu(a, b) nondecreasing in nu"""
        for a in (0.0, 1.0, 3.0):
            for b in (0.5, 2.0, 5.0):
                values = [marcum_q(MarcumPoint(nu, a, b)).value for nu in np.linspace(0.3, 5.0, 25)]
                self.assertTrue(all(y >= x - 1e-13 for x, y in zip(values, values[1:])), f"a={a} b={b}")

    def test_complement(self):
        """Q + (1 - Q) = 1"""
        for point in self.points:
            total = marcum_q(point).value + marcum_cdf(point).value
            self.assertAlmostEqual(total, 1.0, delta=1e-12)

    def test_cdf_quadrature_agrees(self):
        point = MarcumPoint(2.0, 1.5, 2.0)
        series = marcum_cdf(point, MethodChoice.POISSON_SERIES).value
        quad = marcum_cdf(point, MethodChoice.QUADRATURE).value
        self.assertAlmostEqual(series, quad, delta=1e-10)

    def test_rice_survival(self):
        """Q_1(a, b) is the Rice survival function"""
        for a, b in ((0.5, 1.0), (2.0, 2.0), (4.0, 6.5)):
            self.assertTrue(math.isclose(rice_survival(a, b).value, stats.rice.sf(b, a), rel_tol=1e-8))

    def test_noncentral_chi2(self):
        """Squared parameterization matches scipy.stats.ncx2"""
        for x, dof, nc in ((3.0, 2.0, 1.0), (10.0, 5.0, 4.0), (0.5, 1.0, 0.0), (40.0, 4.0, 30.0)):
            with self.subTest(x=x, dof=dof, nc=nc):
                self.assertTrue(math.isclose(noncentral_chi2_cdf(x, dof, nc).value,
                                             stats.ncx2.cdf(x, dof, nc) if nc > 0 else stats.chi2.cdf(x, dof),
                                             rel_tol=1e-7))
                self.assertTrue(math.isclose(noncentral_chi2_sf(x, dof, nc).value,
                                             stats.ncx2.sf(x, dof, nc) if nc > 0 else stats.chi2.sf(x, dof),
                                             rel_tol=1e-7))
        with self.assertRaises(DomainError) as ctx:
            noncentral_chi2_cdf(1.0, 0.0, 1.0)
        self.assertEqual(ctx.exception.parameter, 'dof')

    def test_cdf_relative_accuracy_near_zero(self):
        """1 - Q keeps its digits where Q rounds to 1"""
        small = marcum_cdf(MarcumPoint(1.0, 0.0, 1e-4)).value
        self.assertTrue(math.isclose(small, -math.expm1(-0.5e-8), rel_tol=1e-12))
        small = marcum_cdf(MarcumPoint(1.0, 1.0, 1e-4)).value
        self.assertTrue(math.isclose(small, stats.ncx2.cdf(1e-8, 2.0, 1.0), rel_tol=1e-8))

    def test_monotonicity(self):
        """Q decreases in b and increases in a and nu"""
        base = marcum_q(MarcumPoint(1.5, 2.0, 2.0)).value
        self.assertLess(marcum_q(MarcumPoint(1.5, 2.0, 2.5)).value, base)
        self.assertGreater(marcum_q(MarcumPoint(1.5, 2.5, 2.0)).value, base)
        self.assertGreater(marcum_q(MarcumPoint(2.0, 2.0, 2.0)).value, base)

    def test_large_noncentrality_uses_quadrature(self):
        """Beyond the Poisson cutoff auto integrates the density"""
        point = MarcumPoint(1.0, 120.0, 121.0)
        auto = marcum_q(point)
        self.assertEqual(auto.method, Method.QUADRATURE)
        series = marcum_q(point, MethodChoice.POISSON_SERIES)
        self.assertAlmostEqual(auto.value, series.value, delta=1e-9)

    def test_gamma_closed_form_needs_zero_a(self):
        with self.assertRaises(DomainError) as ctx:
            marcum_q(MarcumPoint(1.0, 1.0, 1.0), MethodChoice.GAMMA_CLOSED_FORM)
        self.assertEqual(ctx.exception.parameter, 'method')

    def test_bad_tolerance_and_method(self):
        point = MarcumPoint(1.0, 1.0, 1.0)
        for tol in (1e-16, 1e-2, float('nan')):
            with self.assertRaises(DomainError) as ctx:
                marcum_q(point, tol=tol)
            self.assertEqual(ctx.exception.parameter, 'tol')
        with self.assertRaises(DomainError):
            marcum_q(point, 'simpson')

    @patch('marcum.POISSON_MAX_TERMS', 40)
    def test_poisson_window_cap(self):
        """A window that cannot reach the tolerance raises ConvergenceError"""
        with self.assertRaises(ConvergenceError):
            marcum_q(MarcumPoint(1.0, 60.0, 50.0), MethodChoice.POISSON_SERIES, 1e-14)


class TestIntegrand(unittest.TestCase):
    """Test cases for the noncentral chi density"""

    def test_rayleigh(self):
        """nu = 1, a = 0: t exp(-t^2/2)"""
        self.assertAlmostEqual(integrand_f(MarcumPoint(1.0, 0.0, 0.0), 1.0), math.exp(-0.5), places=14)

    def test_rice_density(self):
        """nu = 1: the Rice density"""
        for a, t in ((0.5, 1.0), (3.0, 2.5), (50.0, 49.0)):
            point = MarcumPoint(1.0, a, 0.0)
            self.assertTrue(math.isclose(integrand_f(point, t), stats.rice.pdf(t, a), rel_tol=1e-9))

    def test_log_scale(self):
        point = MarcumPoint(2.0, 1.0, 0.0)
        self.assertAlmostEqual(integrand_f(point, 1.5, log_scale=True), math.log(integrand_f(point, 1.5)), places=12)

    def test_integrates_to_one(self):
        """The density has unit mass on (0, inf)"""
        for nu in (0.5, 1.0, 2.5):
            for a in (0.0, 1.0, 4.0):
                point = MarcumPoint(nu, a, 0.0)
                mass, _ = integrate.quad(lambda t: integrand_f(point, t), 0.0, a + 40.0,
                                         points=[max(a, 1.0)], epsabs=1e-13, epsrel=1e-12, limit=200)
                self.assertAlmostEqual(mass, 1.0, delta=1e-9, msg=str(point))

    def test_nonpositive_t(self):
        with self.assertRaises(DomainError):
            integrand_f(MarcumPoint(1.0, 1.0, 0.0), 0.0)


if __name__ == '__main__':
    unittest.main(verbosity=2)
