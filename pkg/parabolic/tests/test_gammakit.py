import cmath
import math

import mpmath
import numpy as np
from django.test import SimpleTestCase

from parabolic.exceptions import PoleError, ZeroBaseError
from parabolic.gammakit import (
    digamma,
    gamma,
    is_pole,
    log_gamma,
    pochhammer,
    pole_index,
    principal_power,
    principal_sqrt,
    rgamma,
)

mpmath.mp.dps = 30


def rel(a, b):
    return abs(complex(a) - complex(b)) / max(abs(complex(b)), 1e-300)


class GammaTests(SimpleTestCase):
    def test_integer_and_half_integer_values(self):
        self.assertAlmostEqual(gamma(5).real, 24.0, places=10)
        self.assertLess(rel(gamma(0.5), math.sqrt(math.pi)), 1e-14)

    def test_against_multiprecision(self):
        for z in (1 + 2j, 0.3, 7.5 - 3j, -2.5 + 0.3j, -0.7, 0.1 + 0.1j):
            with self.subTest(z=z):
                self.assertLess(rel(gamma(z), mpmath.gamma(z)), 1e-13)

    def test_poles(self):
        for z in (0, -1, -7):
            with self.subTest(z=z):
                self.assertTrue(is_pole(z))
                self.assertEqual(pole_index(z), z)
                with self.assertRaises(PoleError):
                    gamma(z)
                self.assertEqual(rgamma(z), 0)
        self.assertFalse(is_pole(1))
        self.assertFalse(is_pole(-1 + 1e-6j))

    def test_reciprocal(self):
        for z in (0.5, 3 + 1j, -1.5, 200.0):
            with self.subTest(z=z):
                self.assertLess(rel(rgamma(z), mpmath.rgamma(z)), 1e-12)

    def test_log_gamma(self):
        for z in (3 + 4j, 0.7, 25.0):
            with self.subTest(z=z):
                self.assertLess(abs(log_gamma(z) - complex(mpmath.loggamma(z))), 1e-12)
        z = -2.3 + 0.4j
        self.assertLess(rel(cmath.exp(log_gamma(z)), gamma(z)), 1e-12)

    def test_digamma(self):
        self.assertAlmostEqual(digamma(1).real, -float(mpmath.euler), places=13)
        for z in (0.3 + 2j, 4.5, -1.5):
            with self.subTest(z=z):
                self.assertLess(rel(digamma(z), mpmath.digamma(z)), 1e-12)
        with self.assertRaises(PoleError):
            digamma(-2)


class PochhammerTests(SimpleTestCase):
    def test_values(self):
        self.assertEqual(pochhammer(0.5, 3), 1.875)
        self.assertEqual(pochhammer(2.0, 0), 1)
        self.assertEqual(pochhammer(-2, 3), 0)

    def test_negative_order_rejected(self):
        with self.assertRaises(ValueError):
            pochhammer(1.0, -1)


class PrincipalPowerTests(SimpleTestCase):
    def test_branch(self):
        self.assertLess(abs(principal_power(-1, 0.5) - 1j), 1e-15)
        self.assertLess(abs(principal_power(complex(-4, -0.0), 0.5) - 2j), 1e-15)
        self.assertLess(abs(principal_sqrt(complex(-4, -0.0)) - 2j), 1e-15)
        self.assertLess(abs(principal_power(-1j, 0.5) - cmath.exp(-0.25j * math.pi)), 1e-15)

    def test_zero_base(self):
        with self.assertRaises(ZeroBaseError):
            principal_power(0, 0.5)


class GammaFunctionalEquationTests(SimpleTestCase):
    """Duplication and reflection over random complex arguments"""

    def setUp(self):
        rng = np.random.default_rng(20240611)
        self.points = rng.uniform(-3.5, 3.5, 200) + 1j * rng.uniform(-1.5, 1.5, 200)

    def test_duplication(self):
        for nu in self.points:
            nu = complex(nu)
            with self.subTest(nu=nu):
                expected = principal_power(2, 2 * nu - 1) / math.sqrt(math.pi) * gamma(nu) * gamma(nu + 0.5)
                self.assertLess(rel(gamma(2 * nu), expected), 1e-11)

    def test_reflection(self):
        for nu in self.points:
            nu = complex(nu)
            with self.subTest(nu=nu):
                expected = math.pi / cmath.sin(math.pi * nu)
                self.assertLess(rel(gamma(nu) * gamma(1 - nu), expected), 1e-11)
