import cmath
import itertools
import math

import mpmath
from django.test import SimpleTestCase

from parabolic.exceptions import PreconditionError
from parabolic.gammakit import gamma
from parabolic.pcf import (
    PcfEvalPolicy,
    bessel_j_halforder,
    bessel_k_halforder,
    connection_defect,
    dawson_phi,
    erf,
    erf_via_pcf,
    erfi_check,
    hermite_case,
    hermite_normalized,
    ode_residual_product,
    ode_residual_single,
    pcf_d,
    pcf_d_dnu,
    pcf_recurrence_defect,
    shifted_normalized_sequence,
)

mpmath.mp.dps = 30

PSI_FORM = PcfEvalPolicy(route='psi_form')


def rel(a, b):
    return abs(complex(a) - complex(b)) / max(abs(complex(b)), 1e-300)


class PcfDTests(SimpleTestCase):
    def test_order_zero(self):
        self.assertLess(rel(pcf_d(0, 1.3), math.exp(-0.4225)), 1e-14)

    def test_against_multiprecision(self):
        points = [(-0.5, 1.0), (1.5, 0.7 + 0.3j), (-2.3, 2.0), (2, -1.5), (0.4, -0.8 + 1j), (-1, 0)]
        for nu, z in points:
            with self.subTest(nu=nu, z=z):
                self.assertLess(rel(pcf_d(nu, z), mpmath.pcfd(nu, z)), 1e-10)

    def test_routes_agree(self):
        for nu, z in [(0.5, 1.0), (-0.7, 2.5), (1.3, 0.8 + 0.4j), (-1.5, 1.7), (2.2, 0.6)]:
            with self.subTest(nu=nu, z=z):
                self.assertLess(rel(pcf_d(nu, z), pcf_d(nu, z, PSI_FORM)), 1e-9)

    def test_psi_route_needs_right_half_plane(self):
        with self.assertRaises(PreconditionError):
            pcf_d(0.5, -1.0, PSI_FORM)

    def test_integer_orders_match_hermite(self):
        for n in range(6):
            for z in (0.3, 1.7, 1 - 0.5j):
                with self.subTest(n=n, z=z):
                    self.assertLess(rel(pcf_d(n, z), hermite_case(n, z)), 1e-12)

    def test_policy_validation(self):
        with self.assertRaises(PreconditionError):
            PcfEvalPolicy(route='asymptotic')
        with self.assertRaises(PreconditionError):
            PcfEvalPolicy(deriv_step=0.5)
        with self.assertRaises(PreconditionError):
            PcfEvalPolicy(deriv_order=3)


class OrderDerivativeTests(SimpleTestCase):
    def test_against_multiprecision(self):
        for nu, z in [(-0.5, 1.0), (0.7, -0.4), (1.2, 0.5 + 0.5j)]:
            with self.subTest(nu=nu, z=z):
                expected = mpmath.diff(lambda v: mpmath.pcfd(v, z), nu)
                self.assertLess(rel(pcf_d_dnu(nu, z), expected), 1e-7)


class RelationTests(SimpleTestCase):
    def test_connection_formula(self):
        for nu in (0.2, 0.7, 1.5, 2.5, -0.3):
            for z in (0.5, 1.5 - 0.5j):
                with self.subTest(nu=nu, z=z):
                    self.assertLess(connection_defect(nu, z), 1e-10)

    def test_recurrence(self):
        for nu, z in [(0.3, 1.1), (-1.7, 0.4), (2.5, -1.0 + 0.5j)]:
            with self.subTest(nu=nu, z=z):
                self.assertLess(pcf_recurrence_defect(nu, z), 1e-12)

    def test_error_function(self):
        for x in (0.2, 0.7, 1.9):
            with self.subTest(x=x):
                self.assertLess(abs(erf_via_pcf(x) - math.erf(x)), 1e-12)
        z = 0.5 + 0.5j
        self.assertLess(rel(erf(z), mpmath.erf(z)), 1e-12)
        self.assertEqual(erf(0.3), complex(math.erf(0.3)))

    def test_dawson_reduction(self):
        for z in (0.8, 0.3 + 0.2j):
            with self.subTest(z=z):
                self.assertLess(erfi_check(z), 1e-10)
        x = 1.1
        expected = -float(mpmath.exp(-x * x) * mpmath.erfi(x))
        self.assertLess(rel(dawson_phi(x), 1j * cmath.exp(-x * x) * complex(mpmath.erf(1j * x))), 1e-11)
        self.assertLess(abs(dawson_phi(x).real - expected), 1e-11)

    def test_bessel_special_cases(self):
        nu, x = 0.75, 1.3
        expected = mpmath.besselj(nu - 0.5, x * x / 2)
        self.assertLess(rel(bessel_j_halforder(nu, x), expected), 1e-11)
        nu, x = 0.3, 1.1
        expected = mpmath.besselk(nu - 0.5, x * x / 2)
        self.assertLess(rel(bessel_k_halforder(nu, x), expected), 1e-9)
        with self.assertRaises(PreconditionError):
            bessel_j_halforder(0.5, 0.0)
        with self.assertRaises(PreconditionError):
            bessel_k_halforder(0.5, -1.0)

    def test_normalized_hermite(self):
        z = 0.9 - 0.2j
        self.assertLess(rel(hermite_normalized(4, z), hermite_case(4, z) / math.sqrt(24)), 1e-13)
        with self.assertRaises(PreconditionError):
            hermite_case(-1, z)


class OdeResidualTests(SimpleTestCase):
    def test_single(self):
        for nu in (-1.5, -0.5, 0.3, 1.0, 2.0, 4.0):
            for z in (0.5, 1.7):
                with self.subTest(nu=nu, z=z):
                    self.assertLessEqual(ode_residual_single(nu, z), 1e-6)

    def test_product(self):
        points = [
            (-0.5, 1.0, 0.7), (0.3, 0.5, 1.2), (1.2, 1.5, -0.4),
            (-1.3, 2.0, 0.9), (0.8, 0.0, 1.0), (2.0, 0.7, 0.3),
            (-0.2, 1.3, 1.6), (0.5, 2.5, 0.5 + 0.3j), (1.5, 0.2, -1.1),
        ]
        for nu, mu, z in points:
            with self.subTest(nu=nu, mu=mu, z=z):
                self.assertLessEqual(ode_residual_product(nu, mu, z), 1e-4)

    def test_step_validation(self):
        with self.assertRaises(PreconditionError):
            ode_residual_single(0.5, 1.0, h=0.5)


class ProductPropertyTests(SimpleTestCase):
    def test_durand_sum_is_a_product_at_imaginary_argument(self):
        for nu in (-0.3, 0.4, 1.6):
            for z in (0.5, 1.5):
                with self.subTest(nu=nu, z=z):
                    d, reflected = pcf_d(nu, z), pcf_d(nu, -z)
                    s, c = math.sin(math.pi * nu), math.cos(math.pi * nu)
                    lhs = d * d + (c * d - reflected) ** 2 / (s * s)
                    rhs = 2 * gamma(nu + 1) ** 2 / math.pi * pcf_d(-1 - nu, 1j * z) * pcf_d(-1 - nu, -1j * z)
                    self.assertLess(rel(lhs, rhs), 1e-8)

    def test_real_arguments_give_real_values(self):
        for nu in (-2.7, -1.0, -0.5, 0.3, 1.0, 2.4):
            for z in (-1.8, -0.4, 0.0, 0.9, 2.6):
                with self.subTest(nu=nu, z=z):
                    value = pcf_d(nu, z)
                    self.assertLessEqual(abs(value.imag), 1e-12 * abs(value))

    def test_shifted_sequence(self):
        order, z = 0.25, 0.8
        for n, value in enumerate(itertools.islice(shifted_normalized_sequence(order, z), 30)):
            with self.subTest(n=n):
                expected = mpmath.pcfd(order + n, z) / mpmath.sqrt(mpmath.factorial(n))
                self.assertLess(rel(value, expected), 1e-10)
