import math

from django.test import SimpleTestCase

from parabolic.exceptions import ConvergenceError, PreconditionError
from parabolic.quad import (
    QuadratureResult,
    QuadSpec,
    convolution_identity_defect,
    integrate_beta_type,
    integrate_decay,
    integrate_endpoint_singular,
    integrate_fourier_damped,
)


class QuadTestMixin:
    def assertWithinEstimate(self, result, exact, floor=1e-14):
        """Actual error stays below ten times the self-reported estimate"""
        self.assertTrue(result.converged)
        error = abs(result.value - exact)
        self.assertLessEqual(error, max(10 * result.abs_error_estimate, floor * max(abs(exact), 1.0)))


class IntegrateDecayTests(QuadTestMixin, SimpleTestCase):
    def test_exponential(self):
        result = integrate_decay(lambda t: math.exp(-t))
        self.assertWithinEstimate(result, 1.0)

    def test_gaussian(self):
        result = integrate_decay(lambda t: math.exp(-t * t / 2))
        self.assertWithinEstimate(result, math.sqrt(math.pi / 2))

    def test_cutoff(self):
        spec = QuadSpec(cutoff=40.0)
        result = integrate_decay(lambda t: math.exp(-t), spec)
        self.assertWithinEstimate(result, 1.0 - math.exp(-40.0))

    def test_refinement_never_loses_accuracy(self):
        f = lambda t: math.exp(-t) * math.cos(3 * t)  # noqa: E731
        errors, evaluations = [], []
        for tol in (1e-4, 1e-7, 1e-10, 1e-13):
            result = integrate_decay(f, QuadSpec(abs_tol=tol, rel_tol=tol))
            self.assertLessEqual(abs(result.value - 0.1), 10 * tol)
            errors.append(abs(result.value - 0.1))
            evaluations.append(result.evaluations)
        for coarse, fine in zip(errors, errors[1:]):
            self.assertLessEqual(fine, max(coarse, 1e-13))
        self.assertEqual(evaluations, sorted(evaluations))

    def test_linearity(self):
        f = lambda t: math.exp(-t) * math.sin(2 * t)  # noqa: E731
        g = lambda t: t * math.exp(-t * t)  # noqa: E731
        alpha, beta = 2.5 - 1j, -0.75
        combined = integrate_decay(lambda t: alpha * f(t) + beta * g(t)).value
        separate = alpha * integrate_decay(f).value + beta * integrate_decay(g).value
        self.assertLess(abs(combined - separate), 1e-12)

    def test_budget_exhaustion(self):
        spec = QuadSpec(abs_tol=1e-15, rel_tol=1e-15, max_evaluations=100)
        result = integrate_decay(lambda t: math.exp(-t) / math.sqrt(t), spec)
        self.assertFalse(result.converged)
        with self.assertRaises(ConvergenceError):
            result.require()


class EndpointSingularTests(QuadTestMixin, SimpleTestCase):
    def test_gamma_integrals(self):
        for s in (0.3, 0.5, 1.7):
            with self.subTest(s=s):
                result = integrate_endpoint_singular(
                    lambda t: t ** (s - 1) * math.exp(-t), s - 1
                )
                self.assertWithinEstimate(result, math.gamma(s))

    def test_linearity(self):
        f = lambda t: t ** -0.5 * math.exp(-t)  # noqa: E731
        g = lambda t: t ** -0.5 * math.exp(-2 * t)  # noqa: E731
        combined = integrate_endpoint_singular(lambda t: 3 * f(t) - 1j * g(t), -0.5).value
        separate = (
            3 * integrate_endpoint_singular(f, -0.5).value
            - 1j * integrate_endpoint_singular(g, -0.5).value
        )
        self.assertLess(abs(combined - separate), 1e-12)
        self.assertLess(abs(combined - (3 - 1j / math.sqrt(2)) * math.sqrt(math.pi)), 1e-10)

    def test_rejects_nonintegrable_exponent(self):
        with self.assertRaises(PreconditionError):
            integrate_endpoint_singular(lambda t: 1 / t, -1.0)


class FourierDampedTests(QuadTestMixin, SimpleTestCase):
    def test_gaussian_cosine_transform(self):
        for z in (0.0, 1.5, 10.0):
            with self.subTest(z=z):
                result = integrate_fourier_damped(lambda x: math.exp(-x * x / 2), z, 0.0, 'cos')
                exact = math.sqrt(math.pi / 2) * math.exp(-z * z / 2)
                self.assertLess(abs(result.value - exact), 1e-11)

    def test_gaussian_sine_transform(self):
        z = 2.0
        result = integrate_fourier_damped(lambda x: x * math.exp(-x * x / 2), z, 0.0, 'sin')
        exact = math.sqrt(math.pi / 2) * z * math.exp(-z * z / 2)
        self.assertLess(abs(result.value - exact), 1e-11)

    def test_phase_matches_kind(self):
        g = lambda x: math.exp(-x * x / 2)  # noqa: E731
        shifted = integrate_fourier_damped(g, 1.2, math.pi / 2, 'sin')
        plain = integrate_fourier_damped(g, 1.2, 0.0, 'cos')
        self.assertLess(abs(shifted.value - plain.value), 1e-12)

    def test_singular_first_panel(self):
        # int sin(x) x^{-1/2} e^{-x^2/2} against the same integral with a fine cutoff
        g = lambda x: math.exp(-x * x / 2) / math.sqrt(x)  # noqa: E731
        result = integrate_fourier_damped(g, 1.0, 0.0, 'sin', singular_exponent=0.5)
        reference = integrate_endpoint_singular(
            lambda x: math.sin(x) * g(x), 0.5, QuadSpec(cutoff=9.0)
        )
        self.assertLess(abs(result.value - reference.value), 1e-10)

    def test_unknown_kind(self):
        with self.assertRaises(PreconditionError):
            integrate_fourier_damped(lambda x: 1.0, 1.0, 0.0, 'tan')


class ConvolutionTests(SimpleTestCase):
    def test_exponentials(self):
        defect = convolution_identity_defect(lambda x: math.exp(-x), lambda x: math.exp(-2 * x))
        self.assertLess(defect, 1e-8)


class BetaTypeTests(QuadTestMixin, SimpleTestCase):
    def test_arcsine_integral(self):
        result = integrate_beta_type(lambda t, s: 1 / math.sqrt(t * s), -0.5, -0.5)
        self.assertWithinEstimate(result, math.pi)

    def test_beta_function(self):
        a, b = 0.3, 0.6
        result = integrate_beta_type(lambda t, s: t ** (a - 1) * s ** (b - 1), a - 1, b - 1)
        exact = math.gamma(a) * math.gamma(b) / math.gamma(a + b)
        self.assertLess(abs(result.value - exact) / exact, 1e-11)


class ResultAndSpecTests(SimpleTestCase):
    def test_spec_validation(self):
        with self.assertRaises(PreconditionError):
            QuadSpec(abs_tol=0)
        with self.assertRaises(PreconditionError):
            QuadSpec(max_evaluations=10)
        with self.assertRaises(PreconditionError):
            QuadSpec(cutoff=-1.0)

    def test_arithmetic(self):
        first = QuadratureResult(1 + 1j, 1e-12, 30, True)
        second = QuadratureResult(2.0, 1e-11, 45, False, ('oscillatory',))
        total = first + second
        self.assertEqual(total.value, 3 + 1j)
        self.assertEqual(total.evaluations, 75)
        self.assertFalse(total.converged)
        self.assertEqual(total.warnings, ('oscillatory',))
        scaled = first.scaled(-2)
        self.assertEqual(scaled.value, -2 - 2j)
        self.assertAlmostEqual(scaled.abs_error_estimate, 2e-12)
        self.assertEqual(first.diagnostics()['quad_evaluations'], 30)
