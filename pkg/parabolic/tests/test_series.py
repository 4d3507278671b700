import itertools
import math

from django.test import SimpleTestCase

from parabolic.exceptions import ConvergenceError, PreconditionError
from parabolic.series import SeriesControl, smooth_window, smoothed_limit, sum_series


def inverse_squares():
    for n in itertools.count(1):
        yield 1.0 / (n * n)


class PlainSumTests(SimpleTestCase):
    def test_geometric(self):
        terms = (0.5 ** n for n in range(200))
        result = sum_series(terms)
        self.assertAlmostEqual(result.value.real, 2.0, places=14)
        self.assertFalse(result.accelerated)

    def test_finite_iterable(self):
        result = sum_series(iter([1, 2, 3]))
        self.assertEqual(result.value, 6)
        self.assertEqual(result.terms, 3)

    def test_budget(self):
        with self.assertRaises(ConvergenceError) as caught:
            sum_series(itertools.repeat(1.0), SeriesControl(max_terms=10))
        self.assertEqual(caught.exception.terms, 10)
        self.assertEqual(caught.exception.estimate, 10)


class SmoothedLimitTests(SimpleTestCase):
    ctl = SeriesControl(max_terms=65536, rel_tol=1e-12, consecutive_small=2)

    def test_zeta_two(self):
        result = smoothed_limit(inverse_squares(), self.ctl, exponents=(1, 2, 3, 4))
        self.assertTrue(result.accelerated)
        self.assertLess(abs(result.value - math.pi ** 2 / 6), 1e-12)
        self.assertLessEqual(result.terms, 32768)

    def test_alternating_harmonic_needs_no_extrapolation(self):
        terms = ((-1) ** n / (n + 1) for n in itertools.count())
        result = smoothed_limit(terms, self.ctl)
        self.assertLess(abs(result.value - math.log(2)), 1e-13)

    def test_zero_terms_are_harmless(self):
        def with_gaps():
            for value in inverse_squares():
                yield value
                yield 0.0

        result = smoothed_limit(with_gaps(), self.ctl, exponents=(1, 2, 3, 4))
        self.assertLess(abs(result.value - math.pi ** 2 / 6), 1e-11)

    def test_divergent_series_reports_estimate(self):
        terms = (1.0 / (n + 1) for n in itertools.count())
        with self.assertRaises(ConvergenceError) as caught:
            smoothed_limit(terms, self.ctl, exponents=(1, 2, 3, 4))
        self.assertIsNotNone(caught.exception.estimate)
        self.assertEqual(caught.exception.terms, 65536)

    def test_small_budget_gives_up_with_estimate(self):
        with self.assertRaises(ConvergenceError) as caught:
            smoothed_limit(inverse_squares(), SeriesControl(max_terms=4))
        self.assertEqual(caught.exception.terms, 4)
        self.assertIsNotNone(caught.exception.estimate)

    def test_finite_iterable_is_exact(self):
        result = smoothed_limit(iter([1.0, 2.0, 3.0]), self.ctl)
        self.assertEqual(result.value, 6)
        self.assertFalse(result.accelerated)


class WindowTests(SimpleTestCase):
    def test_shape(self):
        weights = smooth_window(400)
        self.assertEqual(len(weights), 400)
        self.assertTrue((weights[:100] == 1.0).all())
        self.assertTrue((weights[1:] <= weights[:-1]).all())
        self.assertLess(weights[-1], 1e-100)
        self.assertGreater(weights[-1], -1e-300)


class ControlTests(SimpleTestCase):
    def test_control_validation(self):
        with self.assertRaises(PreconditionError):
            SeriesControl(max_terms=0)
        with self.assertRaises(PreconditionError):
            SeriesControl(rel_tol=0)
        with self.assertRaises(PreconditionError):
            SeriesControl(consecutive_small=0)
