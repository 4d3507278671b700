"""
Summation of slowly convergent series.

Terms arrive from an iterator. `sum_series` applies the plain stop rule to
series that settle quickly (and to finite sums, whose trailing terms are
exact zeros). `smoothed_limit` handles the algebraically decaying and slowly
oscillating expansions: it weights the first N terms with a smooth cutoff,
doubles N, and extrapolates the weighted sums in N when their truncation
error is a known set of powers of 1/N.
"""
import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, PreconditionError

logger = logging.getLogger(__name__)

WINDOW_FIRST_LEVEL = 1024
WINDOW_FLAT = 0.25


@dataclass(frozen=True)
class SeriesControl:
    """Budget and stop rule shared by every series in the app"""

    max_terms: int = 500
    rel_tol: float = 1e-16
    consecutive_small: int = 3

    def __post_init__(self):
        if self.max_terms < 1:
            raise PreconditionError("SeriesControl.max_terms must be at least 1")
        if not self.rel_tol > 0:
            raise PreconditionError("SeriesControl.rel_tol must be positive")
        if self.consecutive_small < 1:
            raise PreconditionError("SeriesControl.consecutive_small must be at least 1")


@dataclass(frozen=True)
class SeriesSum:
    value: complex
    terms: int
    error_estimate: float
    accelerated: bool

    def diagnostics(self):
        return {
            'series_terms': self.terms,
            'series_error_estimate': self.error_estimate,
            'series_accelerated': self.accelerated,
        }


def fsum_complex(values):
    return complex(
        math.fsum(v.real for v in values),
        math.fsum(v.imag for v in values),
    )


def sum_series(terms, ctl=None, what="series"):
    """
    Sum an iterable of complex terms until consecutive_small successive terms
    fall below rel_tol * |partial sum|.

    Returns:
        SeriesSum; a finite iterable is summed completely.

    Raises:
        ConvergenceError: max_terms reached first, carrying the partial sum
    """
    ctl = ctl or SeriesControl()
    values = []
    running = 0j
    small = 0
    for count, term in enumerate(itertools.islice(terms, ctl.max_terms), start=1):
        term = complex(term)
        values.append(term)
        running += term
        if abs(term) <= ctl.rel_tol * abs(running):
            small += 1
        else:
            small = 0
        if small >= ctl.consecutive_small:
            return SeriesSum(fsum_complex(values), count, abs(term), False)
    if len(values) < ctl.max_terms:
        return SeriesSum(fsum_complex(values), len(values), 0.0, False)

    logger.warning(f"{what} did not settle after {len(values)} terms")
    raise ConvergenceError(
        f"{what} did not converge within {ctl.max_terms} terms",
        estimate=fsum_complex(values),
        terms=len(values),
    )


def _edge(t):
    out = np.zeros_like(t)
    inside = t > 0
    out[inside] = np.exp(-1.0 / t[inside])
    return out


def smooth_window(count, flat=WINDOW_FLAT):
    """
    Weights w(n / count) for n < count: exactly 1 up to flat * count, then
    an infinitely differentiable descent that reaches 0 at n = count.
    """
    x = np.arange(count, dtype=float) / count
    t = np.clip((x - flat) / (1.0 - flat), 0.0, 1.0)
    rising = _edge(t)
    falling = _edge(1.0 - t)
    return falling / (rising + falling)


def smoothed_limit(terms, ctl=None, exponents=(), what="series"):
    """
    Limit of a slowly convergent series from smoothly weighted partial sums.

    The weighted sum W(N) of the first N terms misses the tail only through
    the smooth part of the terms: oscillating parts (alternating signs, or
    phases that turn many times over the cutoff) cancel to far below
    rounding. When the smooth part decays algebraically, W(N) = S +
    sum_k c_k N^{-p_k} with the p_k given in `exponents`, and each doubling
    of N removes one more power by Richardson's rule.

    Args:
        terms: iterable of terms, normally infinite
        ctl: SeriesControl; max_terms caps N, rel_tol and consecutive_small
            govern how many successive extrapolated values must agree
        exponents: increasing p_k > 0 of the smooth remainder; empty when the
            terms carry no smooth part

    Returns:
        SeriesSum with accelerated=True; a finite iterable is summed exactly.

    Raises:
        ConvergenceError: max_terms reached, carrying the steadiest estimate
    """
    ctl = ctl or SeriesControl()
    iterator = iter(terms)
    values = []
    count = min(WINDOW_FIRST_LEVEL, ctl.max_terms)
    previous_row = None
    previous = None
    best, best_change = None, math.inf
    agree = 0

    while count <= ctl.max_terms:
        values.extend(complex(v) for v in itertools.islice(iterator, count - len(values)))
        if len(values) < count:
            return SeriesSum(fsum_complex(values), len(values), 0.0, False)

        weighted = complex(np.dot(smooth_window(count), np.asarray(values, dtype=complex)))
        row = [weighted]
        if previous_row is not None:
            for k, exponent in enumerate(exponents[:len(previous_row)]):
                factor = 2.0 ** exponent
                row.append((factor * row[k] - previous_row[k]) / (factor - 1))
        estimate = row[-1]

        if previous is not None:
            change = abs(estimate - previous)
            if change < best_change:
                best, best_change = estimate, change
            if change <= ctl.rel_tol * abs(estimate):
                agree += 1
                if agree >= ctl.consecutive_small:
                    return SeriesSum(estimate, count, change, True)
            else:
                agree = 0
        previous_row, previous = row, estimate
        count *= 2

    estimate = best if best is not None else previous
    logger.warning(f"{what} did not settle after {len(values)} terms")
    raise ConvergenceError(
        f"{what} did not converge within {ctl.max_terms} terms",
        estimate=estimate,
        terms=len(values),
    )
