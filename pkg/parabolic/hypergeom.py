"""
Kummer confluent hypergeometric functions Phi (1F1) and Psi (U), Laguerre
polynomials, and independent quadrature oracles for both Kummer functions.
"""
import cmath
import itertools
import logging
import math
import sys
from dataclasses import replace

from .exceptions import ConvergenceError, PoleError, PreconditionError
from .gammakit import gamma, is_pole, principal_power, rgamma
from .quad import QuadSpec, integrate_beta_type, integrate_endpoint_singular
from .series import SeriesControl, smoothed_limit, sum_series

logger = logging.getLogger(__name__)

KUMMER_SWITCH = 5.0
INTEGER_TOL = 1e-12

# the direct series loses roughly exp(|z| - Re z) to cancellation
PHI_SERIES_LOSS = 10.0
PHI_CANCELLATION_TOL = 1e-8

# psi_auto routing
PSI_SERIES_RADIUS = 2.0
PSI_SERIES_FALLBACK_RADIUS = 12.0
PSI_INTEGER_GAP = 0.05
PSI_ASYMPTOTIC_RADIUS = 40.0
PSI_ASYMPTOTIC_TOL = 1e-17
PSI_ASYMPTOTIC_ACCEPT = 1e-14

PHI_CONTROL = SeriesControl()
TRICOMI_CONTROL = SeriesControl(max_terms=20000, rel_tol=1e-5, consecutive_small=1)
ORACLE_QUAD = QuadSpec(abs_tol=1e-250, rel_tol=1e-12, max_evaluations=20000)


def integer_gap(value):
    """Distance from value to the nearest integer (complex distance)"""
    value = complex(value)
    return abs(value - round(value.real))


def is_integer(value):
    return integer_gap(value) <= INTEGER_TOL


def _phi_terms(nu, mu, z):
    term = 1 + 0j
    for n in itertools.count():
        yield term
        term *= (nu + n) / (mu + n) * z / (n + 1)


def _phi_series(nu, mu, z, ctl):
    largest = 0.0

    def tracked():
        nonlocal largest
        for term in _phi_terms(nu, mu, z):
            largest = max(largest, abs(term))
            yield term

    result = sum_series(tracked(), ctl or PHI_CONTROL, what="Phi series")
    value = result.value
    if value != 0 and largest * sys.float_info.epsilon > PHI_CANCELLATION_TOL * abs(value):
        logger.warning(f"Phi({nu}, {mu}; {z}) series cancels: largest term {largest:.3g}")
        raise ConvergenceError(
            f"Phi series lost its precision to cancellation at z = {z}",
            estimate=value,
            terms=result.terms,
        )
    return value


def _connection_covers(nu, mu, z):
    if z.imag == 0:
        return False
    if abs(z) >= PSI_ASYMPTOTIC_RADIUS:
        return True
    first = rgamma(mu - nu) == 0 or nu.real > 0 or (nu - mu + 1).real > 0
    second = rgamma(nu) == 0 or (mu - nu).real > 0 or (1 - nu).real > 0
    return first and second


def phi_route(nu, mu, z):
    """Name of the first step phi takes at (nu, mu, z)"""
    nu, mu, z = complex(nu), complex(mu), complex(z)
    if z.real < 0 and abs(z) > KUMMER_SWITCH:
        return 'kummer_transform'
    if abs(z) - z.real > PHI_SERIES_LOSS and _connection_covers(nu, mu, z):
        return 'psi_connection'
    return 'series'


def phi(nu, mu, z, ctl=None):
    """
    Kummer's function Phi(nu, mu; z) = sum (nu)_n / (mu)_n z^n / n!.

    For Re z < 0 with |z| > KUMMER_SWITCH the series runs on
    e^z Phi(mu - nu, mu; -z) instead. Far from the positive real axis, where
    the terms would cancel, Phi comes from the connection with two Psi
    values (phi_connection).

    Raises:
        PoleError: mu is a nonpositive integer
        ConvergenceError: ctl.max_terms reached before the stop rule, or the
            series cancelled below PHI_CANCELLATION_TOL and no other route
            applies
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    if is_pole(mu):
        raise PoleError(f"Phi is undefined for mu = {mu}")
    route = phi_route(nu, mu, z)
    if route == 'kummer_transform':
        return cmath.exp(z) * phi(mu - nu, mu, -z, ctl)
    if route == 'psi_connection':
        return phi_connection(nu, mu, z)
    return _phi_series(nu, mu, z, ctl)


def _psi_far(nu, mu, z, spec=None):
    if abs(z) >= PSI_ASYMPTOTIC_RADIUS:
        return psi_asymptotic(nu, mu, z)
    if nu.real > 0:
        return psi_integral_oracle(nu, mu, z, spec)
    shifted = nu + 1 - mu
    if shifted.real > 0:
        return principal_power(z, 1 - mu) * psi_integral_oracle(shifted, 2 - mu, z, spec)
    raise PreconditionError(f"no Psi integral covers nu={nu}, mu={mu}")


def phi_connection(nu, mu, z, spec=None):
    """
    Phi off the real axis from two Psi values,

        Phi(nu, mu; z) / Gamma(mu) = e^{i s pi nu} / Gamma(mu - nu) Psi(nu, mu; z)
            + e^{-i s pi (mu - nu)} / Gamma(nu) e^z Psi(mu - nu, mu; -z)

    with s the sign of Im z. Each Psi comes from its asymptotic expansion when
    |z| >= PSI_ASYMPTOTIC_RADIUS and from the rotated Laplace integral
    otherwise, so no term of the power series is ever formed.

    Raises:
        PreconditionError: z real, or a Psi needs an integral that does not
            converge for these parameters
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    if z.imag == 0:
        raise PreconditionError(f"Phi connection needs Im z != 0, got {z}")
    sign = 1 if z.imag > 0 else -1

    first = 0j
    weight = rgamma(mu - nu)
    if weight != 0:
        first = cmath.exp(1j * sign * math.pi * nu) * weight * _psi_far(nu, mu, z, spec)

    second = 0j
    weight = rgamma(nu)
    if weight != 0:
        second = (
            cmath.exp(-1j * sign * math.pi * (mu - nu))
            * weight
            * cmath.exp(z)
            * _psi_far(mu - nu, mu, -z, spec)
        )
    return gamma(mu) * (first + second)


def phi_integral_oracle(nu, mu, z, spec=None):
    """
    Phi through its Euler integral

        Gamma(mu) / (Gamma(nu) Gamma(mu - nu)) int_0^1 e^{zt} t^{nu-1} (1-t)^{mu-nu-1} dt

    Raises:
        PreconditionError: unless 0 < Re nu < Re mu
        ConvergenceError: quadrature gave up
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    if not 0 < nu.real < mu.real:
        raise PreconditionError(f"Phi integral needs 0 < Re nu < Re mu, got nu={nu}, mu={mu}")
    left = nu - 1
    right = mu - nu - 1

    def integrand(t, one_minus_t):
        return cmath.exp(z * t + left * math.log(t) + right * math.log(one_minus_t))

    result = integrate_beta_type(integrand, left.real, right.real, spec or ORACLE_QUAD)
    value = result.require("Phi integral")
    return gamma(mu) * rgamma(nu) * rgamma(mu - nu) * value


def psi(nu, mu, z, ctl=None):
    """
    Tricomi's function Psi(nu, mu; z) as the two-Phi combination

        Gamma(1-mu)/Gamma(nu+1-mu) Phi(nu, mu; z)
            + Gamma(mu-1)/Gamma(nu) z^{1-mu} Phi(nu+1-mu, 2-mu; z)

    with the principal branch of z^{1-mu}. A vanishing reciprocal Gamma
    drops its term without evaluating the series.

    Raises:
        PreconditionError: mu is an integer, or z = 0 with Re mu >= 1
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    if is_integer(mu):
        raise PreconditionError(f"Psi series needs non-integer mu, got {mu}")
    if z == 0 and mu.real >= 1:
        raise PreconditionError(f"Psi is singular at z = 0 for Re mu >= 1 (mu = {mu})")

    first = 0j
    weight = rgamma(nu + 1 - mu)
    if weight != 0:
        first = gamma(1 - mu) * weight * phi(nu, mu, z, ctl)

    second = 0j
    weight = rgamma(nu)
    if weight != 0 and z != 0:
        second = (
            gamma(mu - 1)
            * weight
            * principal_power(z, 1 - mu)
            * phi(nu + 1 - mu, 2 - mu, z, ctl)
        )
    return first + second


def _on_negative_axis(z):
    return z.imag == 0 and z.real <= 0


def psi_integral_oracle(nu, mu, z, spec=None):
    """
    Psi through its Laplace integral, taken along the ray t = s e^{-i arg z}
    on which e^{-zt} decays without oscillating:

        e^{-i nu arg z} / Gamma(nu) int_0^inf e^{-|z| s} s^{nu-1} (1 + s e^{-i arg z})^{mu-nu-1} ds

    Raises:
        PreconditionError: unless Re nu > 0 and z lies off (-inf, 0]
        ConvergenceError: quadrature gave up
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    if nu.real <= 0 or _on_negative_axis(z):
        raise PreconditionError(
            f"Psi integral needs Re nu > 0 and z off (-inf, 0], got nu={nu}, z={z}"
        )
    left = nu - 1
    right = mu - nu - 1
    radius = abs(z)
    theta = cmath.phase(z)
    direction = cmath.exp(-1j * theta)

    def integrand(s):
        if theta == 0:
            tail = math.log1p(s)
        else:
            tail = cmath.log(1 + direction * s)
        return cmath.exp(-radius * s + left * math.log(s) + right * tail)

    split = min(max(1.0 / radius, 0.05), 20.0)
    result = integrate_endpoint_singular(
        integrand, left.real, replace(spec or ORACLE_QUAD, split_point=split)
    )
    return rgamma(nu) * cmath.exp(-1j * theta * nu) * result.require("Psi integral")


def psi_asymptotic(nu, mu, z):
    """
    Psi(nu, mu; z) ~ z^{-nu} sum_k (nu)_k (nu-mu+1)_k / k! (-z)^{-k}, cut at
    the first term below PSI_ASYMPTOTIC_TOL of the sum, or at the smallest
    term once that is below PSI_ASYMPTOTIC_ACCEPT.

    Raises:
        PreconditionError: |z| < PSI_ASYMPTOTIC_RADIUS or z on (-inf, 0]
        ConvergenceError: the terms turned upward above PSI_ASYMPTOTIC_ACCEPT
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    if abs(z) < PSI_ASYMPTOTIC_RADIUS or _on_negative_axis(z):
        raise PreconditionError(
            f"Psi expansion needs |z| >= {PSI_ASYMPTOTIC_RADIUS} off (-inf, 0], got {z}"
        )
    term = 1 + 0j
    total = 1 + 0j
    for k in itertools.count(1):
        following = term * (nu + k - 1) * (nu - mu + k) / (k * -z)
        if following == 0:
            break
        if abs(following) >= abs(term):
            if abs(term) <= PSI_ASYMPTOTIC_ACCEPT * abs(total):
                break
            raise ConvergenceError(
                f"Psi expansion at z = {z} turned before reaching its tolerance",
                estimate=principal_power(z, -nu) * total,
                terms=k,
            )
        total += following
        term = following
        if abs(term) <= PSI_ASYMPTOTIC_TOL * abs(total):
            break
    return principal_power(z, -nu) * total


def psi_auto(nu, mu, z, ctl=None, spec=None):
    """
    Psi by whichever route is trustworthy at (nu, mu, z).

    1. the Phi combination when |z| <= 2 and mu sits away from the integers
    2. the asymptotic expansion when |z| >= 40 off the negative axis
    3. the Laplace integral when Re nu > 0 and Re z > 0
    4. Kummer's z^{1-mu} Psi(nu+1-mu, 2-mu; z) through the integral when
       Re(nu+1-mu) > 0 and Re z > 0
    5. the Phi combination again for non-integer mu up to |z| = 12
    """
    nu, mu, z = complex(nu), complex(mu), complex(z)
    series_ok = not (z == 0 and mu.real >= 1)
    if abs(z) <= PSI_SERIES_RADIUS and integer_gap(mu) >= PSI_INTEGER_GAP and series_ok:
        return psi(nu, mu, z, ctl)
    if abs(z) >= PSI_ASYMPTOTIC_RADIUS and not _on_negative_axis(z):
        return psi_asymptotic(nu, mu, z)
    if z.real > 0:
        if nu.real > 0:
            return psi_integral_oracle(nu, mu, z, spec)
        shifted = nu + 1 - mu
        if shifted.real > 0:
            return principal_power(z, 1 - mu) * psi_integral_oracle(shifted, 2 - mu, z, spec)
    if not is_integer(mu) and abs(z) <= PSI_SERIES_FALLBACK_RADIUS and series_ok:
        logger.debug(f"Psi({nu}, {mu}; {z}) falls back to the Phi combination")
        return psi(nu, mu, z, ctl)
    raise PreconditionError(f"no Psi route covers nu={nu}, mu={mu}, z={z}")


def laguerre_sequence(alpha, x):
    """Yield L_0^alpha(x), L_1^alpha(x), ... by the three-term recurrence"""
    alpha, x = complex(alpha), complex(x)
    previous = 1 + 0j
    yield previous
    current = 1 + alpha - x
    k = 1
    while True:
        yield current
        previous, current = current, ((2 * k + 1 + alpha - x) * current - (k + alpha) * previous) / (k + 1)
        k += 1


def laguerre(n, alpha, x):
    """Generalized Laguerre polynomial L_n^alpha(x) by forward recurrence"""
    if n < 0:
        raise ValueError(f"laguerre needs a nonnegative degree, got {n}")
    return next(itertools.islice(laguerre_sequence(alpha, x), n, None))


def tricomi_psi_series(nu, mu, x, ctl=None):
    """
    Psi(nu, mu; x) = 1/Gamma(nu) sum_n L_n^{mu-1}(x) / (n + nu).

    The terms decay slowly and oscillate like cos(2 sqrt(n x)) with no
    smooth part, so smoothly weighted partial sums settle without any
    extrapolation.

    Raises:
        PreconditionError: x not positive real, Re mu >= 3/2, or nu a
            nonpositive integer
        ConvergenceError: the weighted sums still moved by more than
            ctl.rel_tol at ctl.max_terms; the estimate is scaled like the value
    """
    nu, mu = complex(nu), complex(mu)
    x = complex(x)
    if x.imag != 0 or not x.real > 0:
        raise PreconditionError(f"Tricomi series needs real x > 0, got {x}")
    if mu.real >= 1.5:
        raise PreconditionError(f"Tricomi series needs Re mu < 3/2, got {mu}")
    if is_pole(nu):
        raise PreconditionError(f"Tricomi series needs nu off the nonpositive integers, got {nu}")

    terms = (value / (n + nu) for n, value in enumerate(laguerre_sequence(mu - 1, x.real)))
    try:
        result = smoothed_limit(terms, ctl or TRICOMI_CONTROL, what="Tricomi series")
    except ConvergenceError as exc:
        raise ConvergenceError(
            str(exc), estimate=rgamma(nu) * exc.estimate, terms=exc.terms
        ) from exc
    return rgamma(nu) * result.value


def laguerre_generating_sum(alpha, x, r, ctl=None):
    """
    sum_n L_n^alpha(x) r^n for |r| < 1; the closed form is
    (1 - r)^{-alpha-1} exp(-x r / (1 - r))
    """
    r = complex(r)
    if not abs(r) < 1:
        raise PreconditionError(f"generating sum needs |r| < 1, got {r}")
    terms = (value * r ** n for n, value in enumerate(laguerre_sequence(alpha, x)))
    return sum_series(terms, ctl or PHI_CONTROL, what="Laguerre generating sum").value
