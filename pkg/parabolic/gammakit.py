"""
Complex Gamma-family primitives.

All functions accept anything `complex()` understands and return Python complex
numbers. Poles of Gamma are detected within POLE_TOL of the nonpositive integers.
"""
import cmath
import math

from .exceptions import PoleError, ZeroBaseError

POLE_TOL = 1e-12

# Lanczos approximation, g = 7, n = 9
LANCZOS_G = 7
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# B_2k / (2k (2k - 1)) for the Stirling series of log Gamma
STIRLING_COEFFICIENTS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

# B_2k / 2k for the asymptotic series of digamma
DIGAMMA_COEFFICIENTS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
)

ASYMPTOTIC_SHIFT = 10.0
HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
SQRT_PI = math.sqrt(math.pi)


def pole_index(z):
    """Return the nonpositive integer z sits on, or None"""
    z = complex(z)
    if abs(z.imag) > POLE_TOL:
        return None
    n = round(z.real)
    if n <= 0 and abs(z.real - n) <= POLE_TOL:
        return int(n)
    return None


def is_pole(z):
    return pole_index(z) is not None


def _check_pole(z, name):
    if is_pole(z):
        raise PoleError(f"{name} has a pole at z = {z}")


def _lanczos(z):
    """Gamma for Re z >= 0.5, evaluated in log form to delay overflow"""
    z = z - 1
    x = LANCZOS_COEFFICIENTS[0]
    for i in range(1, LANCZOS_G + 2):
        x += LANCZOS_COEFFICIENTS[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return cmath.exp(HALF_LOG_TWO_PI + (z + 0.5) * cmath.log(t) - t) * x


def gamma(z):
    """
    Complex Gamma function.

    Lanczos approximation in the half-plane Re z >= 0.5, reflection
    Gamma(z) Gamma(1 - z) = pi / sin(pi z) elsewhere.

    Raises:
        PoleError: z is a nonpositive integer (within POLE_TOL)
    """
    z = complex(z)
    _check_pole(z, "Gamma")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * _lanczos(1 - z))
    return _lanczos(z)


def rgamma(z):
    """Reciprocal Gamma, entire: exactly 0 at the poles of Gamma"""
    z = complex(z)
    if is_pole(z):
        return 0j
    if z.real < 0.5:
        return cmath.sin(math.pi * z) * _lanczos(1 - z) / math.pi
    if z.real > 160.0:
        return cmath.exp(-log_gamma(z))
    return 1.0 / _lanczos(z)


def log_gamma(z):
    """
    Logarithm of Gamma.

    For Re z >= 0.5 this is the principal (analytic) branch, built from the
    Stirling series after shifting the argument to Re z >= 10. Further left
    the shift accumulates principal logarithms of negative-real-part factors,
    so the imaginary part may differ from the analytic branch by a multiple
    of 2 pi; exp(log_gamma(z)) equals gamma(z) everywhere.
    """
    z = complex(z)
    _check_pole(z, "log Gamma")
    shift = max(0, math.ceil(ASYMPTOTIC_SHIFT - z.real))
    correction = 0j
    for k in range(shift):
        correction += cmath.log(z + k)
    w = z + shift
    inv = 1.0 / w
    inv2 = inv * inv
    series = 0j
    power = inv
    for coefficient in STIRLING_COEFFICIENTS:
        series += coefficient * power
        power *= inv2
    value = (w - 0.5) * cmath.log(w) - w + HALF_LOG_TWO_PI + series
    return value - correction


def digamma(z):
    """Logarithmic derivative of Gamma via upward recurrence and the asymptotic series"""
    z = complex(z)
    _check_pole(z, "digamma")
    shift = max(0, math.ceil(ASYMPTOTIC_SHIFT - z.real))
    correction = 0j
    for k in range(shift):
        correction += 1.0 / (z + k)
    w = z + shift
    inv2 = 1.0 / (w * w)
    series = 0j
    power = inv2
    for coefficient in DIGAMMA_COEFFICIENTS:
        series += coefficient * power
        power *= inv2
    return cmath.log(w) - 0.5 / w - series - correction


def pochhammer(nu, n):
    """Rising factorial (nu)_n as a finite product; valid at Gamma poles"""
    if n < 0:
        raise ValueError(f"pochhammer needs a nonnegative integer n, got {n}")
    nu = complex(nu)
    result = 1 + 0j
    for k in range(n):
        result *= nu + k
    return result


def principal_power(base, exponent):
    """
    base ** exponent on the principal branch, arg(base) in (-pi, pi].

    Raises:
        ZeroBaseError: base is zero
    """
    base = complex(base)
    exponent = complex(exponent)
    if base == 0:
        raise ZeroBaseError(f"principal_power of zero with exponent {exponent}")
    if exponent == 0:
        return 1 + 0j
    if exponent == 1:
        return base
    # -0.0 imaginary part would put arg at -pi
    base = complex(base.real, base.imag + 0.0)
    return cmath.exp(exponent * cmath.log(base))


def principal_sqrt(z):
    """Principal square root with the same signed-zero normalization as principal_power"""
    z = complex(z)
    return cmath.sqrt(complex(z.real, z.imag + 0.0))
