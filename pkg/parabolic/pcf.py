"""
Parabolic cylinder function D_nu(z) and the quantities built on it.

The default route is the Phi combination

    D_nu(z) = 2^{nu/2} e^{-z^2/4} [ sqrt(pi)/Gamma((1-nu)/2) Phi(-nu/2, 1/2; z^2/2)
                                     - sqrt(2 pi) z/Gamma(-nu/2) Phi((1-nu)/2, 3/2; z^2/2) ]

which is entire in nu and z. A reciprocal Gamma that vanishes removes its
term exactly. The Psi form 2^{nu/2} e^{-z^2/4} Psi(-nu/2, 1/2; z^2/2) is kept
as an independent route.
"""
import cmath
import math
from dataclasses import dataclass

from .exceptions import PreconditionError
from .gammakit import SQRT_PI, principal_power, rgamma
from .hypergeom import phi, psi_auto

SQRT_TWO_PI = math.sqrt(2.0 * math.pi)
SQRT_TWO_OVER_PI = math.sqrt(2.0 / math.pi)
SQRT_TWO = math.sqrt(2.0)
DEFECT_GUARD = 1e-300
MAX_FD_STEP = 0.05

ROUTE_CHOICES = [
    ('phi_combination', 'Phi combination (entire)'),
    ('psi_form', 'Psi form (oracle)'),
]

DERIV_ORDER_CHOICES = [
    (2, 'Second-order central difference'),
    (4, 'Fourth-order central difference'),
]


@dataclass(frozen=True)
class PcfEvalPolicy:
    """How D_nu is evaluated and differentiated in nu"""

    route: str = 'phi_combination'
    deriv_step: float = 1e-3
    deriv_order: int = 4

    def __post_init__(self):
        if self.route not in dict(ROUTE_CHOICES):
            raise PreconditionError(f"unknown D route {self.route!r}")
        if not 0 < self.deriv_step <= 0.1:
            raise PreconditionError(f"deriv_step must lie in (0, 0.1], got {self.deriv_step}")
        if self.deriv_order not in dict(DERIV_ORDER_CHOICES):
            raise PreconditionError(f"deriv_order must be 2 or 4, got {self.deriv_order}")


DEFAULT_POLICY = PcfEvalPolicy()


def _pcf_d_phi(nu, z):
    x = z * z / 2
    total = 0j
    weight = rgamma(0.5 - nu / 2)
    if weight != 0:
        total += SQRT_PI * weight * phi(-nu / 2, 0.5, x)
    weight = rgamma(-nu / 2)
    if weight != 0 and z != 0:
        total -= SQRT_TWO_PI * z * weight * phi(0.5 - nu / 2, 1.5, x)
    return principal_power(2, nu / 2) * cmath.exp(-z * z / 4) * total


def _pcf_d_psi(nu, z):
    if z == 0:
        raise PreconditionError("the Psi form of D needs z != 0")
    if z.real <= 0:
        raise PreconditionError(f"the Psi form of D needs Re z > 0, got {z}")
    return principal_power(2, nu / 2) * cmath.exp(-z * z / 4) * psi_auto(-nu / 2, 0.5, z * z / 2)


def pcf_d(nu, z, policy=None):
    """
    Parabolic cylinder function D_nu(z).

    Raises:
        ConvergenceError: a Phi series did not settle
        PreconditionError: psi_form route outside Re z > 0
    """
    policy = policy or DEFAULT_POLICY
    nu, z = complex(nu), complex(z)
    if policy.route == 'psi_form':
        return _pcf_d_psi(nu, z)
    return _pcf_d_phi(nu, z)


def _central_difference(f, x, h, order):
    if order == 2:
        return (f(x + h) - f(x - h)) / (2 * h)
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def pcf_d_dnu(nu, z, policy=None):
    """
    d/dnu D_nu(z) by central differences with one Richardson level
    (steps h and h/2, error order policy.deriv_order)
    """
    policy = policy or DEFAULT_POLICY
    nu, z = complex(nu), complex(z)

    def d_of(order_value):
        return pcf_d(order_value, z, policy)

    h = policy.deriv_step
    order = policy.deriv_order
    coarse = _central_difference(d_of, nu, h, order)
    fine = _central_difference(d_of, nu, h / 2, order)
    factor = 2 ** order
    return (factor * fine - coarse) / (factor - 1)


def connection_defect(nu, z):
    """
    Relative defect of the connection formula

        e^{i pi (nu-1)/2} D_{-nu}(iz) + e^{-i pi (nu-1)/2} D_{-nu}(-iz)
            = sqrt(2 pi)/Gamma(nu) D_{nu-1}(z)
    """
    nu, z = complex(nu), complex(z)
    rotation = cmath.exp(0.5j * math.pi * (nu - 1))
    lhs = rotation * pcf_d(-nu, 1j * z) + pcf_d(-nu, -1j * z) / rotation
    rhs = SQRT_TWO_PI * rgamma(nu) * pcf_d(nu - 1, z)
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + DEFECT_GUARD)


def pcf_recurrence_defect(nu, z):
    """Relative defect of D_{nu+1}(z) - z D_nu(z) + nu D_{nu-1}(z) = 0"""
    nu, z = complex(nu), complex(z)
    up = pcf_d(nu + 1, z)
    middle = z * pcf_d(nu, z)
    down = nu * pcf_d(nu - 1, z)
    return abs(up - middle + down) / (abs(up) + abs(middle) + abs(down) + DEFECT_GUARD)


def erf_via_pcf(z):
    """erf(z) = 1 - sqrt(2/pi) e^{-z^2/2} D_{-1}(z sqrt 2)"""
    z = complex(z)
    return 1 - SQRT_TWO_OVER_PI * cmath.exp(-z * z / 2) * pcf_d(-1, z * SQRT_TWO)


def erf(z):
    """Error function: math.erf on the real line, 2z/sqrt(pi) Phi(1/2, 3/2; -z^2) elsewhere"""
    z = complex(z)
    if z.imag == 0:
        return complex(math.erf(z.real))
    return 2 * z / SQRT_PI * phi(0.5, 1.5, -z * z)


def dawson_phi(z):
    """-2z/sqrt(pi) Phi(1, 3/2; -z^2), the kernel factor of the order-derivative identity"""
    z = complex(z)
    return -2 * z / SQRT_PI * phi(1, 1.5, -z * z)


def erfi_check(z):
    """Relative defect of dawson_phi(z) = i e^{-z^2} erf(iz) with erf taken from D_{-1}"""
    z = complex(z)
    lhs = dawson_phi(z)
    rhs = 1j * cmath.exp(-z * z) * erf_via_pcf(1j * z)
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + DEFECT_GUARD)


def bessel_j_halforder(nu, x):
    """
    J_{nu-1/2}(x^2/2) = 2^{1-2nu}/Gamma(nu+1/2) x^{2nu-1} e^{-i x^2/2} Phi(nu, 2nu; i x^2)
    """
    if not x > 0:
        raise PreconditionError(f"bessel_j_halforder needs x > 0, got {x}")
    nu = complex(nu)
    x2 = x * x
    return (
        principal_power(2, 1 - 2 * nu)
        * rgamma(nu + 0.5)
        * principal_power(x, 2 * nu - 1)
        * cmath.exp(-0.5j * x2)
        * phi(nu, 2 * nu, 1j * x2)
    )


def bessel_k_halforder(nu, x):
    """K_{nu-1/2}(x^2/2) = sqrt(pi) x^{2nu-1} e^{-x^2/2} Psi(nu, 2nu; x^2)"""
    if not x > 0:
        raise PreconditionError(f"bessel_k_halforder needs x > 0, got {x}")
    nu = complex(nu)
    x2 = x * x
    return SQRT_PI * principal_power(x, 2 * nu - 1) * math.exp(-x2 / 2) * psi_auto(nu, 2 * nu, x2)


def hermite_case(n, z):
    """
    D_n(z) for integer n >= 0 from the physicists' Hermite recurrence,
    D_n(z) = 2^{-n/2} e^{-z^2/4} H_n(z / sqrt 2)
    """
    if n < 0:
        raise PreconditionError(f"hermite_case needs n >= 0, got {n}")
    z = complex(z)
    w = z / SQRT_TWO
    previous, current = 1 + 0j, 2 * w
    if n == 0:
        current = previous
    for k in range(1, n):
        previous, current = current, 2 * w * current - 2 * k * previous
    return 2.0 ** (-n / 2) * cmath.exp(-z * z / 4) * current


def hermite_normalized_sequence(z):
    """Yield D_n(z) / sqrt(n!) for n = 0, 1, 2, ..."""
    z = complex(z)
    previous = cmath.exp(-z * z / 4)
    yield previous
    current = z * previous
    k = 1
    while True:
        yield current
        previous, current = current, (z * current - math.sqrt(k) * previous) / math.sqrt(k + 1)
        k += 1


def shifted_normalized_sequence(order, z, policy=None):
    """
    Yield D_{order+n}(z) / sqrt(n!) for n = 0, 1, 2, ...

    Two pcf_d evaluations start the recurrence
    D_{v+1}(z) = z D_v(z) - v D_{v-1}(z); the sqrt(n!) scaling keeps it from
    overflowing and does not amplify rounding.
    """
    order, z = complex(order), complex(z)
    previous = pcf_d(order, z, policy)
    yield previous
    current = pcf_d(order + 1, z, policy)
    k = 1
    while True:
        yield current
        previous, current = current, (
            (z * current - (order + k) * previous / math.sqrt(k)) / math.sqrt(k + 1)
        )
        k += 1


def hermite_normalized(n, z):
    """D_n(z) / sqrt(n!) without forming n!"""
    if n < 0:
        raise PreconditionError(f"hermite_normalized needs n >= 0, got {n}")
    for k, value in enumerate(hermite_normalized_sequence(z)):
        if k == n:
            return value


def _check_step(h):
    if not 0 < h <= MAX_FD_STEP:
        raise PreconditionError(f"finite-difference step must lie in (0, {MAX_FD_STEP}], got {h}")


def _second_derivative(f, z, h):
    return (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) - f(z - 2 * h)) / (12 * h * h)


def ode_residual_single(nu, z, h=0.01):
    """
    |y'' + (nu + 1/2 - z^2/4) y| / max(|y|, 1e-30) for y = D_nu, with the
    five-point second derivative refined by one Richardson step
    """
    _check_step(h)
    nu, z = complex(nu), complex(z)

    def y(point):
        return pcf_d(nu, point)

    coarse = _second_derivative(y, z, h)
    fine = _second_derivative(y, z, h / 2)
    second = (16 * fine - coarse) / 15
    value = y(z)
    return abs(second + (nu + 0.5 - z * z / 4) * value) / max(abs(value), 1e-30)


def ode_residual_product(nu, mu, z, h=0.02):
    """
    Normalized residual of the fourth-order equation satisfied by
    y(z) = D_nu(z) D_{nu+mu-1}(z):

        y'''' + 4 (nu + mu/2 - z^2/4) y'' - 3 z y' + mu (mu - 2) y = 0

    The residual is divided by the sum of the absolute values of its terms.
    """
    _check_step(h)
    nu, mu, z = complex(nu), complex(mu), complex(z)
    samples = {
        k: pcf_d(nu, z + k * h) * pcf_d(nu + mu - 1, z + k * h)
        for k in range(-3, 4)
    }
    first = (samples[-2] - 8 * samples[-1] + 8 * samples[1] - samples[2]) / (12 * h)
    second = (
        -samples[2] + 16 * samples[1] - 30 * samples[0] + 16 * samples[-1] - samples[-2]
    ) / (12 * h * h)
    fourth = (
        -(samples[3] + samples[-3])
        + 12 * (samples[2] + samples[-2])
        - 39 * (samples[1] + samples[-1])
        + 56 * samples[0]
    ) / (6 * h ** 4)
    terms = (
        fourth,
        4 * (nu + mu / 2 - z * z / 4) * second,
        -3 * z * first,
        mu * (mu - 2) * samples[0],
    )
    scale = sum(abs(term) for term in terms)
    return abs(sum(terms)) / max(scale, 1e-30)
