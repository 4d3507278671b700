"""
Catalog of product identities for parabolic cylinder functions.

Each entry pairs two evaluators over a ParameterPoint: the left side is the
closed product of D functions, the right side an integral or a series built
from Phi, Psi or Laguerre polynomials. verify evaluates both and compares.
"""
import cmath
import logging
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from django.conf import settings

from .exceptions import (
    ConvergenceError,
    DomainError,
    PoleError,
    PreconditionError,
    UnknownIdentityError,
    ZeroBaseError,
)
from .gammakit import SQRT_PI, digamma, gamma, is_pole, principal_power, principal_sqrt, rgamma
from .hypergeom import integer_gap, is_integer, laguerre_sequence, phi, psi_auto
from .pcf import (
    DEFAULT_POLICY,
    SQRT_TWO,
    SQRT_TWO_PI,
    bessel_j_halforder,
    bessel_k_halforder,
    erf,
    hermite_normalized_sequence,
    pcf_d,
    pcf_d_dnu,
    shifted_normalized_sequence,
)
from .quad import (
    QuadratureResult,
    QuadSpec,
    integrate_decay,
    integrate_endpoint_singular,
    integrate_fourier_damped,
)
from .series import SeriesControl, SeriesSum, smoothed_limit

logger = logging.getLogger(__name__)

LN_TWO = math.log(2.0)
NEAR_ZERO = 1e-12
REL_ERR_GUARD = 1e-300
REAL_TOL = 1e-14

# exponent budgets for truncating Gaussian and exponential tails
GAUSSIAN_BUDGET = 40.5
IMAGINARY_BUDGET = 37.0
KERNEL_BUDGET = 40.0
UNDERFLOW_EXPONENT = -700.0

QUADRATURE_TOL = 1e-8
SERIES_TOL = 1e-7
DERIVATIVE_TOL = 1e-5

SERIES_VARIANTS = ('eq59', 'eq60', 'eq61p', 'eq61m', 'eq63', 'eq64')
PRODUCT_SERIES_CONTROL = SeriesControl(max_terms=262144, rel_tol=1e-8, consecutive_small=2)
SERIES_EXTRAPOLATION_ORDERS = 4
IDENTITY_QUAD = {'abs_tol': 1e-14, 'rel_tol': 1e-10}

STATUS_CHOICES = [
    ('passed', 'Passed'),
    ('failed', 'Failed'),
    ('skipped', 'Skipped (out of domain)'),
]

EVALUATION_ERRORS = (
    ConvergenceError,
    PoleError,
    PreconditionError,
    ZeroBaseError,
    OverflowError,
    ZeroDivisionError,
)


@dataclass(frozen=True)
class ParameterPoint:
    """(nu, mu, z, a); slots an identity does not use are ignored"""

    nu: complex = 0j
    mu: complex = 0j
    z: complex = 0j
    a: complex = 0j

    def __post_init__(self):
        for name in ('nu', 'mu', 'z', 'a'):
            value = complex(getattr(self, name))
            if not cmath.isfinite(value):
                raise PreconditionError(f"parameter {name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    def as_dict(self):
        return {'nu': self.nu, 'mu': self.mu, 'z': self.z, 'a': self.a}


@dataclass(frozen=True)
class EvalContext:
    """Numerical knobs shared by both sides of every identity"""

    quad: QuadSpec = field(default_factory=QuadSpec)
    series: SeriesControl = PRODUCT_SERIES_CONTROL
    policy: object = DEFAULT_POLICY


@dataclass(frozen=True)
class IdentityDescriptor:
    id: str
    label: str
    formula: str
    domain_text: str
    lhs: object
    rhs: object
    domain: object
    equation: str = ''
    anchor: str = ''
    default_tol: float = QUADRATURE_TOL
    notes: str = ''
    report_only: bool = False
    quad_overrides: dict = field(default_factory=lambda: dict(IDENTITY_QUAD))

    def check_domain(self, point):
        """Return None when point is admissible, else the reason it is not"""
        return self.domain(point)


@dataclass(frozen=True)
class VerificationRecord:
    identity_id: str
    point: ParameterPoint
    lhs_value: complex | None
    rhs_value: complex | None
    abs_err: float | None
    rel_err: float | None
    passed: bool
    tolerance: float
    status: str
    converged: bool = True
    report_only: bool = False
    diagnostics: dict = field(default_factory=dict)


def default_context():
    """EvalContext whose quadrature defaults come from settings"""
    return EvalContext(
        quad=QuadSpec(
            abs_tol=getattr(settings, 'PCF_QUAD_ABS_TOL', 1e-13),
            rel_tol=getattr(settings, 'PCF_QUAD_REL_TOL', 1e-11),
            max_evaluations=getattr(settings, 'PCF_QUAD_MAX_EVALUATIONS', 200000),
        )
    )


# ---------------------------------------------------------------------------
# integrand helpers


def _sqrt(value):
    return principal_sqrt(value)


def _pow(base, exponent):
    return principal_power(base, exponent)


def _log_sinh2(t):
    """log sinh(2t) for t > 0 without overflow"""
    if t > 0.5:
        return 2.0 * t - LN_TWO + math.log1p(-math.exp(-4.0 * t))
    return math.log(math.sinh(2.0 * t))


def _log_cosh(t):
    return t + math.log1p(math.exp(-2.0 * t)) - LN_TWO


def _cexp(exponent):
    if exponent.real < UNDERFLOW_EXPONENT:
        return 0j
    return cmath.exp(exponent)


def _cutoff(quadratic, linear, budget=GAUSSIAN_BUDGET):
    """Smallest x > 0 with quadratic * x^2 / 2 + linear * x >= budget"""
    if quadratic > 0:
        return (-linear + math.sqrt(linear * linear + 2.0 * quadratic * budget)) / quadratic
    if linear > 0:
        return budget / linear
    raise PreconditionError("integrand has no decay to truncate against")


def _with_cutoff(spec, cutoff):
    return replace(spec, cutoff=cutoff)


def _is_real(value):
    return abs(complex(value).imag) <= REAL_TOL


def _arg_within(z, limit):
    return z != 0 and abs(cmath.phase(z)) < limit


def _first_failure(checks):
    for ok, reason in checks:
        if not ok:
            return reason
    return None


# ---------------------------------------------------------------------------
# Psi and Phi transforms against a Gaussian


def _lhs_eq12(p, ctx):
    a = p.a
    return (
        _pow(a, p.nu / 2 - p.mu / 2)
        / _pow(-a, p.nu / 2)
        * pcf_d(-p.nu, p.z / _sqrt(-a), ctx.policy)
        * pcf_d(p.nu - p.mu, p.z / _sqrt(a), ctx.policy)
    )


def _rhs_eq12(p, ctx):
    nu, mu, z, a = p.nu, p.mu, p.z, p.a
    left = mu - 1

    def integrand(x):
        return _cexp(left * math.log(x) - z * x - a * x * x / 2) * phi(nu, mu, a * x * x)

    spec = _with_cutoff(ctx.quad, _cutoff(0.0, z.real, IMAGINARY_BUDGET))
    return integrate_endpoint_singular(integrand, left.real, spec).scaled(rgamma(mu))


def _domain_eq12(p):
    return _first_failure([
        (p.a != 0, "a must be nonzero"),
        (abs(p.a.real) <= REAL_TOL, "Re a = 0 required (purely imaginary a)"),
        (p.mu.real > 0, "Re mu > 0 required"),
        (p.z.real > 0, "Re z > 0 required"),
    ])


def _gaussian_psi(p):
    """x -> x^{mu-1} e^{-a x^2/2} Psi(nu, mu; a x^2), without the transform kernel"""
    nu, mu, a = p.nu, p.mu, p.a

    def g(x):
        return _cexp((mu - 1) * math.log(x) - a * x * x / 2) * psi_auto(nu, mu, a * x * x)

    return g


def _lhs_eq19(p, ctx):
    w = 1j * p.z / _sqrt(p.a)
    rotation = cmath.exp(0.5j * math.pi * p.mu)
    other = p.mu - p.nu - 1
    return (
        rotation * pcf_d(-p.nu, w, ctx.policy) * pcf_d(other, -w, ctx.policy)
        + pcf_d(-p.nu, -w, ctx.policy) * pcf_d(other, w, ctx.policy) / rotation
    )


def _rhs_eq19(p, ctx):
    z, a, mu = p.z, p.a, p.mu
    kernel = _gaussian_psi(p)

    def integrand(x):
        return cmath.exp(-z * x) * kernel(x)

    if a.real > REAL_TOL:
        cutoff = _cutoff(a.real, z.real)
    else:
        cutoff = _cutoff(0.0, z.real, IMAGINARY_BUDGET)
    spec = _with_cutoff(ctx.quad, cutoff)
    factor = SQRT_TWO * _pow(a, mu / 2) * cmath.sin(math.pi * mu) / SQRT_PI
    return integrate_endpoint_singular(integrand, -abs(mu.real - 1), spec).scaled(factor)


def _domain_eq19(p):
    return _first_failure([
        (0 < p.mu.real < 2, "0 < Re mu < 2 required"),
        (p.a != 0, "a must be nonzero"),
        (p.a.real >= -REAL_TOL, "Re a >= 0 required"),
        (p.a.real > REAL_TOL or p.z.real > 0, "Re z > 0 required when Re a = 0"),
    ])


def _fourier_psi_domain(p, mu_low, mu_high):
    return _first_failure([
        (_is_real(p.mu), "real mu required by the Fourier route"),
        (mu_low < p.mu.real < mu_high, f"{mu_low:g} < mu < {mu_high:g} required"),
        (_is_real(p.z), "real z required by the Fourier route"),
        (p.a.real > REAL_TOL, "Re a > 0 required (purely imaginary a is recorded, not asserted)"),
    ])


def _psi_pair(p, ctx):
    w = p.z / _sqrt(p.a)
    other = p.mu - 1 - p.nu
    first = pcf_d(-p.nu, w, ctx.policy) * pcf_d(other, -w, ctx.policy)
    second = pcf_d(-p.nu, -w, ctx.policy) * pcf_d(other, w, ctx.policy)
    return first, second


def _fourier_psi(p, ctx, kind, phase, singular_exponent):
    return integrate_fourier_damped(
        _gaussian_psi(p),
        p.z.real,
        phase,
        kind,
        ctx.quad,
        scale=1.0 / math.sqrt(p.a.real),
        singular_exponent=singular_exponent,
    )


def _lhs_eq20(p, ctx):
    return _psi_pair(p, ctx)[0]


def _rhs_eq20(p, ctx):
    mu = p.mu.real
    result = _fourier_psi(p, ctx, 'sin', math.pi * mu / 2, -abs(mu - 1))
    return result.scaled(2 * _pow(p.a, p.mu / 2) / SQRT_TWO_PI)


def _lhs_eq26(p, ctx):
    first, second = _psi_pair(p, ctx)
    return first + second


def _rhs_eq26(p, ctx):
    mu = p.mu.real
    result = _fourier_psi(p, ctx, 'cos', 0.0, -abs(mu - 1))
    return result.scaled(4 * _pow(p.a, p.mu / 2) / SQRT_TWO_PI * math.sin(math.pi * mu / 2))


def _lhs_eq27(p, ctx):
    first, second = _psi_pair(p, ctx)
    return first - second


def _rhs_eq27(p, ctx):
    mu = p.mu.real
    result = _fourier_psi(p, ctx, 'sin', 0.0, 1 - abs(mu - 1))
    return result.scaled(4 * _pow(p.a, p.mu / 2) / SQRT_TWO_PI * math.cos(math.pi * mu / 2))


# ---------------------------------------------------------------------------
# Bessel kernels


def _lhs_eq31(p, ctx):
    rotation = cmath.exp(0.25j * math.pi)
    return pcf_d(-p.nu, p.z * rotation, ctx.policy) * pcf_d(-p.nu, p.z / rotation, ctx.policy)


def _rhs_eq31(p, ctx):
    nu, z = p.nu, p.z

    def integrand(x):
        return cmath.exp(-z * x) * bessel_j_halforder(nu, x)

    spec = _with_cutoff(ctx.quad, _cutoff(0.0, z.real, IMAGINARY_BUDGET))
    result = integrate_endpoint_singular(integrand, 2 * nu.real - 1, spec)
    return result.scaled(SQRT_PI * rgamma(nu))


def _domain_eq31(p):
    return _first_failure([
        (p.nu.real > 0, "Re nu > 0 required"),
        (p.z.real > 0, "Re z > 0 required (Re z = 0 converges only conditionally)"),
    ])


def _lhs_eq32(p, ctx):
    return pcf_d(-p.nu, p.z, ctx.policy) * pcf_d(p.nu - 1, -p.z, ctx.policy)


def _rhs_eq32(p, ctx):
    nu = p.nu.real

    def kernel(x):
        return bessel_k_halforder(nu, x)

    result = integrate_fourier_damped(
        kernel, p.z.real, math.pi * nu, 'sin', ctx.quad, singular_exponent=-abs(2 * nu - 1)
    )
    return result.scaled(SQRT_TWO / math.pi)


def _domain_eq32(p):
    return _first_failure([
        (_is_real(p.nu), "real nu required by the Fourier route"),
        (0 < p.nu.real < 1, "0 < nu < 1 required"),
        (_is_real(p.z), "real z required by the Fourier route"),
    ])


# ---------------------------------------------------------------------------
# squares and symmetric products


def _lhs_eq34(p, ctx):
    d = pcf_d(-p.nu, p.z, ctx.policy)
    return cmath.exp(p.z * p.z / 2) * d * d


def _rhs_eq34(p, ctx):
    nu, z = p.nu, p.z
    left = 2 * nu - 1

    def integrand(x):
        return _cexp(left * math.log(x) - 2 * z * x - 2 * x * x) * phi(nu, nu + 0.5, x * x)

    spec = _with_cutoff(ctx.quad, _cutoff(4.0, 2 * z.real))
    result = integrate_endpoint_singular(integrand, left.real, spec)
    return result.scaled(_pow(2, 2 * nu) * rgamma(2 * nu))


def _domain_positive_nu(p):
    return None if p.nu.real > 0 else "Re nu > 0 required"


def _lhs_eq35(p, ctx):
    return cmath.exp(p.z * p.z / 2) * pcf_d(-p.nu, p.z, ctx.policy) * pcf_d(-p.nu, -p.z, ctx.policy)


def _rhs_eq35(p, ctx):
    nu, z = p.nu, p.z
    left = 2 * nu - 1

    def integrand(x):
        kernel = _cexp(left * math.log(x) - 2 * x * x) * psi_auto(nu, nu + 0.5, x * x)
        return cmath.cosh(2 * z * x) * kernel

    spec = _with_cutoff(ctx.quad, _cutoff(4.0, -2 * abs(z.real)))
    result = integrate_endpoint_singular(integrand, min(left.real, 0.0), spec)
    return result.scaled(2 * rgamma(nu))


def _lhs_eq36(p, ctx):
    return cmath.exp(-p.z * p.z / 2) * pcf_d(-p.nu, p.z, ctx.policy) * pcf_d(-p.nu, -p.z, ctx.policy)


def _rhs_eq36(p, ctx):
    nu, z = p.nu, p.z
    factor = 2 * rgamma(nu + 0.5)

    def amplitude(x):
        return math.exp(-2 * x * x) * phi(0.5, nu + 0.5, x * x)

    if _is_real(z):
        result = integrate_fourier_damped(
            amplitude, 2 * z.real, 0.0, 'cos', ctx.quad, scale=1.0 / SQRT_TWO
        )
        return result.scaled(factor)

    def integrand(x):
        return cmath.cos(2 * z * x) * amplitude(x)

    spec = _with_cutoff(ctx.quad, _cutoff(4.0, -2 * abs(z.imag)))
    return integrate_decay(integrand, spec).scaled(factor)


def _domain_eq36(p):
    return "nu + 1/2 must avoid the nonpositive integers" if is_pole(p.nu + 0.5) else None


# ---------------------------------------------------------------------------
# hyperbolic kernels with Re nu < 0


def _hyperbolic_weight(p, t):
    """(2 nu + mu) t - (mu/2) log sinh 2t"""
    return (2 * p.nu + p.mu) * t - p.mu / 2 * _log_sinh2(t)


def _lhs_eq43(p, ctx):
    return pcf_d(p.nu, p.z, ctx.policy) * pcf_d(p.nu + p.mu - 1, p.z, ctx.policy)


def _rhs_eq43(p, ctx):
    nu, mu, z = p.nu, p.mu, p.z
    z2 = z * z

    def integrand(t):
        coth = 1.0 / math.tanh(t)
        w2 = z2 * coth
        if w2.real / 2 > KERNEL_BUDGET:
            return 0j
        exponent = _hyperbolic_weight(p, t) - w2 / 4
        return _cexp(exponent) * pcf_d(mu - 1, z * math.sqrt(coth), ctx.policy)

    result = integrate_decay(integrand, ctx.quad)
    return result.scaled(_pow(2, 1 - mu / 2) * rgamma(-nu))


def _domain_eq43(p):
    return _first_failure([
        (p.nu.real < 0, "Re nu < 0 required"),
        (_arg_within(p.z, math.pi / 4), "|arg z| < pi/4 required"),
    ])


def _lhs_eq48(p, ctx):
    return pcf_d(p.nu, -p.z, ctx.policy) * pcf_d(p.nu + p.mu - 1, p.z, ctx.policy)


def _rhs_eq48(p, ctx):
    nu, mu, z = p.nu, p.mu, p.z
    z2 = z * z

    def integrand(t):
        tanh = math.tanh(t)
        exponent = _hyperbolic_weight(p, t) - z2 * tanh / 4
        return _cexp(exponent) * pcf_d(mu - 1, z * math.sqrt(tanh), ctx.policy)

    result = integrate_endpoint_singular(integrand, -mu.real / 2, ctx.quad)
    return result.scaled(_pow(2, 1 - mu / 2) * rgamma(-nu))


def _domain_negative_nu(p, mu_high=None):
    checks = [(p.nu.real < 0, "Re nu < 0 required")]
    if mu_high is not None:
        checks.insert(0, (p.mu.real < mu_high, f"Re mu < {mu_high:g} required"))
    return _first_failure(checks)


def _reflected_pair(p, ctx):
    other = p.nu + p.mu - 1
    first = pcf_d(p.nu, p.z, ctx.policy) * pcf_d(other, -p.z, ctx.policy)
    second = pcf_d(p.nu, -p.z, ctx.policy) * pcf_d(other, p.z, ctx.policy)
    return first, second


def _lhs_eq53(p, ctx):
    first, second = _reflected_pair(p, ctx)
    return first + second


def _rhs_eq53(p, ctx):
    nu, mu, z = p.nu, p.mu, p.z
    half_z2 = z * z / 2

    def integrand(t):
        return _cexp(_hyperbolic_weight(p, t)) * phi(mu / 2, 0.5, -half_z2 * math.tanh(t))

    result = integrate_endpoint_singular(integrand, -mu.real / 2, ctx.quad)
    return result.scaled(2 * SQRT_TWO_PI * rgamma(-nu) * rgamma(1 - mu / 2))


def _lhs_eq54(p, ctx):
    first, second = _reflected_pair(p, ctx)
    return first - second


def _rhs_eq54(p, ctx):
    nu, mu, z = p.nu, p.mu, p.z
    half_z2 = z * z / 2

    def integrand(t):
        tanh = math.tanh(t)
        exponent = _hyperbolic_weight(p, t) + 0.5 * math.log(tanh)
        return _cexp(exponent) * phi(0.5 + mu / 2, 1.5, -half_z2 * tanh)

    result = integrate_endpoint_singular(integrand, 0.5 - mu.real / 2, ctx.quad)
    return result.scaled(4 * z * SQRT_PI * rgamma(-nu) * rgamma(0.5 - mu / 2))


def _lhs_eq55(p, ctx):
    nu, z = p.nu, p.z
    return (
        pcf_d(nu, z, ctx.policy) * pcf_d_dnu(nu, -z, ctx.policy)
        - pcf_d(nu, -z, ctx.policy) * pcf_d_dnu(nu, z, ctx.policy)
    )


def _dawson_kernel_integral(p, ctx, growth, cosh_power):
    """int e^{growth t} cosh(t)^{-cosh_power} Phi(1, 3/2; -(z^2/2) tanh t) dt"""
    half_z2 = p.z * p.z / 2

    def integrand(t):
        exponent = growth * t - cosh_power * _log_cosh(t)
        return _cexp(exponent) * phi(1, 1.5, -half_z2 * math.tanh(t))

    return integrate_decay(integrand, ctx.quad)


def _rhs_eq55(p, ctx):
    result = _dawson_kernel_integral(p, ctx, 2 * p.nu + 1, 1)
    return result.scaled(-SQRT_TWO_PI * p.z * rgamma(-p.nu))


def _lhs_eq56(p, ctx):
    nu, z = p.nu, p.z
    return (
        pcf_d(nu, z, ctx.policy) * pcf_d_dnu(nu + 1, -z, ctx.policy)
        + pcf_d(nu, -z, ctx.policy) * pcf_d_dnu(nu + 1, z, ctx.policy)
    )


def _rhs_eq56(p, ctx):
    nu, z = p.nu, p.z
    result = _dawson_kernel_integral(p, ctx, 2 * (nu + 1), 2)
    result = result.scaled(SQRT_TWO_PI * z * z / 2 * rgamma(-nu))
    constant = SQRT_TWO_PI * (LN_TWO + digamma(-nu / 2)) / 2 * rgamma(-nu)
    return replace(result, value=result.value + constant)


def _domain_eq56(p):
    return _first_failure([
        (p.nu.real < 0, "Re nu < 0 required"),
        (not is_pole(-p.nu / 2), "-nu/2 must avoid the poles of digamma"),
    ])


# ---------------------------------------------------------------------------
# Nicholson-type integrals of Durand, Malyshev and Elbert-Muldoon


def _durand_lhs(p, ctx):
    nu, z = p.nu, p.z
    d = pcf_d(nu, z, ctx.policy)
    reflected = pcf_d(nu, -z, ctx.policy)
    s = cmath.sin(math.pi * nu)
    return d * d + (cmath.cos(math.pi * nu) * d - reflected) ** 2 / (s * s)


def _durand_weight(p, t):
    return -(2 * p.nu + 1) * t + p.z * p.z / 2 * math.tanh(t) - 0.5 * _log_sinh2(t)


def _rhs_eq4(p, ctx):
    def integrand(t):
        return _cexp(_durand_weight(p, t))

    result = integrate_endpoint_singular(integrand, -0.5, ctx.quad)
    return result.scaled(2 * SQRT_TWO * gamma(p.nu + 1) / math.pi)


def _domain_durand(p):
    return _first_failure([
        (p.nu.real > -1, "Re nu > -1 required"),
        (integer_gap(p.nu) >= 0.1, "nu must stay 0.1 away from the integers"),
    ])


def _lhs_eq5p(p, ctx):
    d = pcf_d(p.nu, p.z, ctx.policy)
    return d * d


def _malyshev_rhs(p, ctx, sign):
    nu, z = p.nu, p.z
    z2 = z * z

    def integrand(t):
        decay = math.exp(-2.0 * t)
        if sign < 0:
            shift = -z2 * decay / -math.expm1(-2.0 * t)
        else:
            shift = z2 * decay / (1.0 + decay)
        exponent = (2 * nu + 1) * t + shift - 0.5 * _log_sinh2(t)
        return _cexp(exponent)

    result = integrate_endpoint_singular(integrand, -0.5, ctx.quad)
    return result.scaled(SQRT_TWO * cmath.exp(-z2 / 2) * rgamma(-nu))


def _rhs_eq5p(p, ctx):
    return _malyshev_rhs(p, ctx, -1)


def _domain_eq5p(p):
    return _first_failure([
        (p.nu.real < 0, "Re nu < 0 required"),
        (p.z == 0 or _arg_within(p.z, math.pi / 4), "|arg z| < pi/4 required"),
    ])


def _lhs_eq5m(p, ctx):
    return pcf_d(p.nu, p.z, ctx.policy) * pcf_d(p.nu, -p.z, ctx.policy)


def _rhs_eq5m(p, ctx):
    return _malyshev_rhs(p, ctx, 1)


def _rhs_eq6(p, ctx):
    order = -1 - p.nu
    w = 1j * p.z
    g = gamma(p.nu + 1)
    return 2 * g * g / math.pi * pcf_d(order, w, ctx.policy) * pcf_d(order, -w, ctx.policy)


def _domain_eq6(p):
    return None if integer_gap(p.nu) >= 0.1 else "nu must stay 0.1 away from the integers"


def _lhs_eq7(p, ctx):
    order = -1 - p.nu
    w = 1j * p.z
    # d/dnu D_{-1-nu}(u) = -(d/d order) D_order(u)
    return (
        pcf_d(order, -w, ctx.policy) * pcf_d_dnu(order, w, ctx.policy)
        - pcf_d(order, w, ctx.policy) * pcf_d_dnu(order, -w, ctx.policy)
    )


def _rhs_eq7(p, ctx):
    z = p.z

    def integrand(t):
        tanh = math.tanh(t)
        return _cexp(_durand_weight(p, t)) * erf(z * math.sqrt(tanh / 2))

    result = integrate_endpoint_singular(integrand, 0.0, ctx.quad)
    return result.scaled(SQRT_TWO * math.pi * 1j * rgamma(p.nu + 1))


def _domain_eq7(p):
    return None if p.nu.real > -1 else "Re nu > -1 required"


def _lhs_eq24(p, ctx):
    rotation = cmath.exp(0.5j * math.pi * (p.nu - 1))
    w = 1j * p.z
    return rotation * pcf_d(-p.nu, w, ctx.policy) + pcf_d(-p.nu, -w, ctx.policy) / rotation


def _rhs_eq24(p, ctx):
    return SQRT_TWO_PI * rgamma(p.nu) * pcf_d(p.nu - 1, p.z, DEFAULT_POLICY)


def _domain_any(p):
    return None


# ---------------------------------------------------------------------------
# series expansions


def _hermite_product_terms(variant, point, policy):
    nu, mu, z = point.nu, point.mu, point.z
    if variant in ('eq61p', 'eq61m'):
        mu = 1 + 0j
    alternating = variant in ('eq60', 'eq61p')
    hermite = hermite_normalized_sequence(z)
    if mu == 1:
        pairs = ((h, h) for h in hermite)
    else:
        pairs = zip(hermite, shifted_normalized_sequence(mu - 1, z, policy))
    for n, (h, other) in enumerate(pairs):
        term = h * other / (n + nu)
        yield -term if alternating and n % 2 else term


def _hermite_exponents(variant, point):
    """Powers of 1/N in the smooth remainder of the weighted Hermite sums"""
    if variant in ('eq60', 'eq61p') and point.z != 0:
        return ()
    mu = 1.0 if variant in ('eq61p', 'eq61m') else point.mu.real
    leading = 1 - mu / 2
    return tuple(leading + k / 2 for k in range(SERIES_EXTRAPOLATION_ORDERS))


def _laguerre_product_terms(variant, point):
    nu, z = point.nu, point.z
    alternating = variant == 'eq64'
    coefficients = [
        _pow(2, -nu) * rgamma((1 + nu) / 2) ** 2,
        _pow(2, -nu - 1) * nu * rgamma((2 + nu) / 2) ** 2,
    ]
    for n, polynomial in enumerate(laguerre_sequence(-1, z * z)):
        c = coefficients[n % 2]
        term = polynomial * c
        yield -term if alternating and n % 2 else term
        # c_{n+2} = c_n (nu + n) / (nu + n + 1)
        coefficients[n % 2] = 0j if c == 0 else c * (nu + n) / (nu + n + 1)


def _series_sum(variant, point, ctl, policy=DEFAULT_POLICY):
    if variant not in SERIES_VARIANTS:
        raise UnknownIdentityError(f"unknown series variant {variant!r}")
    what = f"{variant} series"
    if variant in ('eq63', 'eq64'):
        factor = math.pi * cmath.exp(-point.z * point.z / 2)
        terms, exponents = _laguerre_product_terms(variant, point), ()
    else:
        factor = rgamma(point.nu)
        terms = _hermite_product_terms(variant, point, policy)
        exponents = _hermite_exponents(variant, point)
    try:
        result = smoothed_limit(terms, ctl, exponents=exponents, what=what)
    except ConvergenceError as exc:
        estimate = None if exc.estimate is None else factor * exc.estimate
        raise ConvergenceError(str(exc), estimate=estimate, terms=exc.terms) from exc
    return replace(result, value=factor * result.value)


def series_sum_product(variant, point, ctl=None):
    """
    Right side of a product series expansion at point.

    Raises:
        UnknownIdentityError: variant is not a series entry
        DomainError: point outside the variant's validity domain
        ConvergenceError: the series did not settle under ctl
    """
    descriptor = get_identity(variant) if variant in SERIES_VARIANTS else None
    if descriptor is None:
        raise UnknownIdentityError(f"unknown series variant {variant!r}")
    reason = descriptor.check_domain(point)
    if reason:
        raise DomainError(reason)
    return _series_sum(variant, point, ctl or PRODUCT_SERIES_CONTROL).value


def _series_rhs(variant):
    def evaluate(p, ctx):
        return _series_sum(variant, p, ctx.series, ctx.policy)

    return evaluate


def _lhs_reflected_pair(p, ctx):
    return pcf_d(-p.nu, -p.z, ctx.policy) * pcf_d(p.mu - p.nu - 1, p.z, ctx.policy)


def _lhs_same_side_pair(p, ctx):
    return pcf_d(-p.nu, p.z, ctx.policy) * pcf_d(p.mu - p.nu - 1, p.z, ctx.policy)


def _lhs_square(p, ctx):
    d = pcf_d(-p.nu, p.z, ctx.policy)
    return d * d


def _lhs_symmetric(p, ctx):
    return pcf_d(-p.nu, p.z, ctx.policy) * pcf_d(-p.nu, -p.z, ctx.policy)


def _domain_hermite_series(p, nonnegative_z, uses_mu):
    checks = [
        (_is_real(p.z), "real z required"),
        (not nonnegative_z or p.z.real >= 0, "z >= 0 required"),
        (not is_pole(p.nu), "nu must avoid the nonpositive integers"),
    ]
    if uses_mu:
        checks.append((_is_real(p.mu) and p.mu.real < 1.5, "real mu < 3/2 required"))
    return _first_failure(checks)


def _domain_laguerre_series(p):
    if is_integer(p.nu) and p.nu.real <= 0:
        return None
    return _first_failure([
        (_is_real(p.z) and p.z.real >= 0, "real z >= 0 required unless nu is a nonpositive integer"),
    ])


# ---------------------------------------------------------------------------
# catalog


# text fragment that locates each entry in the printed formula collection
ANCHORS = {
    'eq12': 'purely imaginary complex number',
    'eq19': '0 < Re mu < 2',
    'eq20': 'sin(zx + pi mu/2)',
    'eq26': 'Fourier Cosine and Sine transforms',
    'eq27': 'converges for -1 < Re mu < 3',
    'eq31': 'J_{nu-1/2}(x^2/2) dx',
    'eq32': 'sin(zx + pi nu) K_{nu-1/2}',
    'eq34': 'Phi(nu, nu + 1/2; x^2) dx',
    'eq35': 'cosh(2zx)',
    'eq36': 'cos(2zx)',
    'eq43': 'D_{mu-1}(z sqrt(coth t))',
    'eq48': 'D_{mu-1}(z sqrt(tanh t))',
    'eq53': 'Phi(mu/2, 1/2; -(z^2/2) tanh t)',
    'eq54': 'Phi(1/2 + mu/2, 3/2',
    'eq55': 'Phi(1, 3/2; -(z^2/2) tanh t)',
    'eq56': 'ln 2 + psi(-nu/2)',
    'eq4': 'cos(pi nu) D_nu(z) - D_nu(-z)',
    'eq5p': 'z^2 (e^{2t} -+ 1)^{-1}',
    'eq5m': 'z^2 (e^{2t} -+ 1)^{-1}',
    'eq6': '2 Gamma(nu + 1)^2/pi',
    'eq7': 'erf(z (tanh(t)/2)^{1/2})',
    'eq24': 'known relation between D_{-nu} and D_{nu-1}',
    'eq59': 'D_n(z) D_{mu+n-1}(z)/(n! (n + nu))',
    'eq60': '(-1)^n D_n(z) D_{mu+n-1}(z)',
    'eq61p': '(-+1)^n D_n(z)^2',
    'eq61m': '(-+1)^n D_n(z)^2',
    'eq63': 'L_n^{-1}(z^2) 2^{-nu-n} (nu)_n',
    'eq64': '(-1)^n L_n^{-1}(z^2)',
}


def equation_label(id):
    """'eq43' -> '(43)'; a trailing p or m picks the upper or lower of a -+ pair"""
    match = re.fullmatch(r'eq(\d+)([pm]?)', id)
    if match is None:
        return id
    number, sign = match.groups()
    suffix = {'p': ', upper sign', 'm': ', lower sign'}.get(sign, '')
    return f"({number}){suffix}"


def _entry(id, label, formula, domain_text, lhs, rhs, domain, **options):
    return IdentityDescriptor(
        id=id,
        equation=equation_label(id),
        anchor=ANCHORS[id],
        label=label,
        formula=formula,
        domain_text=domain_text,
        lhs=lhs,
        rhs=rhs,
        domain=domain,
        **options,
    )


CATALOG = (
    _entry(
        'eq12', 'Phi transform against exp(-zx - ax^2/2), imaginary a',
        'a^{(nu-mu)/2} (-a)^{-nu/2} D_{-nu}(z/sqrt(-a)) D_{nu-mu}(z/sqrt a)'
        ' = 1/Gamma(mu) int x^{mu-1} e^{-zx-ax^2/2} Phi(nu, mu; a x^2) dx',
        'Re a = 0, a != 0, Re mu > 0, Re z > 0',
        _lhs_eq12, _rhs_eq12, _domain_eq12,
        notes='The integral truncates where e^{-Re z x} drops below e^{-37}.',
    ),
    _entry(
        'eq19', 'Psi transform against exp(-zx - ax^2/2)',
        'e^{i pi mu/2} D_{-nu}(iz/sqrt a) D_{mu-nu-1}(-iz/sqrt a) + conj. rotation'
        ' = sqrt(2/pi) a^{mu/2} sin(pi mu) int x^{mu-1} e^{-zx-ax^2/2} Psi(nu, mu; a x^2) dx',
        '0 < Re mu < 2, Re a >= 0, a != 0, Re z > 0 when Re a = 0',
        _lhs_eq19, _rhs_eq19, _domain_eq19,
    ),
    _entry(
        'eq20', 'Sine transform of the Gaussian Psi kernel',
        'D_{-nu}(z/sqrt a) D_{mu-nu-1}(-z/sqrt a)'
        ' = 2 a^{mu/2}/sqrt(2 pi) int sin(zx + pi mu/2) x^{mu-1} e^{-ax^2/2} Psi(nu, mu; a x^2) dx',
        '0 < mu < 2 real, z real, Re a > 0',
        _lhs_eq20, _rhs_eq20, lambda p: _fourier_psi_domain(p, 0.0, 2.0),
    ),
    _entry(
        'eq26', 'Cosine transform of the Gaussian Psi kernel',
        'D_{-nu}(w) D_{mu-1-nu}(-w) + D_{-nu}(-w) D_{mu-1-nu}(w), w = z/sqrt a'
        ' = 4 a^{mu/2} sin(pi mu/2)/sqrt(2 pi) int cos(zx) x^{mu-1} e^{-ax^2/2} Psi dx',
        '0 < mu < 2 real, z real, Re a > 0',
        _lhs_eq26, _rhs_eq26, lambda p: _fourier_psi_domain(p, 0.0, 2.0),
    ),
    _entry(
        'eq27', 'Sine transform of the Gaussian Psi kernel, odd part',
        'D_{-nu}(w) D_{mu-1-nu}(-w) - D_{-nu}(-w) D_{mu-1-nu}(w), w = z/sqrt a'
        ' = 4 a^{mu/2} cos(pi mu/2)/sqrt(2 pi) int sin(zx) x^{mu-1} e^{-ax^2/2} Psi dx',
        '-1 < mu < 3 real, z real, Re a > 0',
        _lhs_eq27, _rhs_eq27, lambda p: _fourier_psi_domain(p, -1.0, 3.0),
    ),
    _entry(
        'eq31', 'Laplace transform of a Bessel J kernel',
        'D_{-nu}(z e^{i pi/4}) D_{-nu}(z e^{-i pi/4})'
        ' = sqrt(pi)/Gamma(nu) int e^{-zx} J_{nu-1/2}(x^2/2) dx',
        'Re nu > 0, Re z > 0',
        _lhs_eq31, _rhs_eq31, _domain_eq31,
        notes='The integral also converges on Re z = 0, but only through the oscillation of '
              'J(x^2/2); points there are rejected because the e^{-37} truncation needs Re z > 0.',
    ),
    _entry(
        'eq32', 'Sine transform of a Bessel K kernel',
        'D_{-nu}(z) D_{nu-1}(-z) = sqrt(2)/pi int sin(zx + pi nu) K_{nu-1/2}(x^2/2) dx',
        '0 < nu < 1 real, z real',
        _lhs_eq32, _rhs_eq32, _domain_eq32,
    ),
    _entry(
        'eq34', 'Square of D through a Phi integral',
        'e^{z^2/2} D_{-nu}(z)^2 = 2^{2nu}/Gamma(2nu) int x^{2nu-1} e^{-2zx-2x^2} Phi(nu, nu+1/2; x^2) dx',
        'Re nu > 0',
        _lhs_eq34, _rhs_eq34, _domain_positive_nu,
    ),
    _entry(
        'eq35', 'Symmetric product through a Psi integral',
        'e^{z^2/2} D_{-nu}(z) D_{-nu}(-z) = 2/Gamma(nu) int cosh(2zx) x^{2nu-1} e^{-2x^2} Psi(nu, nu+1/2; x^2) dx',
        'Re nu > 0',
        _lhs_eq35, _rhs_eq35, _domain_positive_nu,
    ),
    _entry(
        'eq36', 'Symmetric product through a Phi cosine transform',
        'e^{-z^2/2} D_{-nu}(z) D_{-nu}(-z) = 2/Gamma(nu+1/2) int cos(2zx) e^{-2x^2} Phi(1/2, nu+1/2; x^2) dx',
        'all nu (nu + 1/2 off the poles)',
        _lhs_eq36, _rhs_eq36, _domain_eq36,
    ),
    _entry(
        'eq43', 'Nicholson-type integral with a coth kernel',
        'D_nu(z) D_{nu+mu-1}(z) = 2^{1-mu/2}/Gamma(-nu)'
        ' int e^{(2nu+mu)t - (z^2/4) coth t} D_{mu-1}(z sqrt(coth t)) (sinh 2t)^{-mu/2} dt',
        'Re nu < 0, |arg z| < pi/4',
        _lhs_eq43, _rhs_eq43, _domain_eq43,
        notes='The integrand is set to zero where Re(z^2 coth t)/2 exceeds 40.',
    ),
    _entry(
        'eq48', 'Nicholson-type integral with a tanh kernel',
        'D_nu(-z) D_{nu+mu-1}(z) = 2^{1-mu/2}/Gamma(-nu)'
        ' int e^{(2nu+mu)t - (z^2/4) tanh t} D_{mu-1}(z sqrt(tanh t)) (sinh 2t)^{-mu/2} dt',
        'Re mu < 2, Re nu < 0, any z',
        _lhs_eq48, _rhs_eq48, lambda p: _domain_negative_nu(p, 2.0),
    ),
    _entry(
        'eq53', 'Even part of the tanh-kernel product',
        'D_nu(z) D_{nu+mu-1}(-z) + D_nu(-z) D_{nu+mu-1}(z) = 2 sqrt(2 pi)/(Gamma(-nu) Gamma(1-mu/2))'
        ' int e^{(2nu+mu)t} (sinh 2t)^{-mu/2} Phi(mu/2, 1/2; -(z^2/2) tanh t) dt',
        'Re mu < 2, Re nu < 0',
        _lhs_eq53, _rhs_eq53, lambda p: _domain_negative_nu(p, 2.0),
    ),
    _entry(
        'eq54', 'Odd part of the tanh-kernel product',
        'D_nu(z) D_{nu+mu-1}(-z) - D_nu(-z) D_{nu+mu-1}(z) = 4 z sqrt(pi)/(Gamma(-nu) Gamma(1/2-mu/2))'
        ' int e^{(2nu+mu)t} (sinh 2t)^{-mu/2} sqrt(tanh t) Phi(1/2+mu/2, 3/2; -(z^2/2) tanh t) dt',
        'Re mu < 3, Re nu < 0',
        _lhs_eq54, _rhs_eq54, lambda p: _domain_negative_nu(p, 3.0),
    ),
    _entry(
        'eq55', 'Order derivative, mu = 1',
        'D_nu(z) dD_nu(-z)/dnu - D_nu(-z) dD_nu(z)/dnu = -sqrt(2 pi) z/Gamma(-nu)'
        ' int e^{(2nu+1)t}/cosh t Phi(1, 3/2; -(z^2/2) tanh t) dt',
        'Re nu < 0',
        _lhs_eq55, _rhs_eq55, lambda p: _domain_negative_nu(p),
        default_tol=DERIVATIVE_TOL,
        notes='Left side uses Richardson-refined central differences in nu.',
    ),
    _entry(
        'eq56', 'Order derivative, mu = 2',
        'D_nu(z) dD_{nu+1}(-z)/dnu + D_nu(-z) dD_{nu+1}(z)/dnu = sqrt(2 pi) z^2/(2 Gamma(-nu))'
        ' int e^{2(nu+1)t}/cosh^2 t Phi(1, 3/2; -(z^2/2) tanh t) dt + sqrt(2 pi)(ln 2 + psi(-nu/2))/(2 Gamma(-nu))',
        'Re nu < 0, -nu/2 off the digamma poles',
        _lhs_eq56, _rhs_eq56, _domain_eq56,
        default_tol=DERIVATIVE_TOL,
        report_only=True,
        notes='Report-only: the signed discrepancy lhs - rhs is recorded in diagnostics.',
    ),
    _entry(
        'eq4', 'Durand integral',
        'D_nu(z)^2 + (cos(pi nu) D_nu(z) - D_nu(-z))^2/sin^2(pi nu)'
        ' = 2 sqrt(2) Gamma(nu+1)/pi int e^{-(2nu+1)t + (z^2/2) tanh t} (sinh 2t)^{-1/2} dt',
        'Re nu > -1, dist(nu, Z) >= 0.1',
        _durand_lhs, _rhs_eq4, _domain_durand,
    ),
    _entry(
        'eq5p', 'Malyshev integral for the square',
        'D_nu(z)^2 = sqrt(2) e^{-z^2/2}/Gamma(-nu) int e^{(2nu+1)t - z^2/(e^{2t}-1)} (sinh 2t)^{-1/2} dt',
        'Re nu < 0, |arg z| < pi/4',
        _lhs_eq5p, _rhs_eq5p, _domain_eq5p,
    ),
    _entry(
        'eq5m', 'Malyshev integral for the symmetric product',
        'D_nu(z) D_nu(-z) = sqrt(2) e^{-z^2/2}/Gamma(-nu) int e^{(2nu+1)t + z^2/(e^{2t}+1)} (sinh 2t)^{-1/2} dt',
        'Re nu < 0, any z',
        _lhs_eq5m, _rhs_eq5m, lambda p: _domain_negative_nu(p),
    ),
    _entry(
        'eq6', 'Durand left side as a product at imaginary argument',
        'D_nu(z)^2 + (cos(pi nu) D_nu(z) - D_nu(-z))^2/sin^2(pi nu)'
        ' = 2 Gamma(nu+1)^2/pi D_{-1-nu}(iz) D_{-1-nu}(-iz)',
        'dist(nu, Z) >= 0.1',
        _durand_lhs, _rhs_eq6, _domain_eq6,
        notes='Both sides are closed products of D; the independence is between real and imaginary arguments.',
    ),
    _entry(
        'eq7', 'Elbert-Muldoon order derivative',
        'D_{-1-nu}(iz) d/dnu D_{-1-nu}(-iz) - D_{-1-nu}(-iz) d/dnu D_{-1-nu}(iz)'
        ' = sqrt(2) pi i/Gamma(nu+1) int e^{-(2nu+1)t + (z^2/2) tanh t} erf(z sqrt(tanh(t)/2)) (sinh 2t)^{-1/2} dt',
        'Re nu > -1',
        _lhs_eq7, _rhs_eq7, _domain_eq7,
        default_tol=DERIVATIVE_TOL,
        notes='The constant sqrt(2) pi i is the one consistent with eq55 under nu -> -1-nu, '
              'z -> iz; the commonly printed sqrt(2 pi) i is short by a factor sqrt(pi).',
    ),
    _entry(
        'eq24', 'Connection formula',
        'e^{i pi (nu-1)/2} D_{-nu}(iz) + e^{-i pi (nu-1)/2} D_{-nu}(-iz) = sqrt(2 pi)/Gamma(nu) D_{nu-1}(z)',
        'all nu, all z',
        _lhs_eq24, _rhs_eq24, _domain_any,
        default_tol=1e-9,
    ),
    _entry(
        'eq59', 'Hermite series, reflected product',
        'D_{-nu}(-z) D_{mu-nu-1}(z) = 1/Gamma(nu) sum D_n(z) D_{mu+n-1}(z)/(n! (n+nu))',
        'z real, mu real < 3/2, nu off the nonpositive integers',
        _lhs_reflected_pair, _series_rhs('eq59'),
        lambda p: _domain_hermite_series(p, nonnegative_z=False, uses_mu=True),
        default_tol=SERIES_TOL,
    ),
    _entry(
        'eq60', 'Hermite series, same-side product',
        'D_{-nu}(z) D_{mu-nu-1}(z) = 1/Gamma(nu) sum (-1)^n D_n(z) D_{mu+n-1}(z)/(n! (n+nu))',
        'z >= 0 real, mu real < 3/2, nu off the nonpositive integers',
        _lhs_same_side_pair, _series_rhs('eq60'),
        lambda p: _domain_hermite_series(p, nonnegative_z=True, uses_mu=True),
        default_tol=SERIES_TOL,
    ),
    _entry(
        'eq61p', 'Hermite series for the square',
        'D_{-nu}(z)^2 = 1/Gamma(nu) sum (-1)^n D_n(z)^2/(n! (n+nu))',
        'z >= 0 real, nu off the nonpositive integers',
        _lhs_square, _series_rhs('eq61p'),
        lambda p: _domain_hermite_series(p, nonnegative_z=True, uses_mu=False),
        default_tol=SERIES_TOL,
    ),
    _entry(
        'eq61m', 'Hermite series for the symmetric product',
        'D_{-nu}(z) D_{-nu}(-z) = 1/Gamma(nu) sum D_n(z)^2/(n! (n+nu))',
        'z real, nu off the nonpositive integers',
        _lhs_symmetric, _series_rhs('eq61m'),
        lambda p: _domain_hermite_series(p, nonnegative_z=False, uses_mu=False),
        default_tol=SERIES_TOL,
    ),
    _entry(
        'eq63', 'Laguerre series for the square',
        'D_{-nu}(z)^2 = pi e^{-z^2/2} sum L_n^{-1}(z^2) 2^{-nu-n} (nu)_n/Gamma((1+n+nu)/2)^2',
        'z >= 0 real, or nu a nonpositive integer with any z',
        _lhs_square, _series_rhs('eq63'), _domain_laguerre_series,
        default_tol=SERIES_TOL,
    ),
    _entry(
        'eq64', 'Laguerre series for the symmetric product',
        'D_{-nu}(z) D_{-nu}(-z) = pi e^{-z^2/2} sum (-1)^n L_n^{-1}(z^2) 2^{-nu-n} (nu)_n/Gamma((1+n+nu)/2)^2',
        'z >= 0 real, or nu a nonpositive integer with any z',
        _lhs_symmetric, _series_rhs('eq64'), _domain_laguerre_series,
        default_tol=SERIES_TOL,
    ),
)

_BY_ID = {entry.id: entry for entry in CATALOG}


def catalog():
    """Every catalog entry, in stable order"""
    return list(CATALOG)


def get_identity(identity_id):
    try:
        return _BY_ID[identity_id]
    except KeyError:
        raise UnknownIdentityError(f"unknown identity {identity_id!r}") from None


# ---------------------------------------------------------------------------
# verification


def _resolve(side, value):
    """Split an evaluator result into (complex value, converged, diagnostics)"""
    if isinstance(value, QuadratureResult):
        diagnostics = {f"{side}_{key}": item for key, item in value.diagnostics().items()}
        return complex(value.value), value.converged, diagnostics
    if isinstance(value, SeriesSum):
        diagnostics = {f"{side}_{key}": item for key, item in value.diagnostics().items()}
        return complex(value.value), True, diagnostics
    return complex(value), True, {}


def _context_for(descriptor, context):
    base = context or default_context()
    if not descriptor.quad_overrides:
        return base
    quad = replace(
        base.quad,
        abs_tol=descriptor.quad_overrides.get('abs_tol', base.quad.abs_tol),
        rel_tol=descriptor.quad_overrides.get('rel_tol', base.quad.rel_tol),
    )
    return replace(base, quad=quad)


def _failed(descriptor, point, tolerance, lhs, rhs, error, diagnostics):
    diagnostics = dict(diagnostics)
    diagnostics['error'] = str(error)
    estimate = getattr(error, 'estimate', None)
    if estimate is not None:
        diagnostics['estimate_re'] = complex(estimate).real
        diagnostics['estimate_im'] = complex(estimate).imag
    return VerificationRecord(
        identity_id=descriptor.id,
        point=point,
        lhs_value=lhs,
        rhs_value=rhs,
        abs_err=None,
        rel_err=None,
        passed=False,
        tolerance=tolerance,
        status='failed',
        converged=False,
        report_only=descriptor.report_only,
        diagnostics=diagnostics,
    )


def _evaluate(descriptor, point, tolerance, context):
    ctx = _context_for(descriptor, context)
    lhs = rhs = None
    diagnostics = {}
    try:
        lhs, lhs_converged, extra = _resolve('lhs', descriptor.lhs(point, ctx))
        diagnostics.update(extra)
        rhs, rhs_converged, extra = _resolve('rhs', descriptor.rhs(point, ctx))
        diagnostics.update(extra)
    except EVALUATION_ERRORS as e:
        logger.warning(f"{descriptor.id} at {point} failed: {e}")
        return _failed(descriptor, point, tolerance, lhs, rhs, e, diagnostics)

    abs_err = abs(lhs - rhs)
    scale = abs(lhs) + abs(rhs)
    rel_err = abs_err / (scale + REL_ERR_GUARD)
    converged = lhs_converged and rhs_converged
    within = abs_err <= tolerance if scale < NEAR_ZERO else rel_err <= tolerance
    if descriptor.report_only:
        diagnostics['signed_discrepancy_re'] = (lhs - rhs).real
        diagnostics['signed_discrepancy_im'] = (lhs - rhs).imag
    passed = within and converged
    return VerificationRecord(
        identity_id=descriptor.id,
        point=point,
        lhs_value=lhs,
        rhs_value=rhs,
        abs_err=abs_err,
        rel_err=rel_err,
        passed=passed,
        tolerance=tolerance,
        status='passed' if passed else 'failed',
        converged=converged,
        report_only=descriptor.report_only,
        diagnostics=diagnostics,
    )


def verify(identity_id, point, tol=None, context=None):
    """
    Evaluate both sides of an identity at one point.

    Args:
        identity_id: catalog id
        point: ParameterPoint
        tol: tolerance in force, the entry's default_tol when None
        context: EvalContext, default_context() when None

    Returns:
        VerificationRecord. Non-convergence and poles met while evaluating
        become a failed record carrying the error and any estimate.

    Raises:
        UnknownIdentityError: identity_id is not in the catalog
        DomainError: point lies outside the entry's validity domain
    """
    descriptor = get_identity(identity_id)
    reason = descriptor.check_domain(point)
    if reason:
        raise DomainError(f"{identity_id}: {reason}")
    tolerance = descriptor.default_tol if tol is None else tol
    return _evaluate(descriptor, point, tolerance, context)


def skipped_record(descriptor, point, tolerance, reason):
    return VerificationRecord(
        identity_id=descriptor.id,
        point=point,
        lhs_value=None,
        rhs_value=None,
        abs_err=None,
        rel_err=None,
        passed=False,
        tolerance=tolerance,
        status='skipped',
        converged=True,
        report_only=descriptor.report_only,
        diagnostics={'reason': reason},
    )


def verify_grid(identity_id, grid, tol=None, context=None, max_workers=None):
    """
    verify over a list of points; out-of-domain points become skipped records.
    Output order equals input order.
    """
    descriptor = get_identity(identity_id)
    tolerance = descriptor.default_tol if tol is None else tol
    grid = list(grid)
    if not grid:
        return []

    def run(point):
        reason = descriptor.check_domain(point)
        if reason:
            logger.info(f"{identity_id} skips {point}: {reason}")
            return skipped_record(descriptor, point, tolerance, reason)
        return _evaluate(descriptor, point, tolerance, context)

    workers = max_workers or getattr(settings, 'PCF_MAX_THREADS', None) or 1
    workers = max(1, min(int(workers), len(grid)))
    if workers == 1:
        return [run(point) for point in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, grid))
