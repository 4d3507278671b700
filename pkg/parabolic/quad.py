"""
Quadrature engines for the integrand shapes that show up in product identities:
exponential/Gaussian decay on (0, inf), algebraic endpoint singularities at 0,
damped Fourier kernels, and the iterated double integral of the convolution lemma.
"""
import cmath
import heapq
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import ConvergenceError, PreconditionError

logger = logging.getLogger(__name__)

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1]
XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
# Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and 0
WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

GAUSSIAN_TRUNCATION = 9.0
TANH_SINH_MAX_LEVEL = 8
TANH_SINH_UPPER_S = 3.3
TANH_SINH_DROP = 1e-18
OSCILLATION_WARN_PERIODS = 1e4
MIN_PANEL_WIDTH = 1e-14

KIND_CHOICES = [
    ('sin', 'Sine kernel'),
    ('cos', 'Cosine kernel'),
]


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and budget for one integral; cutoff replaces the infinite tail when set"""

    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_evaluations: int = 200000
    split_point: float = 1.0
    cutoff: float | None = None

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise PreconditionError("QuadSpec tolerances must be positive")
        if self.max_evaluations < 100:
            raise PreconditionError("QuadSpec.max_evaluations must be at least 100")
        if not self.split_point > 0:
            raise PreconditionError("QuadSpec.split_point must be positive")
        if self.cutoff is not None and not self.cutoff > 0:
            raise PreconditionError("QuadSpec.cutoff must be positive")

    def tolerance(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    abs_error_estimate: float
    evaluations: int
    converged: bool
    warnings: tuple = field(default=())

    def __add__(self, other):
        return QuadratureResult(
            value=self.value + other.value,
            abs_error_estimate=self.abs_error_estimate + other.abs_error_estimate,
            evaluations=self.evaluations + other.evaluations,
            converged=self.converged and other.converged,
            warnings=self.warnings + other.warnings,
        )

    def scaled(self, factor):
        """Result of factor * integral, error scaled by |factor|"""
        factor = complex(factor)
        return replace(
            self,
            value=self.value * factor,
            abs_error_estimate=self.abs_error_estimate * abs(factor),
        )

    def require(self, what="integral"):
        """Return the value, raising ConvergenceError when the engine gave up"""
        if not self.converged:
            raise ConvergenceError(
                f"{what} did not converge after {self.evaluations} evaluations "
                f"(error estimate {self.abs_error_estimate:.3g})",
                estimate=self.value,
            )
        return self.value

    def diagnostics(self):
        return {
            'quad_error_estimate': self.abs_error_estimate,
            'quad_evaluations': self.evaluations,
            'quad_converged': self.converged,
            'quad_warnings': list(self.warnings),
        }


def _fsum_complex(values):
    return complex(
        math.fsum(v.real for v in values),
        math.fsum(v.imag for v in values),
    )


def _gk15(f, a, b):
    """One Gauss-Kronrod 7/15 panel: (value, |K - G| error, evaluations)"""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = complex(f(center))
    kronrod = fc * WGK[7]
    gauss = fc * WG[3]
    for j in range(7):
        dx = half * XGK[j]
        pair = complex(f(center - dx)) + complex(f(center + dx))
        kronrod += WGK[j] * pair
        if j % 2 == 1:
            gauss += WG[j // 2] * pair
    return kronrod * half, abs((kronrod - gauss) * half), 15


def _adaptive_gk(panels, spec, budget=None):
    """
    Adaptive bisection over a list of (func, a, b) panels sharing one error heap.

    The piece with the largest error estimate is split until the summed
    estimate meets spec.tolerance or the evaluation budget runs out. The
    returned value is a compensated sum over pieces in left-to-right order.
    """
    budget = spec.max_evaluations if budget is None else budget
    evaluations = 0
    heap = []
    settled = []
    value = 0j
    error = 0.0
    for index, (func, a, b) in enumerate(panels):
        if b <= a:
            continue
        part, part_error, count = _gk15(func, a, b)
        evaluations += count
        value += part
        error += part_error
        heap.append((-part_error, index, a, b, part))
    heapq.heapify(heap)

    while heap and error > spec.tolerance(value) and evaluations + 30 <= budget:
        piece = heapq.heappop(heap)
        neg_error, index, a, b, part = piece
        if b - a <= MIN_PANEL_WIDTH * max(1.0, abs(a)):
            settled.append(piece)
            continue
        value -= part
        error += neg_error
        func = panels[index][0]
        mid = 0.5 * (a + b)
        for lo, hi in ((a, mid), (mid, b)):
            half_part, half_error, count = _gk15(func, lo, hi)
            evaluations += count
            value += half_part
            error += half_error
            heapq.heappush(heap, (-half_error, index, lo, hi, half_part))

    pieces = sorted(heap + settled, key=lambda item: (item[1], item[2]))
    value = _fsum_complex([item[4] for item in pieces])
    error = math.fsum(-item[0] for item in pieces)
    return value, error, evaluations


def _tail_panel(f, start):
    """Map [start, inf) onto (0, 1) with t = start + u / (1 - u)"""

    def mapped(u):
        one_minus = 1.0 - u
        return f(start + u / one_minus) / (one_minus * one_minus)

    return (mapped, 0.0, 1.0)


def _finish(value, error, evaluations, spec, warnings=(), what="integral"):
    converged = error <= spec.tolerance(value)
    if not converged:
        logger.warning(
            f"{what} stopped at error estimate {error:.3g} "
            f"after {evaluations} evaluations (tolerance {spec.tolerance(value):.3g})"
        )
    return QuadratureResult(
        value=value,
        abs_error_estimate=error,
        evaluations=max(evaluations, 1),
        converged=converged,
        warnings=tuple(warnings),
    )


def integrate_decay(f, spec=None):
    """
    Integrate f over (0, inf) for integrands with eventual exponential decay.

    Adaptive Gauss-Kronrod on (0, split_point] plus the tail mapped to (0, 1).
    When spec.cutoff is set the tail becomes the finite panel [split_point, cutoff].
    """
    spec = spec or QuadSpec()
    split = spec.split_point if spec.cutoff is None else min(spec.split_point, spec.cutoff)
    panels = [(f, 0.0, split)]
    if spec.cutoff is None:
        panels.append(_tail_panel(f, split))
    elif spec.cutoff > split:
        panels.append((f, split, spec.cutoff))
    value, error, evaluations = _adaptive_gk(panels, spec)
    return _finish(value, error, evaluations, spec, what="integrate_decay")


def _tanh_sinh_lower_s(width, singular_exponent):
    """Smallest abscissa s so that the dropped piece near 0 is below TANH_SINH_DROP"""
    t_min = TANH_SINH_DROP ** (1.0 / (1.0 + singular_exponent))
    t_min = max(t_min, 1e-300)
    y = 0.5 * math.log(t_min / width)
    return -math.asinh(2.0 * abs(y) / math.pi) if y < 0 else 0.0


def _tanh_sinh_nodes(width, s):
    """Abscissae and weights of t = width / (1 + exp(-2y)), y = (pi/2) sinh s"""
    y = 0.5 * math.pi * np.sinh(s)
    decay = np.exp(-2.0 * np.abs(y))
    t = np.where(y >= 0, width / (1.0 + decay), width * decay / (1.0 + decay))
    w = width * math.pi * np.cosh(s) * decay / (1.0 + decay) ** 2
    return t, w


def tanh_sinh(f, width, singular_exponent, spec):
    """
    Double-exponential rule on (0, width] for integrands ~ t**singular_exponent at 0.

    Levels halve the step h = 1, 1/2, 1/4, ... reusing earlier nodes; the
    error estimate is the change between consecutive levels.
    """
    s_low = _tanh_sinh_lower_s(width, singular_exponent)
    s_high = TANH_SINH_UPPER_S
    contributions = []
    evaluations = 0
    previous = None
    value = 0j
    error = math.inf
    for level in range(TANH_SINH_MAX_LEVEL + 1):
        h = 2.0 ** (-level)
        first = math.ceil(s_low / h)
        last = math.floor(s_high / h)
        indices = np.arange(first, last + 1)
        if level > 0:
            indices = indices[indices % 2 != 0]
        t, w = _tanh_sinh_nodes(width, indices * h)
        for node, weight in zip(t.tolist(), w.tolist()):
            if node <= 0.0 or weight == 0.0:
                continue
            term = weight * complex(f(node))
            evaluations += 1
            if cmath.isfinite(term):
                contributions.append(term)
        value = h * _fsum_complex(contributions)
        if previous is not None:
            error = abs(value - previous)
            if error <= spec.tolerance(value):
                break
        if evaluations >= spec.max_evaluations:
            break
        previous = value
    return value, error, evaluations


def integrate_endpoint_singular(f, singular_exponent, spec=None):
    """
    Integrate f over (0, inf) when f ~ t**singular_exponent as t -> 0.

    tanh-sinh on (0, split_point] absorbs the algebraic singularity; the rest
    is handled as in integrate_decay (mapped tail, or [split, cutoff]).

    Raises:
        PreconditionError: singular_exponent <= -1 (not integrable)
    """
    spec = spec or QuadSpec()
    if singular_exponent <= -1:
        raise PreconditionError(
            f"endpoint exponent {singular_exponent} is not integrable at 0"
        )
    split = spec.split_point if spec.cutoff is None else min(spec.split_point, spec.cutoff)
    head, head_error, head_evaluations = tanh_sinh(f, split, singular_exponent, spec)
    panels = []
    if spec.cutoff is None:
        panels.append(_tail_panel(f, split))
    elif spec.cutoff > split:
        panels.append((f, split, spec.cutoff))
    tail, tail_error, tail_evaluations = 0j, 0.0, 0
    if panels:
        budget = max(spec.max_evaluations - head_evaluations, 100)
        tail, tail_error, tail_evaluations = _adaptive_gk(panels, spec, budget=budget)
    return _finish(
        head + tail,
        head_error + tail_error,
        head_evaluations + tail_evaluations,
        spec,
        what="integrate_endpoint_singular",
    )


def integrate_fourier_damped(g, z, phase, kind, spec=None, scale=1.0, singular_exponent=None):
    """
    Integrate trig(z x + phase) * g(x) over (0, inf) for Gaussian-damped g.

    The range is truncated at x_max = 9 * scale (or spec.cutoff) and cut into
    panels no wider than one period 2 pi / |z|, so every panel carries the
    15 Kronrod nodes per oscillation. singular_exponent, when given, routes
    the first panel through tanh-sinh.
    """
    spec = spec or QuadSpec()
    if kind not in dict(KIND_CHOICES):
        raise PreconditionError(f"kind must be 'sin' or 'cos', got {kind!r}")
    z = float(z)
    trig = math.sin if kind == 'sin' else math.cos

    def integrand(x):
        return trig(z * x + phase) * g(x)

    x_max = spec.cutoff if spec.cutoff is not None else GAUSSIAN_TRUNCATION * scale
    warnings = []
    periods = abs(z) * x_max / (2.0 * math.pi)
    if periods > OSCILLATION_WARN_PERIODS:
        message = f"integrand oscillates over {periods:.0f} periods"
        logger.warning(message)
        warnings.append(message)
    width = min(x_max, spec.split_point)
    if z != 0:
        width = min(width, 2.0 * math.pi / abs(z))
    edges = np.append(np.arange(0.0, x_max, width), x_max)
    edges = edges[np.concatenate(([True], np.diff(edges) > 0))]

    head, head_error, head_evaluations = 0j, 0.0, 0
    start_panel = 0
    if singular_exponent is not None:
        if singular_exponent <= -1:
            raise PreconditionError(
                f"endpoint exponent {singular_exponent} is not integrable at 0"
            )
        head, head_error, head_evaluations = tanh_sinh(
            integrand, float(edges[1]), singular_exponent, spec
        )
        start_panel = 1
    panels = [
        (integrand, float(lo), float(hi))
        for lo, hi in zip(edges[start_panel:-1], edges[start_panel + 1:])
    ]
    tail, tail_error, tail_evaluations = 0j, 0.0, 0
    if panels:
        budget = max(spec.max_evaluations - head_evaluations, 100)
        tail, tail_error, tail_evaluations = _adaptive_gk(panels, spec, budget=budget)
    return _finish(
        head + tail,
        head_error + tail_error,
        head_evaluations + tail_evaluations,
        spec,
        warnings=warnings,
        what="integrate_fourier_damped",
    )


def convolution_identity_defect(g, h, spec=None):
    """
    Relative defect of the convolution lemma

        int g * int h = int_t int_x g(x) h(x + t) + int_t int_x h(x) g(x + t)

    with both double integrals computed as iterated integrate_decay.
    """
    spec = spec or QuadSpec()
    inner_spec = replace(spec, rel_tol=max(spec.rel_tol, 1e-12))
    product = integrate_decay(g, spec).value * integrate_decay(h, spec).value

    def shifted(first, second):
        def outer(t):
            return integrate_decay(lambda x: first(x) * second(x + t), inner_spec).value

        return integrate_decay(outer, spec).value

    total = shifted(g, h) + shifted(h, g)
    return abs(product - total) / max(abs(product), 1e-300)


def integrate_beta_type(f, left_exponent, right_exponent, spec=None):
    """
    Integrate over (0, 1) with algebraic behavior at both endpoints.

    f is called as f(t, 1 - t) so the integrand never has to rebuild 1 - t
    from a rounded t next to the right endpoint. Each half gets its own
    tanh-sinh rule with the singularity at its outer end.
    """
    spec = spec or QuadSpec()
    for exponent in (left_exponent, right_exponent):
        if exponent <= -1:
            raise PreconditionError(f"endpoint exponent {exponent} is not integrable")
    left, left_error, left_evaluations = tanh_sinh(
        lambda t: f(t, 1.0 - t), 0.5, left_exponent, spec
    )
    right, right_error, right_evaluations = tanh_sinh(
        lambda s: f(1.0 - s, s), 0.5, right_exponent, spec
    )
    return _finish(
        left + right,
        left_error + right_error,
        left_evaluations + right_evaluations,
        spec,
        what="integrate_beta_type",
    )
