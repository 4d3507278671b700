"""
Run assembly and report emission for the verify and sweep commands.
"""
import csv
import io
import itertools
import logging
import time
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings
from rest_framework.renderers import JSONRenderer

from .exceptions import PreconditionError
from .identities import ParameterPoint, get_identity, verify_grid
from .serializers import AXES, RunReportSerializer, finite_or_none

logger = logging.getLogger(__name__)

TOOL_NAME = 'parabolic'

# where a report goes does not change what it says
UNECHOED_CONFIG_KEYS = ('output',)

SWEEP_AXIS_CHOICES = [
    ('nu', 'nu (real part)'),
    ('mu', 'mu (real part)'),
    ('z-real', 'Re z'),
    ('z-imag', 'Im z'),
]

SWEEP_HEADER = ['param', 'lhs_re', 'lhs_im', 'rhs_re', 'rhs_im', 'rel_err', 'converged']

RECORD_HEADER = [
    'identity', 'nu', 'mu', 'z', 'a',
    'lhs_re', 'lhs_im', 'rhs_re', 'rhs_im',
    'abs_err', 'rel_err', 'tolerance', 'status', 'converged', 'report_only',
]


@dataclass
class IdentitySummary:
    identity: str
    tested: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    report_only: bool = False
    max_rel_err: float | None = None
    wall_time: float | None = None


@dataclass
class RunReport:
    tool: str
    version: str
    config: dict
    summary: list = field(default_factory=list)
    records: list = field(default_factory=list)

    @property
    def failures(self):
        """Failed records that count against the exit code"""
        return [r for r in self.records if r.status == 'failed' and not r.report_only]

    @property
    def all_skipped(self):
        return bool(self.records) and all(r.status == 'skipped' for r in self.records)


def expand_points(axes):
    """Cartesian product over nu, mu, z, a in that order; missing axes sample 0"""
    values = [axes.get(name) or [0j] for name in AXES]
    return [ParameterPoint(*combination) for combination in itertools.product(*values)]


def plan_runs(config):
    """
    (identity, points, tolerance) triples from a validated GridConfig, in
    config order: `identities` first, then `grids` entries.
    """
    tolerances = config.get('tolerances') or {}
    runs = []
    shared = expand_points(config)
    for identity in config.get('identities') or []:
        runs.append((identity, shared, tolerances.get(identity)))
    for entry in config.get('grids') or []:
        identity = entry['identity']
        tol = entry.get('tol', tolerances.get(identity))
        runs.append((identity, expand_points(entry), tol))
    return runs


def summarize(identity, records, wall_time=None):
    summary = IdentitySummary(identity=identity, report_only=get_identity(identity).report_only)
    errors = []
    for record in records:
        if record.status == 'skipped':
            summary.skipped += 1
            continue
        summary.tested += 1
        if record.passed:
            summary.passed += 1
        else:
            summary.failed += 1
        if record.rel_err is not None:
            errors.append(record.rel_err)
    summary.max_rel_err = max(errors) if errors else None
    summary.wall_time = wall_time
    return summary


def run_config(config, max_workers=None, context=None):
    """
    Execute every run of a validated GridConfig.

    The summary gets one row per run; wall time is attached only when
    PCF_REPORT_TIMING is on so that reports stay byte-identical otherwise.
    """
    timing = getattr(settings, 'PCF_REPORT_TIMING', False)
    report = RunReport(
        tool=TOOL_NAME,
        version=getattr(settings, 'PCF_TOOL_VERSION', '1.0.0'),
        config={key: value for key, value in config.items() if key not in UNECHOED_CONFIG_KEYS},
    )
    for identity, points, tol in plan_runs(config):
        started = time.perf_counter()
        records = verify_grid(identity, points, tol=tol, context=context, max_workers=max_workers)
        elapsed = time.perf_counter() - started if timing else None
        summary = summarize(identity, records, elapsed)
        logger.info(
            f"{identity}: {summary.passed} passed, {summary.failed} failed, "
            f"{summary.skipped} skipped"
        )
        report.summary.append(summary)
        report.records.extend(records)
    return report


def render_json(report):
    """UTF-8 JSON bytes; fixed key order and shortest round-trip floats"""
    data = RunReportSerializer(report).data
    return JSONRenderer().render(data, renderer_context={'indent': 2}) + b'\n'


def _format(value):
    value = finite_or_none(value)
    return '' if value is None else repr(value)


def format_complex(value):
    value = complex(value)
    if value.imag == 0:
        return repr(value.real)
    sign = '+' if value.imag >= 0 else '-'
    return f"{value.real!r}{sign}{abs(value.imag)!r}i"


def render_csv(report):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(RECORD_HEADER)
    for record in report.records:
        lhs = record.lhs_value
        rhs = record.rhs_value
        point = record.point
        writer.writerow([
            record.identity_id,
            format_complex(point.nu),
            format_complex(point.mu),
            format_complex(point.z),
            format_complex(point.a),
            _format(lhs.real) if lhs is not None else '',
            _format(lhs.imag) if lhs is not None else '',
            _format(rhs.real) if rhs is not None else '',
            _format(rhs.imag) if rhs is not None else '',
            _format(record.abs_err),
            _format(record.rel_err),
            _format(record.tolerance),
            record.status,
            str(record.converged).lower(),
            str(record.report_only).lower(),
        ])
    return buffer.getvalue()


def render(report, output_format):
    if output_format == 'csv':
        return render_csv(report).encode('utf-8')
    return render_json(report)


def sweep_values(start, stop, step):
    """start, start + step, ... up to stop inclusive; empty when stop < start"""
    if not step > 0:
        raise PreconditionError(f"sweep step must be positive, got {step}")
    if stop < start:
        return np.array([])
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def sweep_points(base, axis, values):
    """Points along one axis of base, the other coordinates held fixed"""
    if axis not in dict(SWEEP_AXIS_CHOICES):
        raise PreconditionError(f"unknown sweep axis {axis!r}")
    points = []
    for value in values.tolist():
        coordinates = base.as_dict()
        if axis == 'z-real':
            coordinates['z'] = complex(value, base.z.imag)
        elif axis == 'z-imag':
            coordinates['z'] = complex(base.z.real, value)
        else:
            coordinates[axis] = complex(value, coordinates[axis].imag)
        points.append(ParameterPoint(**coordinates))
    return points


def render_sweep_csv(values, records):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(SWEEP_HEADER)
    for value, record in zip(values.tolist(), records):
        lhs = record.lhs_value
        rhs = record.rhs_value
        writer.writerow([
            repr(float(value)),
            _format(lhs.real) if lhs is not None else '',
            _format(lhs.imag) if lhs is not None else '',
            _format(rhs.real) if rhs is not None else '',
            _format(rhs.imag) if rhs is not None else '',
            _format(record.rel_err),
            str(record.status != 'skipped' and record.converged).lower(),
        ])
    return buffer.getvalue()
