from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from parabolic.exceptions import PcfError, UnknownIdentityError
from parabolic.identities import ParameterPoint, get_identity, verify_grid
from parabolic.reports import SWEEP_AXIS_CHOICES, render_sweep_csv, sweep_points, sweep_values

from ._options import CONFIG_ERROR, EVALUATION_ERROR, complex_option, float_option


class Command(BaseCommand):
    help = 'Sweep one parameter of an identity and emit an error curve as CSV'

    def add_arguments(self, parser):
        parser.add_argument('identity')
        parser.add_argument('--axis', required=True, choices=[choice for choice, _ in SWEEP_AXIS_CHOICES])
        parser.add_argument('--start', required=True)
        parser.add_argument('--stop', required=True)
        parser.add_argument('--step', required=True)
        parser.add_argument('--nu', default='0')
        parser.add_argument('--mu', default='1')
        parser.add_argument('--z', default='0')
        parser.add_argument('--a', default='1')
        parser.add_argument('--tol', help='Tolerance (defaults to the identity default)')
        parser.add_argument('--threads', type=int)
        parser.add_argument('--output', help='CSV path; stdout when omitted')

    def handle(self, *args, **options):
        try:
            get_identity(options['identity'])
        except UnknownIdentityError as e:
            raise CommandError(str(e), returncode=CONFIG_ERROR)

        base = ParameterPoint(
            nu=complex_option('nu', options['nu']),
            mu=complex_option('mu', options['mu']),
            z=complex_option('z', options['z']),
            a=complex_option('a', options['a']),
        )
        start = float_option('start', options['start'])
        stop = float_option('stop', options['stop'])
        step = float_option('step', options['step'])
        tol = float_option('tol', options['tol']) if options['tol'] else None
        if not step > 0:
            raise CommandError("--step must be positive", returncode=CONFIG_ERROR)

        values = sweep_values(start, stop, step)
        points = sweep_points(base, options['axis'], values)
        try:
            records = verify_grid(options['identity'], points, tol=tol, max_workers=options['threads'])
        except PcfError as e:
            raise CommandError(f"sweep aborted: {e}", returncode=EVALUATION_ERROR)

        table = render_sweep_csv(values, records)
        if options['output']:
            path = Path(options['output'])
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(table)
        else:
            self.stdout.write(table, ending='')
