import logging

from django.core.management.base import BaseCommand, CommandError

from parabolic.exceptions import PcfError
from parabolic.gammakit import gamma
from parabolic.hypergeom import laguerre, phi, phi_route, psi_auto
from parabolic.pcf import ROUTE_CHOICES, PcfEvalPolicy, erf, hermite_case, pcf_d, pcf_d_dnu
from parabolic.reports import format_complex

from ._options import CONFIG_ERROR, EVALUATION_ERROR, complex_option, float_option

logger = logging.getLogger(__name__)

FUNCTION_CHOICES = [
    ('d', 'Parabolic cylinder function D_nu(z)'),
    ('phi', 'Kummer Phi(nu, mu; z)'),
    ('psi', 'Tricomi Psi(nu, mu; z)'),
    ('laguerre', 'Laguerre L_n^alpha(z)'),
    ('erf', 'Error function erf(z)'),
    ('dnu', 'd/dnu D_nu(z)'),
    ('hermite', 'D_n(z) for integer n >= 0'),
    ('gamma', 'Gamma(z)'),
]


class Command(BaseCommand):
    help = 'Evaluate one special function and print its value and route'

    def add_arguments(self, parser):
        parser.add_argument('function', choices=[choice for choice, _ in FUNCTION_CHOICES])
        parser.add_argument('--nu', default='0')
        parser.add_argument('--mu', default='1')
        parser.add_argument('--z', default='0')
        parser.add_argument('--n', default='0')
        parser.add_argument('--alpha', default='0')
        parser.add_argument('--route', default='phi_combination',
                            choices=[choice for choice, _ in ROUTE_CHOICES])

    def handle(self, *args, **options):
        function = options['function']
        nu = complex_option('nu', options['nu'])
        mu = complex_option('mu', options['mu'])
        z = complex_option('z', options['z'])
        alpha = float_option('alpha', options['alpha'])
        try:
            n = int(options['n'])
        except ValueError:
            raise CommandError(f"--n: not an integer: {options['n']!r}", returncode=CONFIG_ERROR)

        try:
            policy = PcfEvalPolicy(route=options['route'])
            value, route = self.evaluate(function, nu, mu, z, n, alpha, policy)
        except (PcfError, ValueError, OverflowError, ZeroDivisionError) as e:
            logger.warning(f"eval {function} failed: {e}")
            raise CommandError(f"{function}: {e}", returncode=EVALUATION_ERROR)

        self.stdout.write(format_complex(value))
        self.stdout.write(f"route: {route}")

    def evaluate(self, function, nu, mu, z, n, alpha, policy):
        if function == 'd':
            return pcf_d(nu, z, policy), policy.route
        if function == 'phi':
            return phi(nu, mu, z), phi_route(nu, mu, z)
        if function == 'psi':
            return psi_auto(nu, mu, z), 'psi_auto'
        if function == 'laguerre':
            return laguerre(n, alpha, z), 'three-term recurrence'
        if function == 'erf':
            return erf(z), 'math.erf' if z.imag == 0 else 'Kummer series'
        if function == 'dnu':
            return pcf_d_dnu(nu, z, policy), f"central difference, order {policy.deriv_order}"
        if function == 'hermite':
            return hermite_case(n, z), 'Hermite recurrence'
        return gamma(z), 'Lanczos'
