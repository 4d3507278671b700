from django.core.management.base import BaseCommand
from rest_framework.renderers import JSONRenderer

from parabolic.identities import catalog
from parabolic.serializers import IdentityDescriptorSerializer


class Command(BaseCommand):
    help = 'List the identity catalog'

    def add_arguments(self, parser):
        parser.add_argument('--json', action='store_true', help='Emit the catalog as JSON')

    def handle(self, *args, **options):
        entries = catalog()
        if options['json']:
            data = IdentityDescriptorSerializer(entries, many=True).data
            self.stdout.write(JSONRenderer().render(data, renderer_context={'indent': 2}).decode())
            return

        for entry in entries:
            flag = ' [report-only]' if entry.report_only else ''
            self.stdout.write(self.style.MIGRATE_HEADING(f"{entry.id} {entry.equation}  {entry.label}{flag}"))
            self.stdout.write(f"    domain:    {entry.domain_text}")
            self.stdout.write(f"    identity:  {entry.formula}")
            self.stdout.write(f"    anchor:    \"{entry.anchor}\"")
            self.stdout.write(f"    tolerance: {entry.default_tol:g}")
            if entry.notes:
                self.stdout.write(f"    notes:     {entry.notes}")
