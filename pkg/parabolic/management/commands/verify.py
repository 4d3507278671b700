import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser

from parabolic.exceptions import PcfError
from parabolic.reports import render, run_config
from parabolic.serializers import FORMAT_CHOICES, GridConfigSerializer

from ._options import CONFIG_ERROR, EVALUATION_ERROR, VERIFICATION_FAILED

logger = logging.getLogger(__name__)


def load_config(path):
    """Parse and validate a GridConfig file; CommandError(2) on any problem"""
    try:
        with open(path, 'rb') as stream:
            data = JSONParser().parse(stream)
    except OSError as e:
        raise CommandError(f"cannot read config {path}: {e}", returncode=CONFIG_ERROR)
    except ParseError as e:
        raise CommandError(f"config {path} is not valid JSON: {e.detail}", returncode=CONFIG_ERROR)
    if not isinstance(data, dict):
        raise CommandError(f"config {path} must be a JSON object", returncode=CONFIG_ERROR)

    serializer = GridConfigSerializer(data=data)
    if not serializer.is_valid():
        raise CommandError(f"invalid config {path}: {dict(serializer.errors)}", returncode=CONFIG_ERROR)
    return serializer.validated_data


class Command(BaseCommand):
    help = 'Verify catalog identities over the grids of a config file'

    def add_arguments(self, parser):
        parser.add_argument('config', help='GridConfig JSON file')
        parser.add_argument('--output', help='Report path (overrides the config)')
        parser.add_argument('--format', choices=[choice for choice, _ in FORMAT_CHOICES])
        parser.add_argument('--threads', type=int, help='Worker threads (overrides PCF_MAX_THREADS)')

    def handle(self, *args, **options):
        config = load_config(options['config'])
        if options['output']:
            config['output'] = options['output']
        if options['format']:
            config['format'] = options['format']
        if options['threads'] is not None and options['threads'] < 1:
            raise CommandError("--threads must be at least 1", returncode=CONFIG_ERROR)

        try:
            report = run_config(config, max_workers=options['threads'])
        except PcfError as e:
            logger.exception("verification run aborted")
            raise CommandError(f"verification aborted: {e}", returncode=EVALUATION_ERROR)

        payload = render(report, config['format'])
        output = config.get('output')
        if output:
            path = Path(output)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(payload)
            notes = self.stdout
        else:
            self.stdout.write(payload.decode('utf-8'), ending='')
            notes = self.stderr

        for summary in report.summary:
            notes.write(
                f"{summary.identity}: {summary.tested} tested, {summary.passed} passed, "
                f"{summary.failed} failed, {summary.skipped} skipped"
            )

        if report.all_skipped:
            notes.write(self.style.WARNING("every point was skipped (out of domain); 0 tested"))
        failures = report.failures
        if failures:
            raise CommandError(f"{len(failures)} verification failure(s)", returncode=VERIFICATION_FAILED)
        if output:
            self.stdout.write(self.style.SUCCESS(f"report written to {output}"))
