from django.core.management.base import CommandError

from parabolic.serializers import parse_complex

CONFIG_ERROR = 2
EVALUATION_ERROR = 3
VERIFICATION_FAILED = 1


def complex_option(name, text):
    """Parse a complex command-line value, exit code 2 on a bad literal"""
    try:
        return parse_complex(text)
    except ValueError as e:
        raise CommandError(f"--{name}: {e}", returncode=CONFIG_ERROR)


def float_option(name, text):
    try:
        return float(text)
    except (TypeError, ValueError):
        raise CommandError(f"--{name}: not a number: {text!r}", returncode=CONFIG_ERROR)

