#!/usr/bin/env python
"""Command-line entry point of the mean-field lab."""
import os
import sys
from settings.conf import ENV_ID, ENV_POSSIBLE_OPTIONS


def main():
    """Run a lab command, or any Django administrative task."""
    assert ENV_ID in ENV_POSSIBLE_OPTIONS, (
            f"Set correct ENV_ID var. Possible options {ENV_POSSIBLE_OPTIONS}"
    )
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', f'settings.env.{ENV_ID}')
    try:
        import django
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc

    django.setup()
    from apps.cli.runner import COMMANDS, run

    argv = sys.argv[1:]
    if argv and argv[0].replace("_", "-") in COMMANDS:
        sys.exit(run([argv[0].replace("_", "-"), *argv[1:]]))
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
