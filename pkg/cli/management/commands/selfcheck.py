from django.core.management.base import CommandError

from cli.command import GreenCommand
from cli.models import ExitCode
from cli.runners import run_selfcheck


class Command(GreenCommand):
    help = '矩阵基代数自检 (不需要配置)'
    needs_config = False

    def run(self, config, *, seed=0, verbose=False, **options):
        report = run_selfcheck(seed=seed)
        self.print_report(report)
        if verbose:
            self.stdout.write('     ' + ''.join(f'{f"J{v}":>10}' for v in range(1, 10)))
            for u, row in enumerate(report.table, start=1):
                self.stdout.write(f'{f"J{u}":<5}' + ''.join(f'{value:>10.1e}' for value in row))
        if not report.passed:
            raise CommandError("algebra self-check failed", returncode=ExitCode.VALIDATION_FAILED)
