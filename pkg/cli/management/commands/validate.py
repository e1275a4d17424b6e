from django.core.management.base import CommandError

from cli.command import GreenCommand
from cli.models import ExitCode
from cli.runners import run_validation


class Command(GreenCommand):
    help = '界面残差, 辐射条件, b3 恒等式, 旋转不变性, 整张量参考解比较'

    def run(self, config, *, threads, seed=0, **options):
        report = run_validation(config, seed=seed, threads=threads)
        self.print_report(report)
        for k_rho in report.skipped:
            self.stderr.write(f"warning: k_rho={k_rho:.17g} is singular, skipped")
        if not report.passed:
            failed = ', '.join(c.name for c in report.checks if not c.passed)
            raise CommandError(f"validation failed: {failed}", returncode=ExitCode.VALIDATION_FAILED)
