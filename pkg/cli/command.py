"""四个批处理命令共用的参数和退出码处理"""
import logging

from django.core.management.base import BaseCommand, CommandError

from core.conf import green_settings
from core.exceptions import (
    CoincidentDepths, ConfigError, InvalidStack, OnInterface, PhaseMismatch, SystemShapeError,
)
from .models import ExitCode, RowStatus
from .serializers import load_config
from .writers import render, write_output

logger = logging.getLogger(__name__)

PACKAGES = ('basis_algebra', 'stack', 'maxwell', 'elastic', 'oracle', 'hankel', 'cli')

# 配置本身有问题 (而不是数值上碰到极点或支点) 的异常, 退出码 2
CONFIG_ERRORS = (ConfigError, InvalidStack, OnInterface, CoincidentDepths, PhaseMismatch, SystemShapeError)


class GreenCommand(BaseCommand):
    requires_system_checks = []
    needs_config = True

    def add_arguments(self, parser):
        parser.add_argument('--config', help='JSON 运行配置 (schema_version 1)')
        parser.add_argument('--out', help='输出文件, 缺省写到 stdout')
        parser.add_argument('--strict', action='store_true', help='碰到奇异点或积分不收敛时以非零码退出')
        parser.add_argument('--verbose', action='store_true')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--threads', type=int, default=None)

    def handle(self, *args, **options):
        if options['verbose']:
            for name in PACKAGES:
                logging.getLogger(name).setLevel(logging.DEBUG)
        options['threads'] = options['threads'] or int(green_settings.THREADS)

        path = options.pop('config')
        try:
            config = None
            if self.needs_config:
                if not path:
                    raise ConfigError("--config is required")
                config = load_config(path)
            self.run(config, **options)
        except CONFIG_ERRORS as exc:
            raise CommandError(str(exc), returncode=ExitCode.CONFIG_ERROR) from exc

    def run(self, config, **options):
        raise NotImplementedError

    def emit(self, header, rows, config, out=None):
        path = out or config.output_path
        write_output(render(header, rows, config.output_format), path, self.stdout)
        if path:
            logger.info("wrote %d rows to %s", len(rows), path)

    def check_flags(self, rows, strict):
        statuses = {row[-1] for row in rows}
        for status, code in ((RowStatus.SINGULAR, ExitCode.SINGULAR), (RowStatus.NONCONVERGENT, ExitCode.NONCONVERGENT)):
            if status in statuses:
                count = sum(1 for row in rows if row[-1] == status)
                if strict:
                    raise CommandError(f"{count} rows flagged {status}", returncode=code)
                self.stderr.write(f"warning: {count} rows flagged {status}")

    def print_report(self, report):
        for check in report.checks:
            mark = 'ok' if check.passed else 'FAIL'
            self.stdout.write(f"{check.name:<22} {check.value:.3e}  <= {check.threshold:.1e}  {mark}")
