from cli.command import GreenCommand
from cli.runners import spatial_table


class Command(GreenCommand):
    help = '空域格林函数: 每个目标点一行'

    def run(self, config, *, threads, out=None, strict=False, **options):
        header, rows = spatial_table(config, threads=threads)
        self.emit(header, rows, config, out)
        self.check_flags(rows, strict)
