from cli.command import GreenCommand
from cli.runners import spectral_table


class Command(GreenCommand):
    help = '谱域扫描: 每个 (k_rho, z) 输出基系数和组装好的张量'

    def run(self, config, *, threads, out=None, strict=False, **options):
        header, rows = spectral_table(config, threads=threads)
        self.emit(header, rows, config, out)
        self.check_flags(rows, strict)
