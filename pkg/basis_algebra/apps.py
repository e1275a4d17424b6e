# basis_algebra/apps.py
from django.apps import AppConfig


class BasisAlgebraConfig(AppConfig):
    name = 'basis_algebra'
    verbose_name = '矩阵基代数'

    def ready(self):
        # 启动时核对一次硬编码乘法表
        from .products import ensure_product_table
        ensure_product_table()
