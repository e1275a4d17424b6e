# oracle/apps.py
from django.apps import AppConfig


class OracleConfig(AppConfig):
    name = 'oracle'
    verbose_name = '参考求解器'
