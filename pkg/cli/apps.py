# cli/apps.py
from django.apps import AppConfig


class CliConfig(AppConfig):
    name = 'cli'
    verbose_name = '批处理命令'
