# maxwell/apps.py
from django.apps import AppConfig


class MaxwellConfig(AppConfig):
    name = 'maxwell'
    verbose_name = '分层电磁格林函数'
