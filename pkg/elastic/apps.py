# elastic/apps.py
from django.apps import AppConfig


class ElasticConfig(AppConfig):
    name = 'elastic'
    verbose_name = '分层弹性格林函数'
