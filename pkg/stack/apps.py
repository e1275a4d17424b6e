# stack/apps.py
from django.apps import AppConfig


class StackConfig(AppConfig):
    name = 'stack'
    verbose_name = '分层几何与材料'
