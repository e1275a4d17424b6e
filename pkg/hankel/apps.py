# hankel/apps.py
from django.apps import AppConfig


class HankelConfig(AppConfig):
    name = 'hankel'
    verbose_name = '谱域到空域的径向变换'
