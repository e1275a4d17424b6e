# 让同一批 tests.py 也能被通用的测试收集器 (pytest) 跑起来
import os

import django


def pytest_configure(config):
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'core.settings')
    django.setup()
