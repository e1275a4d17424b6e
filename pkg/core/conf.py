# core/conf.py
"""
数值设置访问器

用法和 DRF 的 api_settings 一样:

    from core.conf import green_settings
    green_settings.CONDITION_LIMIT

用户值来自 settings.LAYERED_GREEN, 缺省值见 DEFAULTS。
没有配置 Django 时 (比如直接当库用) 退回到缺省值。
"""
from django.core.exceptions import ImproperlyConfigured
from django.core.signals import setting_changed

DEFAULTS = {
    'DEGENERATE_RTOL': 1e-8,
    'SERIES_CUTOFF': 1e-6,
    'INTERFACE_RTOL': 1e-12,
    'BRANCH_RTOL': 1e-10,
    'CONDITION_LIMIT': 1e12,
    'LOSS': 0.0,
    'THREADS': 1,
    'SELFCHECK_POINTS': 200,
    'QUADRATURE': {
        'TRUNCATION_FACTOR': 12.0,
        'PANELS': 200,
        'RTOL': 1e-7,
        'LOSS': 1e-5,
    },
    'VALIDATION': {
        'INTERFACE': 1e-10,
        'RADIATION': 0.0,
        'B3_IDENTITY': 1e-6,
        'ROTATION': 1e-10,
        'ORACLE': 1e-9,
        'ORACLE_CONDITION': 1e8,
        'MODE_GAP': 1e-3,
    },
}


def _user_settings():
    from django.conf import settings
    try:
        return dict(getattr(settings, 'LAYERED_GREEN', {}))
    except ImproperlyConfigured:
        return {}


class GreenSettings:
    def __init__(self, defaults=None):
        self.defaults = defaults or DEFAULTS
        self._user = None
        self._cached = set()

    @property
    def user_settings(self):
        if self._user is None:
            self._user = _user_settings()
        return self._user

    def __getattr__(self, attr):
        if attr not in self.defaults:
            raise AttributeError(f"Invalid LAYERED_GREEN setting: '{attr}'")

        default = self.defaults[attr]
        value = self.user_settings.get(attr, default)
        # 嵌套的 dict 按键合并, 用户只需覆盖其中几项
        if isinstance(default, dict):
            value = {**default, **(value or {})}

        self._cached.add(attr)
        setattr(self, attr, value)
        return value

    def reload(self):
        for attr in self._cached:
            delattr(self, attr)
        self._cached.clear()
        self._user = None


green_settings = GreenSettings(DEFAULTS)


def reload_green_settings(*args, **kwargs):
    if kwargs.get('setting') == 'LAYERED_GREEN':
        green_settings.reload()


setting_changed.connect(reload_green_settings)
