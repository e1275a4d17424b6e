import math
from dataclasses import dataclass, field
from numbers import Integral, Real

from django.db import models

from core.conf import green_settings
from core.exceptions import ConfigError


def check_radial(order, rho):
    """阶数只能是整数 0, 1, 2; 半径有限且非负"""
    if isinstance(order, bool) or not isinstance(order, Integral) or order not in (0, 1, 2):
        raise ValueError(f"Bessel order must be the integer 0, 1 or 2, got {order!r}")
    if isinstance(rho, bool) or not isinstance(rho, Real) or not math.isfinite(rho) or rho < 0:
        raise ValueError(f"radius must be finite and nonnegative, got {rho!r}")


@dataclass(frozen=True)
class RadialIntegrand:
    """
    一个与方位角无关的通道 f(k_rho), 积分核 J_order(k_rho rho)。
    function 可以返回标量或数组 (多个通道一起积分)。
    k_scale 决定缺省截断, breakpoints 是实轴上的支点 (各层 Re k)。
    """
    function: object
    order: int
    rho: float
    k_scale: float = 1.0
    breakpoints: tuple = field(default_factory=tuple)

    def __post_init__(self):
        check_radial(self.order, self.rho)
        if not self.k_scale > 0:
            raise ValueError(f"k_scale must be positive, got {self.k_scale}")


@dataclass(frozen=True)
class QuadratureSpec:
    """truncation 为 None 时取 TRUNCATION_FACTOR * max|k|"""
    truncation: float | None = None
    panels: int = 200
    rtol: float = 1e-7
    loss: float = 1e-5
    max_tail_segments: int = 64

    def __post_init__(self):
        if not 0 < self.rtol <= 1e-2:
            raise ConfigError(f"quadrature rtol must be in (0, 1e-2], got {self.rtol}")
        if self.panels < 1:
            raise ConfigError(f"panel count must be positive, got {self.panels}")
        if self.loss < 0:
            raise ConfigError(f"loss must be nonnegative, got {self.loss}")

    @classmethod
    def from_settings(cls, **overrides):
        conf = green_settings.QUADRATURE
        values = {
            'truncation': None,
            'panels': int(conf['PANELS']),
            'rtol': float(conf['RTOL']),
            'loss': float(conf['LOSS']),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def resolve_truncation(self, k_scale):
        truncation = self.truncation
        if truncation is None:
            truncation = green_settings.QUADRATURE['TRUNCATION_FACTOR'] * k_scale
        if truncation < 2 * k_scale:
            raise ConfigError(f"truncation {truncation} is below twice the largest wavenumber {k_scale}")
        return float(truncation)


class GreenKind(models.TextChoices):
    GE = 'GE', '电场格林函数'
    GH = 'GH', '磁场格林函数'
    ELASTIC = 'elastic', '弹性位移格林函数'
