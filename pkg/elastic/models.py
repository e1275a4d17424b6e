from dataclasses import dataclass, replace

import numpy as np
from django.db import models

from stack.models import UP, Phase


class SourceKind(models.TextChoices):
    TENSOR = 'tensor', '固体中的点力 (张量)'
    VECTOR = 'vector', '流体中的标量源 (向量)'


# 每层每个方向携带的未知量名; 向量源的流体未知量 g 与张量情形的 u 共用行
SOLID_TENSOR = ('x1', 'x2', 'x3', 'x4', 'x5')
SOLID_VECTOR = ('x2', 'x3')
FLUID_TENSOR = ('u', 'v')
FLUID_VECTOR = ('g',)
NO_UNKNOWNS = ()


def layout_for(phase, source_kind):
    if phase == Phase.VACUUM:
        return NO_UNKNOWNS
    if source_kind == SourceKind.VECTOR:
        return SOLID_VECTOR if phase == Phase.SOLID else FLUID_VECTOR
    return SOLID_TENSOR if phase == Phase.SOLID else FLUID_TENSOR


@dataclass(frozen=True, eq=False)
class ElasticLayerCoefficients:
    """
    一层的反射系数。
    up / down 按 layout 排列, 以 references (上行, 下行) 为零相位深度:
    横波项 x e^{tau i k_sz (z - r)}, 纵波项 x e^{tau i k_cz (z - r)}。
    真空层 layout 为空; 缺省参考深度 0 即绝对系数。
    """
    phase: str
    layout: tuple
    up: np.ndarray
    down: np.ndarray
    references: tuple = (0.0, 0.0)

    def __getitem__(self, key):
        """coeffs['x3', UP]"""
        name, direction = key
        values = self.up if direction == UP else self.down
        return values[self.layout.index(name)] if name in self.layout else 0j

    def amplitudes(self, direction):
        return self.up if direction == UP else self.down

    def as_dict(self, direction):
        return dict(zip(self.layout, self.amplitudes(direction)))

    def scaled(self, factor):
        return replace(self, up=self.up * factor, down=self.down * factor)


@dataclass(frozen=True)
class TractionScalars:
    """界面一侧的十个连续性标量 T1..T10, 下标从 1 开始"""
    values: tuple

    def __getitem__(self, index):
        if not 1 <= index <= 10:
            raise IndexError(f"traction scalar index must be in 1..10, got {index}")
        return self.values[index - 1]

    def as_array(self):
        return np.array(self.values, dtype=complex)


@dataclass(frozen=True, eq=False)
class FreeSpaceCoefficients:
    """源层自由项系数, 相位参考点是源深度"""
    d_s: complex
    d_c: complex
    x: np.ndarray


@dataclass(frozen=True, eq=False)
class ElasticSpectralSolution:
    """
    一个谱点上的弹性反射解。
    k_rho 是求解时实际使用的值 (低于退化阈值时为 0)。
    """
    stack: object
    omega: float
    k_rho: float
    z_source: float
    source_layer: int
    source_kind: str
    k_s: np.ndarray
    k_c: np.ndarray
    k_sz: np.ndarray
    k_cz: np.ndarray
    layers: tuple
    condition: float = 1.0

    @property
    def layer_count(self):
        return len(self.layers)

    @property
    def k_scale(self):
        values = np.concatenate([self.k_s, self.k_c])
        return float(np.nanmax(np.abs(values)))

    def perturbed(self, relative):
        """所有反射系数乘以 (1 + relative), 用于故障注入"""
        return replace(self, layers=tuple(layer.scaled(1 + relative) for layer in self.layers))


