# maxwell/models.py
from dataclasses import dataclass, replace

import numpy as np
from django.db import models

from stack.models import DOWN, UP


class FieldKind(models.TextChoices):
    GE = 'GE', '电场格林函数'
    GH = 'GH', '磁场格林函数'


class PotentialKind(models.TextChoices):
    TRANSVERSE = 'transverse', '横向位'
    SOMMERFELD = 'sommerfeld', 'Sommerfeld 位'


@dataclass(frozen=True, eq=False)
class EmSpectralSolution:
    """
    一个谱点上的反射场系数。

    amplitudes[i, t, dir] 是 b_{i+1} 在第 t 层 dir 方向的幅度, 以参考深度
    references[t, dir] 为零相位点: 上行项 A e^{i kz (z - r)}, 下行项 A e^{-i kz (z - r)}。
    参考深度取层的下/上边界, 层内指数因子的模不超过 1。
    b1_r / b2_r / b3_r 给出以 z = 0 为参考的系数。
    """
    stack: object
    omega: float
    k_rho: float
    z_source: float
    source_layer: int
    k: np.ndarray
    kz: np.ndarray
    amplitudes: np.ndarray
    references: np.ndarray
    condition: float = 1.0

    @property
    def layer_count(self):
        return self.k.size

    @property
    def mu(self):
        return np.array([m.mu for m in self.stack.materials], dtype=complex)

    @property
    def epsilon(self):
        return np.array([m.epsilon for m in self.stack.materials], dtype=complex)

    @property
    def k_scale(self):
        return float(np.abs(self.k).max())

    def absolute(self, index):
        """b_index 的反射系数, 参考点 z = 0"""
        amplitudes = self.amplitudes[index - 1]
        refs = np.nan_to_num(self.references)
        phase = np.stack([np.exp(-1j * self.kz * refs[:, UP]), np.exp(1j * self.kz * refs[:, DOWN])], axis=1)
        return np.where(amplitudes == 0, 0, amplitudes * phase)

    @property
    def b1_r(self):
        return self.absolute(1)

    @property
    def b2_r(self):
        return self.absolute(2)

    @property
    def b3_r(self):
        return self.absolute(3)

    def perturbed(self, relative):
        """所有非零幅度乘以 (1 + relative), 用于故障注入"""
        return replace(self, amplitudes=self.amplitudes * (1 + relative))


@dataclass(frozen=True, eq=False)
class BProfile:
    """某深度上 b1, b2, b3 及其 z 导数 (数组下标 0..2)"""
    layer: int
    z: float
    k: complex
    kz: complex
    mu: complex
    epsilon: complex
    value: np.ndarray
    dz: np.ndarray

    @property
    def dzz(self):
        return -self.kz ** 2 * self.value


@dataclass(frozen=True, eq=False)
class PotentialProfile:
    """位函数在某深度的值和前两阶 z 导数, 都是 R0 中的系数"""
    kind: str
    value: object
    dz: object
    dzz: object
