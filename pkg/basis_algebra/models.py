# basis_algebra/models.py
import math
from dataclasses import dataclass, field

import numpy as np
from django.db import models


class BasisClass(models.TextChoices):
    """R = span(J1..J5), I = span(J6..J9); 乘法像实数和虚数单位"""
    R = 'R', '实类'
    I = 'I', '虚类'
    MIXED = 'M', '混合'


@dataclass(frozen=True, slots=True)
class SpectralPoint:
    """谱域点 (kx, ky), 极坐标 (k_rho, alpha) 由它派生"""
    kx: float
    ky: float

    def __post_init__(self):
        if not (math.isfinite(self.kx) and math.isfinite(self.ky)):
            raise ValueError(f"spectral point must be finite, got ({self.kx}, {self.ky})")

    @classmethod
    def from_polar(cls, k_rho, alpha=0.0):
        if k_rho < 0:
            raise ValueError(f"k_rho must be nonnegative, got {k_rho}")
        return cls(float(k_rho * math.cos(alpha)), float(k_rho * math.sin(alpha)))

    @property
    def k_rho(self):
        return math.hypot(self.kx, self.ky)

    @property
    def k_rho_sq(self):
        return self.kx * self.kx + self.ky * self.ky

    @property
    def alpha(self):
        # 原点处方位角约定为 0
        return math.atan2(self.ky, self.kx) if (self.kx or self.ky) else 0.0

    def rotated(self, angle):
        return SpectralPoint.from_polar(self.k_rho, self.alpha + angle)


def _frozen(values, size):
    array = np.array(values, dtype=complex).reshape(size)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class BasisCoefficients:
    """
    J1..J9 上的复系数, 下标从 1 开始: coeffs[5] 就是 J5 的系数。
    restricted=True 表示属于 R0 (J6..J9 系数恒为 0)。
    """
    values: np.ndarray = field(default_factory=lambda: np.zeros(9, dtype=complex))
    restricted: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).reshape(-1)
        if values.size == 5:
            values = np.concatenate([values, np.zeros(4, dtype=complex)])
        if values.size != 9:
            raise ValueError(f"expected 5 or 9 coefficients, got {values.size}")
        if self.restricted:
            if np.any(values[5:] != 0):
                raise ValueError("restricted coefficients must vanish on J6..J9")
            values[5:] = 0
        object.__setattr__(self, 'values', _frozen(values, 9))

    @classmethod
    def zeros(cls, restricted=True):
        return cls(np.zeros(9, dtype=complex), restricted=restricted)

    @classmethod
    def unit(cls, index):
        values = np.zeros(9, dtype=complex)
        values[index - 1] = 1.0
        return cls(values, restricted=index <= 5)

    @classmethod
    def from_restricted(cls, c1=0, c2=0, c3=0, c4=0, c5=0):
        return cls([c1, c2, c3, c4, c5], restricted=True)

    def __getitem__(self, index):
        if not 1 <= index <= 9:
            raise IndexError(f"basis index must be in 1..9, got {index}")
        return self.values[index - 1]

    def __add__(self, other):
        return BasisCoefficients(self.values + other.values, restricted=self.restricted and other.restricted)

    def __sub__(self, other):
        return BasisCoefficients(self.values - other.values, restricted=self.restricted and other.restricted)

    def __mul__(self, scalar):
        return BasisCoefficients(self.values * scalar, restricted=self.restricted)

    __rmul__ = __mul__

    def norm(self):
        return float(np.linalg.norm(self.values))

    def allclose(self, other, rtol=1e-12, atol=0.0):
        scale = max(self.norm(), other.norm())
        return float(np.max(np.abs(self.values - other.values), initial=0.0)) <= atol + rtol * scale

    def __repr__(self):
        body = ', '.join(f"c{i + 1}={v:.6g}" for i, v in enumerate(self.values) if v != 0)
        return f"BasisCoefficients({body or '0'}, restricted={self.restricted})"


@dataclass(frozen=True, eq=False)
class VectorBasisCoefficients:
    """向量基 j2, j3, j7 上的系数 (J2, J3, J7 的第三列)"""
    c2: complex = 0j
    c3: complex = 0j
    c7: complex = 0j

    def as_array(self):
        return np.array([self.c2, self.c3, self.c7], dtype=complex)

    def norm(self):
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True, eq=False)
class AssembledTensor:
    """
    组装好的谱域张量。
    scaled: 单位基上的系数 c^_l = c_l k_rho^deg (k_rho = 0 也有限);
    coefficients: 原始 J 系数, k_rho 低于退化阈值时为 None。
    """
    matrix: np.ndarray
    scaled: np.ndarray
    coefficients: BasisCoefficients | None = None


@dataclass(frozen=True, eq=False)
class AssembledVector:
    """组装好的谱域向量; scaled 对应 (j2, j^3, j^7), 约定同 AssembledTensor"""
    vector: np.ndarray
    scaled: np.ndarray
    coefficients: VectorBasisCoefficients | None = None
