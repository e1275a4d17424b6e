# oracle/halfspace.py
import numpy as np

from stack.models import MaterialKind
from stack.wavenumbers import vertical_wavenumber, wavenumbers
from .models import ReflectionKind


def oracle_halfspace_reflection(kind, materials, omega, k_rho):
    """
    两层介质的反射系数 (入射波从上层射向界面)。

    直接解两条连续性方程: [[f]] = 0, [[w dz f]] = 0,
    TE: w = 1/mu, TM: w = 1/eps, 声学: w = 1/rho (压力)。
    """
    if len(materials) != 2:
        raise ValueError(f"half-space reflection needs exactly two materials, got {len(materials)}")

    kind = ReflectionKind(kind)
    vertical, weights = [], []
    for material in materials:
        if kind == ReflectionKind.ACOUSTIC:
            if material.kind != MaterialKind.ELASTIC:
                raise ValueError("acoustic reflection needs two fluid layers")
            k = wavenumbers(material, omega).k_c
            weight = 1 / material.rho
        else:
            if material.kind != MaterialKind.EM:
                raise ValueError(f"{kind} reflection needs EM materials")
            k = wavenumbers(material, omega)
            weight = 1 / material.mu if kind == ReflectionKind.TE else 1 / material.epsilon
        vertical.append(vertical_wavenumber(k, k_rho))
        weights.append(weight)

    (kz0, kz1), (w0, w1) = vertical, weights
    # 入射下行波幅度 1; 未知量: 反射 (上行) R, 透射 (下行) T
    matrix = np.array([
        [1, -1],
        [w0 * 1j * kz0, w1 * 1j * kz1],
    ], dtype=complex)
    rhs = np.array([-1, w0 * 1j * kz0], dtype=complex)
    reflection, _ = np.linalg.solve(matrix, rhs)
    return complex(reflection)
