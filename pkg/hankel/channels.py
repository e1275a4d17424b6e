"""
方位角积分的解析结果。

单位基 J^_l(a) 的每个元素都落在 {1, cos a, sin a, cos 2a, sin 2a} 张成的空间里,
而 (1/2pi) int e^{i k rho cos(a - phi)} (...) da 依次给出

    J0,  i cos(phi) J1,  i sin(phi) J1,  -cos(2 phi) J2,  -sin(2 phi) J2

(Bessel 函数的自变量都是 k_rho rho)。所以二维逆变换化成三个径向积分 I0, I1, I2。
"""
from functools import cache

import numpy as np

from basis_algebra.basis import basis_stack

# 每个角向函数对应的 Bessel 阶数
ORDERS = (0, 1, 1, 2, 2)


def angular_functions(alpha):
    alpha = np.asarray(alpha, dtype=float)
    return np.stack([np.ones_like(alpha), np.cos(alpha), np.sin(alpha), np.cos(2 * alpha), np.sin(2 * alpha)], axis=-1)


@cache
def angular_coefficients():
    """(5, 9, 3, 3): J^_l(a) = sum_m A[m, l] f_m(a), 在五个等分方位上求解得到"""
    samples = 2 * np.pi * np.arange(5) / 5
    values = basis_stack(np.cos(samples), np.sin(samples))
    coefficients = np.linalg.solve(angular_functions(samples), values.reshape(5, -1))
    # 元素都是整数组合, 去掉舍入噪声
    coefficients = np.round(coefficients.real * 2) / 2 + 1j * np.round(coefficients.imag * 2) / 2
    coefficients.setflags(write=False)
    return coefficients.reshape(5, 9, 3, 3)


def vector_coefficients():
    """(5, 3, 3): 向量基 (j2, j^3, j^7)"""
    return angular_coefficients()[:, [1, 2, 6]][..., 2]


def angular_weights(phi):
    """每个角向函数在空域的因子, 乘在对应阶的径向积分上"""
    return np.array([
        1.0, 1j * np.cos(phi), 1j * np.sin(phi), -np.cos(2 * phi), -np.sin(2 * phi),
    ], dtype=complex)


def combine(radial, phi, vector=False):
    """
    radial: (m, 3), 第 l 个通道对 J0, J1, J2 的径向积分。
    返回 3x3 张量 (vector=False) 或 3 向量。
    """
    coefficients = vector_coefficients() if vector else angular_coefficients()
    weights = angular_weights(phi)
    terms = radial[:, ORDERS] * weights          # (m, 5)
    return np.einsum('lm,ml...->...', terms, coefficients)
