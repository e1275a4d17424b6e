# basis_algebra/basis.py
"""
九个基矩阵 J1..J9 的实现与分解。

记 u = (ikx, iky, 0), v = (-iky, ikx, 0), e3 = (0, 0, 1):

    J1 = diag(1, 1, 0)   J2 = e3 e3^T   J3 = u e3^T   J4 = e3 u^T   J5 = u u^T
    J6 = e3 v^T          J7 = -v e3^T   J8 = v u^T    J9 = 上 2x2 块 [[0, 1], [-1, 0]]

J_l 关于 (ikx, iky) 是 DEGREES[l] 次齐次的, 所以单位基 J_l / k_rho^deg 就是
在单位圆上的点 (cos a, sin a) 处求值, k_rho = 0 时也有定义。
"""
import logging

import numpy as np

from core.conf import green_settings
from core.exceptions import DegenerateSpectralPoint
from .models import BasisClass, BasisCoefficients, SpectralPoint, VectorBasisCoefficients

logger = logging.getLogger(__name__)

DEGREES = np.array([0, 0, 1, 1, 2, 1, 1, 2, 0])
RESTRICTED = range(1, 6)
VECTOR_INDICES = (2, 3, 7)


def _check_index(index, allowed=range(1, 10)):
    if index not in allowed:
        raise ValueError(f"basis index must be one of {list(allowed)}, got {index!r}")


def basis_stack(kx, ky):
    """
    向量化实现: kx, ky 为同形数组, 返回 (..., 9, 3, 3)。
    所有元素只由乘积和变号得到, 没有舍入以外的运算。
    """
    a = 1j * np.asarray(kx, dtype=float)
    b = 1j * np.asarray(ky, dtype=float)
    one = np.ones_like(a)
    out = np.zeros(a.shape + (9, 3, 3), dtype=complex)

    out[..., 0, 0, 0] = one
    out[..., 0, 1, 1] = one
    out[..., 1, 2, 2] = one
    # J3 / J4: u 作为第三列 / 第三行
    out[..., 2, 0, 2] = a
    out[..., 2, 1, 2] = b
    out[..., 3, 2, 0] = a
    out[..., 3, 2, 1] = b
    # J5 = u u^T
    out[..., 4, 0, 0] = a * a
    out[..., 4, 0, 1] = a * b
    out[..., 4, 1, 0] = b * a
    out[..., 4, 1, 1] = b * b
    # J6 = e3 v^T, v = (-b, a)
    out[..., 5, 2, 0] = -b
    out[..., 5, 2, 1] = a
    # J7 = -v e3^T
    out[..., 6, 0, 2] = b
    out[..., 6, 1, 2] = -a
    # J8 = v u^T
    out[..., 7, 0, 0] = -b * a
    out[..., 7, 0, 1] = -b * b
    out[..., 7, 1, 0] = a * a
    out[..., 7, 1, 1] = a * b
    out[..., 8, 0, 1] = one
    out[..., 8, 1, 0] = -one
    return out


def realize_basis(index, point):
    _check_index(index)
    return basis_stack(point.kx, point.ky)[index - 1]


def realize_unit_basis(index, alpha):
    """J_l / k_rho^deg, 只依赖方位角"""
    _check_index(index)
    return basis_stack(np.cos(alpha), np.sin(alpha))[index - 1]


def realize(coefficients, point):
    """sum_l c_l J_l"""
    return np.einsum('l,lij->ij', coefficients.values, basis_stack(point.kx, point.ky))


def realize_scaled(scaled, alpha):
    """
    sum_l c^_l J^_l(alpha), 其中 c^_l = c_l * k_rho^deg。
    组装在 k_rho -> 0 时走这条路, 不出现 1/k_rho 因子。
    """
    values = np.asarray(getattr(scaled, 'values', scaled), dtype=complex)
    return np.einsum('l,lij->ij', values, basis_stack(np.cos(alpha), np.sin(alpha)))


def scale_coefficients(coefficients, k_rho):
    """c_l -> c_l * k_rho^deg"""
    return BasisCoefficients(coefficients.values * k_rho ** DEGREES, restricted=coefficients.restricted)


def unscale_coefficients(values, k_rho, restricted=False):
    """c^_l -> c^_l / k_rho^deg, 调用方保证 k_rho > 0"""
    return BasisCoefficients(np.asarray(values, dtype=complex) / k_rho ** DEGREES, restricted=restricted)


def degenerate_threshold(k_scale=1.0, rtol=None):
    if rtol is None:
        rtol = green_settings.DEGENERATE_RTOL
    return rtol * max(1.0, float(k_scale))


def _require_nondegenerate(point, k_scale, rtol):
    threshold = degenerate_threshold(k_scale, rtol)
    if point.k_rho <= threshold:
        raise DegenerateSpectralPoint(
            f"k_rho={point.k_rho:.3e} is below the degenerate threshold {threshold:.3e}; "
            "assemble the tensor instead of decomposing it"
        )


def decompose(matrix, point, *, k_scale=1.0, rtol=None, restricted=False):
    """
    3x3 矩阵 -> J1..J9 系数。

    在单位基上解 9x9 稠密方程 (单位基的条件数与 k_rho 无关), 再除以 k_rho^deg。
    restricted=True 时把 c6..c9 置零后返回 R0 中的元素。
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {matrix.shape}")
    _require_nondegenerate(point, k_scale, rtol)

    unit = basis_stack(np.cos(point.alpha), np.sin(point.alpha))
    columns = unit.reshape(9, 9).T
    scaled = np.linalg.solve(columns, matrix.reshape(9))
    values = scaled / point.k_rho ** DEGREES
    if restricted:
        values[5:] = 0
    return BasisCoefficients(values, restricted=restricted)


def realize_vector_basis(index, point):
    """j2 = e3, j3 = u, j7 = -v: 分别是 J2, J3, J7 的第三列"""
    _check_index(index, VECTOR_INDICES)
    return realize_basis(index, point)[:, 2].copy()


def realize_vector(coefficients, point):
    return sum(c * realize_vector_basis(index, point) for index, c in zip(VECTOR_INDICES, coefficients.as_array()))


def realize_scaled_vector(scaled, alpha):
    """(c2, c^3, c^7) 在单位向量基上求和, c^3 = c3 k_rho, c^7 = c7 k_rho"""
    unit = basis_stack(np.cos(alpha), np.sin(alpha))[[1, 2, 6], :, 2]
    return np.asarray(scaled, dtype=complex) @ unit


def decompose_vector(vector, point, *, k_scale=1.0, rtol=None):
    vector = np.asarray(vector, dtype=complex).reshape(3)
    _require_nondegenerate(point, k_scale, rtol)
    columns = basis_stack(point.kx, point.ky)[[1, 2, 6], :, 2].T
    c2, c3, c7 = np.linalg.solve(columns, vector)
    return VectorBasisCoefficients(c2, c3, c7)


def basis_class(coefficients, tol=0.0):
    """R: 只在 J1..J5 上; I: 只在 J6..J9 上; 其余为 MIXED"""
    values = coefficients.values
    scale = tol * max(float(np.linalg.norm(values)), 1e-300)
    if np.all(np.abs(values[5:]) <= scale):
        return BasisClass.R
    if np.all(np.abs(values[:5]) <= scale):
        return BasisClass.I
    return BasisClass.MIXED
