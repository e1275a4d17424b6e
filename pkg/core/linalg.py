# core/linalg.py
"""界面方程组的带状求解 (带部分选主元)"""
import logging

import numpy as np
from scipy import linalg

from core.conf import green_settings
from core.exceptions import SingularSystem, SystemShapeError

logger = logging.getLogger(__name__)

# 条件数估计用的固定右端: 全 1, 以及按黄金分割角度转动的单位复数
_GOLDEN = 0.5 * (np.sqrt(5.0) - 1.0)


def bandwidths(matrix):
    """返回 (下带宽, 上带宽)"""
    rows, cols = np.nonzero(matrix)
    if rows.size == 0:
        return 0, 0
    offsets = cols - rows
    return int(max(0, -offsets.min())), int(max(0, offsets.max()))


def to_banded(matrix, lower, upper):
    """dense -> LAPACK gbsv 的带状存储 ab[upper + i - j, j] = a[i, j]"""
    n = matrix.shape[0]
    ab = np.zeros((lower + upper + 1, n), dtype=complex)
    for j in range(n):
        top = max(0, j - upper)
        bottom = min(n, j + lower + 1)
        ab[upper + top - j:upper + bottom - j, j] = matrix[top:bottom, j]
    return ab


def equilibrate(matrix):
    """行列最大元缩放到 1, 返回 (缩放后矩阵, 行因子, 列因子)"""
    row = np.abs(matrix).max(axis=1)
    row[row == 0] = 1.0
    scaled = matrix / row[:, None]
    col = np.abs(scaled).max(axis=0)
    col[col == 0] = 1.0
    return scaled / col[None, :], row, col


def estimate_vectors(n):
    """(n, 2) 的固定右端, 和方程右端一起交给同一次带状分解"""
    j = np.arange(n)
    return np.column_stack([np.ones(n, dtype=complex), np.exp(2j * np.pi * _GOLDEN * j)])


def condition_estimate(matrix, solved):
    """
    1-范数条件数的下界估计: ||A||_1 * max_k ||A^-1 w_k||_1 / ||w_k||_1。
    solved 是 estimate_vectors 的各列解, 不需要额外分解。
    """
    with np.errstate(all='ignore'):
        inverse = np.abs(solved).sum(axis=0).max() / matrix.shape[0]
        cond = np.abs(matrix).sum(axis=0).max() * inverse
    return float(cond) if np.isfinite(cond) else np.inf


def solve_interface_system(matrix, rhs, *, condition_limit=None, k_rho=None, label='interface'):
    """
    解 matrix @ x = rhs, rhs 可以有多列。

    先做行列平衡, 按非零结构取带宽, 用 scipy.linalg.solve_banded 求解;
    条件数从同一次分解顺带估计, 超过 condition_limit 视为谱极点抛 SingularSystem。
    返回 (x, 条件数估计)。
    """
    matrix = np.asarray(matrix, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise SystemShapeError(f"{label} system has shape {matrix.shape}, expected square")
    if matrix.shape[0] != rhs.shape[0]:
        raise SystemShapeError(f"{label} right-hand side has {rhs.shape[0]} rows, expected {matrix.shape[0]}")
    if matrix.shape[0] == 0:
        return np.zeros(rhs.shape, dtype=complex), 1.0

    if condition_limit is None:
        condition_limit = green_settings.CONDITION_LIMIT

    n = matrix.shape[0]
    scaled, row, col = equilibrate(matrix)
    lower, upper = bandwidths(scaled)
    ab = to_banded(scaled, lower, upper)
    columns = rhs.reshape(n, -1) / row[:, None]
    try:
        with np.errstate(all='ignore'):
            y = linalg.solve_banded((lower, upper), ab, np.hstack([columns, estimate_vectors(n)]))
    except linalg.LinAlgError as exc:
        raise SingularSystem(f"{label} system is singular: {exc}", condition=np.inf, k_rho=k_rho) from exc

    cond = condition_estimate(scaled, y[:, -2:])
    if not np.isfinite(cond) or cond > condition_limit:
        raise SingularSystem(
            f"{label} system is numerically singular (condition ~ {cond:.3e})",
            condition=float(cond), k_rho=k_rho,
        )

    x = (y[:, :-2] / col[:, None]).reshape(rhs.shape)
    logger.debug("%s system n=%d band=(%d,%d) cond=%.3e", label, n, lower, upper, cond)
    return x, cond
