"""稠密最小二乘: 方程数可以多于未知量 (附加约束行), 但必须相容"""
import logging

import numpy as np
from scipy import linalg

from core.conf import green_settings
from core.exceptions import SingularSystem
from core.linalg import equilibrate

logger = logging.getLogger(__name__)


def solve_dense(matrix, rhs, *, condition_limit=None, k_rho=None, label='oracle'):
    """
    行列平衡后用 SVD 判断秩, 再 lstsq。
    返回 (x, 条件数)。最小奇异值相对过小时抛 SingularSystem。
    """
    if condition_limit is None:
        condition_limit = green_settings.CONDITION_LIMIT
    matrix = np.asarray(matrix, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    if matrix.shape[1] == 0:
        return np.zeros((0,) + rhs.shape[1:], dtype=complex), 1.0

    scaled, row, col = equilibrate(matrix)
    singular = linalg.svd(scaled, compute_uv=False)
    cond = float(singular[0] / singular[-1]) if singular[-1] > 0 else np.inf
    if not np.isfinite(cond) or cond > condition_limit:
        raise SingularSystem(
            f"{label} system is numerically singular (condition ~ {cond:.3e})", condition=cond, k_rho=k_rho,
        )
    scaled_rhs = rhs / (row[:, None] if rhs.ndim == 2 else row)
    y, _, _, _ = linalg.lstsq(scaled, scaled_rhs)
    x = y / (col[:, None] if rhs.ndim == 2 else col)
    logger.debug("%s dense solve %dx%d cond=%.3e", label, matrix.shape[0], matrix.shape[1], cond)
    return x, cond
