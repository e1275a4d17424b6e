# basis_algebra/products.py
"""
基矩阵乘法表。

J_u J_v = sum_w (C0[u,v,w] + k_rho^2 * C1[u,v,w]) J_w, 结构常数是硬编码的,
启动时用实际矩阵乘积核对一次 (ensure_product_table)。
"""
import functools
import logging

import numpy as np

from core.conf import green_settings
from core.exceptions import ProductTableError
from .basis import basis_stack
from .models import BasisClass, BasisCoefficients

logger = logging.getLogger(__name__)

# (u, v) -> ((w, 常数项, k_rho^2 项), ...); 没列出的乘积为 0
PRODUCT_TABLE = {
    (1, 1): ((1, 1, 0),),
    (1, 3): ((3, 1, 0),),
    (1, 5): ((5, 1, 0),),
    (1, 7): ((7, 1, 0),),
    (1, 8): ((8, 1, 0),),
    (1, 9): ((9, 1, 0),),
    (2, 2): ((2, 1, 0),),
    (2, 4): ((4, 1, 0),),
    (2, 6): ((6, 1, 0),),
    (3, 2): ((3, 1, 0),),
    (3, 4): ((5, 1, 0),),
    (3, 6): ((8, 1, 0), (9, 0, -1)),
    (4, 1): ((4, 1, 0),),
    (4, 3): ((2, 0, -1),),
    (4, 5): ((4, 0, -1),),
    (4, 9): ((6, 1, 0),),
    (5, 1): ((5, 1, 0),),
    (5, 3): ((3, 0, -1),),
    (5, 5): ((5, 0, -1),),
    (5, 9): ((8, 1, 0), (9, 0, -1)),
    (6, 1): ((6, 1, 0),),
    (6, 7): ((2, 0, 1),),
    (6, 8): ((4, 0, -1),),
    (6, 9): ((4, -1, 0),),
    (7, 2): ((7, 1, 0),),
    (7, 4): ((8, -1, 0),),
    (7, 6): ((1, 0, 1), (5, 1, 0)),
    (8, 1): ((8, 1, 0),),
    (8, 3): ((7, 0, 1),),
    (8, 5): ((8, 0, -1),),
    (8, 9): ((1, 0, -1), (5, -1, 0)),
    (9, 1): ((9, 1, 0),),
    (9, 3): ((7, 1, 0),),
    (9, 5): ((8, -1, 0),),
    (9, 7): ((3, -1, 0),),
    (9, 8): ((5, 1, 0),),
    (9, 9): ((1, -1, 0),),
}


def _structure_constants():
    c0 = np.zeros((9, 9, 9))
    c1 = np.zeros((9, 9, 9))
    for (u, v), terms in PRODUCT_TABLE.items():
        for w, const, quad in terms:
            c0[u - 1, v - 1, w - 1] = const
            c1[u - 1, v - 1, w - 1] = quad
    c0.setflags(write=False)
    c1.setflags(write=False)
    return c0, c1


C0, C1 = _structure_constants()


def multiply_in_basis(a, b, k_rho_sq):
    """(sum a_u J_u)(sum b_v J_v) 的系数; 两个 R0 元素的乘积仍在 R0 中"""
    table = C0 + complex(k_rho_sq) * C1
    values = np.einsum('u,v,uvw->w', a.values, b.values, table)
    restricted = a.restricted and b.restricted
    if restricted:
        values[5:] = 0
    return BasisCoefficients(values, restricted=restricted)


_CLASS_PRODUCT = {
    (BasisClass.R, BasisClass.R): BasisClass.R,
    (BasisClass.R, BasisClass.I): BasisClass.I,
    (BasisClass.I, BasisClass.R): BasisClass.I,
    (BasisClass.I, BasisClass.I): BasisClass.R,
}


def product_rule_class(a_class, b_class):
    try:
        return _CLASS_PRODUCT[(BasisClass(a_class), BasisClass(b_class))]
    except (KeyError, ValueError):
        raise ValueError(f"product class is only defined for R and I, got ({a_class}, {b_class})") from None


def product_residuals(kx, ky):
    """
    对每个点和 81 个有序对, 比较实际乘积与表中预测。
    返回 (9, 9) 的最大残差, 已除以 (1 + k_rho^4)。
    """
    kx = np.atleast_1d(np.asarray(kx, dtype=float))
    ky = np.atleast_1d(np.asarray(ky, dtype=float))
    k2 = kx * kx + ky * ky
    basis = basis_stack(kx, ky)

    actual = np.einsum('nuij,nvjk->nuvik', basis, basis)
    predicted = np.einsum('uvw,nwik->nuvik', C0, basis)
    predicted += k2[:, None, None, None, None] * np.einsum('uvw,nwik->nuvik', C1, basis)

    error = np.abs(actual - predicted).max(axis=(3, 4)) / (1.0 + k2 * k2)[:, None, None]
    return error.max(axis=0)


def selfcheck_points(count, seed=0, extent=3.0):
    rng = np.random.default_rng(seed)
    points = rng.uniform(-extent, extent, size=(count, 2))
    return points[:, 0], points[:, 1]


@functools.cache
def ensure_product_table(tolerance=1e-13):
    """只跑一次; 表和实际乘积不一致时抛 ProductTableError"""
    kx, ky = selfcheck_points(green_settings.SELFCHECK_POINTS)
    residuals = product_residuals(kx, ky)
    worst = float(residuals.max())
    if worst > tolerance:
        u, v = np.unravel_index(int(residuals.argmax()), residuals.shape)
        raise ProductTableError(f"product J{u + 1}*J{v + 1} disagrees with the table (residual {worst:.3e})")
    logger.debug("product table verified on %d points, max residual %.3e", kx.size, worst)
    return worst


def _block_matrix(blocks, k_rho_sq):
    """把 n x n 个 R0 块展开成 5n x 5n 的数值矩阵 (行: (i, p), 列: (j, q))"""
    n = blocks.shape[0]
    a1, a2, a3, a4, a5 = (blocks[..., l] for l in range(5))
    k = complex(k_rho_sq)
    zero = np.zeros((n, n), dtype=complex)
    rows = [
        [a1, zero, zero, zero, zero],
        [zero, a2, -k * a4, zero, zero],
        [zero, a3, a1 - k * a5, zero, zero],
        [a4, zero, zero, a2, -k * a4],
        [a5, zero, zero, a3, a1 - k * a5],
    ]
    # 分量优先排列, 之后转成 (块, 分量) 排列
    dense = np.block(rows)
    order = np.arange(5 * n).reshape(5, n).T.reshape(-1)
    return dense[np.ix_(order, order)]


def filtered_solve(blocks, rhs_blocks, k_rho_sq):
    """
    解 sum_j A_ij X_j = R_i, 其中 A_ij, R_i 都在 R0 中。

    只需要 J1..J5 的五个分量, 不必在完整 3n x 3n 矩阵上求解。
    blocks: (n, n) 个 BasisCoefficients 或 (n, n, 5) 数组; rhs_blocks: n 个。
    返回 n 个 restricted BasisCoefficients。
    """
    blocks = _as_restricted_array(blocks, ndim=2)
    rhs = _as_restricted_array(rhs_blocks, ndim=1)
    n = blocks.shape[0]
    if blocks.shape[:2] != (n, n) or rhs.shape[0] != n:
        raise ValueError(f"block system shapes do not match: {blocks.shape[:2]} vs {rhs.shape[0]}")

    matrix = _block_matrix(blocks, k_rho_sq)
    solution = np.linalg.solve(matrix, rhs.reshape(-1)).reshape(n, 5)
    return [BasisCoefficients(row, restricted=True) for row in solution]


def _as_restricted_array(items, ndim):
    if isinstance(items, np.ndarray) and items.dtype != object:
        return items.astype(complex)

    def values(item):
        if isinstance(item, BasisCoefficients):
            if not item.restricted:
                raise ValueError("filtered_solve expects restricted coefficients")
            return item.values[:5]
        return np.asarray(item, dtype=complex)[:5]

    if ndim == 1:
        return np.array([values(item) for item in items])
    return np.array([[values(item) for item in row] for row in items])
