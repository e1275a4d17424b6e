# maxwell/solver.py
"""
b1 / b2 / b3 两标量问题的界面方程。

每层的未知量是上行和下行两个幅度, 最上层没有下行、最下层没有上行 (辐射条件),
所以 L 个界面正好给出 2L 个方程:

    [[b]] = 0,   [[w dz b]] = 0,   w = 1/mu (b1),  w = 1/eps (b2, b3)

源层的自由项只出现在源层上下两个界面的右端。b3 = -d/dz' b2 与 b2 共用矩阵。
"""
import logging

import numpy as np

from core.conf import green_settings
from core.exceptions import InvalidStack
from core.linalg import solve_interface_system
from stack.models import DOWN, TAU, UP
from stack.wavenumbers import layer_wavenumbers, locate_layer, reference_depths
from .free_space import check_branch, em_free_terms
from .models import EmSpectralSolution

logger = logging.getLogger(__name__)


def unknown_columns(count):
    """(层, 方向) -> 列号, 按层再按方向排列"""
    columns = {}
    for t in range(count):
        for direction in (UP, DOWN):
            if (t, direction) in ((0, DOWN), (count - 1, UP)):
                continue
            columns[(t, direction)] = len(columns)
    return columns


def interface_matrix(kz, weights, interfaces, refs, columns):
    n = len(columns)
    matrix = np.zeros((n, n), dtype=complex)
    for l, depth in enumerate(interfaces):
        # 界面上方是第 l 层 (+), 下方是第 l+1 层 (-)
        for t, sign in ((l, 1.0), (l + 1, -1.0)):
            for direction in (UP, DOWN):
                column = columns.get((t, direction))
                if column is None:
                    continue
                tau = TAU[direction]
                phase = np.exp(tau * 1j * kz[t] * (depth - refs[t, direction]))
                matrix[2 * l, column] += sign * phase
                matrix[2 * l + 1, column] += sign * weights[t] * tau * 1j * kz[t] * phase
    return matrix


def source_rhs(omega, kz, mu, interfaces, j, z_source, weights_by_b):
    """
    自由项在源层上下界面处的跳跃, 移到右端。
    返回 (2L, 3), 列对应 b1, b2, b3。
    """
    rhs = np.zeros((2 * len(interfaces), 3), dtype=complex)
    for l, sign in ((j - 1, -1.0), (j, 1.0)):
        if not 0 <= l < len(interfaces):
            continue
        value, dz = em_free_terms(omega, kz[j], mu[j], interfaces[l], z_source)
        rhs[2 * l] = -sign * value
        rhs[2 * l + 1] = -sign * weights_by_b * dz
    return rhs


def solve_em_spectral(stack, omega, k_rho, z_source, source_layer=None, *, loss=None, condition_limit=None):
    """
    求解一个谱点 k_rho 处的 b1, b2, b3 反射系数。

    b1 一个带状系统, b2 和 b3 共用另一个 (两列右端)。
    界面矩阵奇异 (导模极点) 时抛 SingularSystem。
    """
    if loss is None:
        loss = green_settings.LOSS
    if k_rho < 0:
        raise ValueError(f"k_rho must be nonnegative, got {k_rho}")

    j = locate_layer(stack, z_source)
    if source_layer is not None and source_layer != j:
        raise InvalidStack(f"source depth {z_source} lies in layer {j}, not {source_layer}")

    stack = stack.with_loss(loss)
    bundle = layer_wavenumbers(stack, omega, k_rho)
    k, kz = bundle.k, bundle.kz
    check_branch(k[j], kz[j])

    mu = np.array([m.mu for m in stack.materials], dtype=complex)
    epsilon = np.array([m.epsilon for m in stack.materials], dtype=complex)
    interfaces = stack.interfaces
    count = len(interfaces) + 1
    refs = reference_depths(interfaces)
    columns = unknown_columns(count)

    weights_j = np.array([1 / mu[j], 1 / epsilon[j], 1 / epsilon[j]])
    rhs = source_rhs(omega, kz, mu, interfaces, j, z_source, weights_j)

    te_matrix = interface_matrix(kz, 1 / mu, interfaces, refs, columns)
    tm_matrix = interface_matrix(kz, 1 / epsilon, interfaces, refs, columns)
    te, te_cond = solve_interface_system(te_matrix, rhs[:, 0], condition_limit=condition_limit, k_rho=k_rho, label='TE')
    tm, tm_cond = solve_interface_system(tm_matrix, rhs[:, 1:], condition_limit=condition_limit, k_rho=k_rho, label='TM')

    amplitudes = np.zeros((3, count, 2), dtype=complex)
    for (t, direction), column in columns.items():
        amplitudes[0, t, direction] = te[column]
        amplitudes[1, t, direction] = tm[column, 0]
        amplitudes[2, t, direction] = tm[column, 1]

    logger.debug("EM spectral solve k_rho=%.6g layers=%d cond=(%.2e, %.2e)", k_rho, count, te_cond, tm_cond)
    return EmSpectralSolution(
        stack=stack, omega=omega, k_rho=k_rho, z_source=z_source, source_layer=j,
        k=k, kz=kz, amplitudes=amplitudes, references=refs, condition=max(te_cond, tm_cond),
    )
