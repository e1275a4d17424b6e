"""
电磁整张量参考解。

每层每个方向的反射场是一个 3x3 矩阵 E, 逐列满足 n . e = 0;
界面条件直接按分量写: E 的 1、2 行连续, eps E 的第 3 行连续,
H = -[n]x E / (i w mu) 的 1、2 行连续, mu H 的第 3 行连续。
不经过任何基分解, 三列共用一个矩阵。
"""
import numpy as np

from core.conf import green_settings
from core.exceptions import InvalidStack
from stack.models import ProblemKind
from stack.wavenumbers import locate_layer, vertical_wavenumber, wavenumbers
from .closed_form import cross_matrix, spectral_free_GE, spectral_free_GH
from .dense import solve_dense
from .models import FullTensorSolution

_DIRECTIONS = ((0, 1), (1, -1))


def _references(interfaces):
    count = len(interfaces) + 1
    refs = np.zeros((count, 2))
    for t in range(count):
        refs[t, 0] = interfaces[t] if t < count - 1 else 0.0
        refs[t, 1] = interfaces[t - 1] if t > 0 else 0.0
    return refs


def _unknown_blocks(count):
    blocks = {}
    for t in range(count):
        for direction, _ in _DIRECTIONS:
            if (t, direction) in ((0, 1), (count - 1, 0)):
                continue
            blocks[(t, direction)] = 3 * len(blocks)
    return blocks


def _wavevector(point, kz, tau):
    return np.array([1j * point.kx, 1j * point.ky, tau * 1j * kz])


def _field_rows(material, omega, n):
    """作用在 e 上, 给出 6 个连续量: E1, E2, eps E3, H1, H2, mu H3"""
    magnetic = -cross_matrix(n) / (1j * omega * material.mu)
    rows = np.vstack([np.eye(3), magnetic])
    rows[2] *= material.epsilon
    rows[5] *= material.mu
    return rows


def oracle_em_full(stack, omega, point, z_source, source_layer=None, *, loss=None, condition_limit=None):
    if stack.problem_kind != ProblemKind.MAXWELL:
        raise InvalidStack("EM oracle needs a Maxwell stack")
    if loss is None:
        loss = green_settings.LOSS
    j = locate_layer(stack, z_source)
    if source_layer is not None and source_layer != j:
        raise InvalidStack(f"source depth {z_source} lies in layer {j}, not {source_layer}")
    stack = stack.with_loss(loss)

    materials = stack.materials
    count = len(materials)
    kz = [vertical_wavenumber(wavenumbers(m, omega), point.k_rho) for m in materials]
    refs = _references(stack.interfaces)
    blocks = _unknown_blocks(count)
    size = 3 * len(blocks)

    equations, rhs = [], []
    for l, depth in enumerate(stack.interfaces):
        rows = np.zeros((6, size), dtype=complex)
        for t, sign in ((l, 1.0), (l + 1, -1.0)):
            for direction, tau in _DIRECTIONS:
                start = blocks.get((t, direction))
                if start is None:
                    continue
                n = _wavevector(point, kz[t], tau)
                phase = np.exp(tau * 1j * kz[t] * (depth - refs[t, direction]))
                rows[:, start:start + 3] += sign * phase * _field_rows(materials[t], omega, n)
        right = np.zeros((6, 3), dtype=complex)
        if j in (l, l + 1):
            sign = 1.0 if j == l else -1.0
            material = materials[j]
            ge = spectral_free_GE(omega, material, point, depth, z_source)
            gh = spectral_free_GH(omega, material, point, depth, z_source)
            free = np.vstack([ge, gh])
            free[2] *= material.epsilon
            free[5] *= material.mu
            right = -sign * free
        equations.append(rows)
        rhs.append(right)

    # 每个平面波分量无散
    for (t, direction), start in blocks.items():
        row = np.zeros((1, size), dtype=complex)
        row[0, start:start + 3] = _wavevector(point, kz[t], (1, -1)[direction])
        equations.append(row)
        rhs.append(np.zeros((1, 3), dtype=complex))

    matrix = np.vstack(equations) if equations else np.zeros((0, size), dtype=complex)
    right = np.vstack(rhs) if rhs else np.zeros((0, 3), dtype=complex)
    solution, cond = solve_dense(matrix, right, condition_limit=condition_limit, k_rho=point.k_rho, label='EM oracle')

    unknowns = np.zeros((count, 2, 3, 3), dtype=complex)
    for (t, direction), start in blocks.items():
        unknowns[t, direction] = solution[start:start + 3]
    return FullTensorSolution(
        stack=stack, omega=omega, point=point, z_source=z_source, source_layer=j,
        unknowns=unknowns, references=refs, condition=cond, source_kind='em',
    )


def oracle_em_field(sol, z, which='GE', *, layer=None):
    """参考解在深度 z 的 G_E 或 G_H"""
    t = locate_layer(sol.stack, z) if layer is None else layer
    material = sol.stack.materials[t]
    kz = vertical_wavenumber(wavenumbers(material, sol.omega), sol.point.k_rho)
    total = np.zeros((3, 3), dtype=complex)
    if t == sol.source_layer:
        free = spectral_free_GE if which == 'GE' else spectral_free_GH
        total += free(sol.omega, material, sol.point, z, sol.z_source)
    for direction, tau in _DIRECTIONS:
        if not np.any(sol.unknowns[t, direction]):
            continue
        e = sol.unknowns[t, direction] * np.exp(tau * 1j * kz * (z - sol.references[t, direction]))
        if which == 'GE':
            total += e
        else:
            total += -cross_matrix(_wavevector(sol.point, kz, tau)) @ e / (1j * sol.omega * material.mu)
    return total
