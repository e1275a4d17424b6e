# elastic/assembly.py
"""
由各层系数组装位移格林函数。

固体层: sum_* [(-s J1 + J4) e_s + (c J2 + J3) e_c] X*, s = tau i k_sz, c = tau i k_cz;
流体层: u (c J2 + J3) e_c + v (c J4 + J5) e_c。
乘开后只落在 J1..J5 上, 这里直接给出五个系数 G1..G5 (未缩放)。
"""
import numpy as np

from basis_algebra.basis import degenerate_threshold, realize_scaled, realize_scaled_vector, unscale_coefficients
from basis_algebra.models import AssembledTensor, AssembledVector, VectorBasisCoefficients
from core.exceptions import InvalidStack, PhaseMismatch
from maxwell.free_space import check_coincident
from stack.models import DOWN, TAU, UP, Phase
from stack.wavenumbers import locate_layer
from .free_space import free_coefficients
from .models import SourceKind
from .traction import phase_factors, traction_terms, vertical_pair


def displacement_scalars(coeffs, material, omega, k_rho, z):
    """G1..G5: 位移张量在 J1..J5 上的系数"""
    G = np.zeros(5, dtype=complex)
    if not coeffs.layout:
        return G
    k_sz, k_cz = vertical_pair(material, omega, k_rho)
    k_rho_sq = k_rho ** 2
    for direction in (UP, DOWN):
        x = coeffs.as_dict(direction)
        if not any(x.values()):
            continue
        tau = TAU[direction]
        es, ec = phase_factors(material, k_sz, k_cz, direction, z, coeffs.references[direction])
        c = tau * 1j * k_cz
        if material.phase == Phase.FLUID:
            u = x.get('u', x.get('g', 0j))
            v = x.get('v', 0j)
            G += [0, c * u * ec, u * ec, c * v * ec, v * ec]
            continue
        s = tau * 1j * k_sz
        x1, x2, x3, x4, x5 = (x.get(f'x{i}', 0j) for i in range(1, 6))
        G += [
            -s * x1 * es,
            -k_rho_sq * x3 * es + c * x2 * ec,
            -s * x3 * es + x2 * ec,
            (x1 - k_rho_sq * x5) * es + c * x4 * ec,
            -s * x5 * es + x4 * ec,
        ]
    return G


def active_coefficients(sol, t, z):
    """第 t 层在深度 z 处的所有系数组: 反射项, 以及源层的自由项"""
    material = sol.stack.materials[t]
    if material.phase == Phase.VACUUM:
        raise InvalidStack(f"layer {t} is vacuum and carries no displacement")
    groups = [sol.layers[t]]
    if t == sol.source_layer:
        check_coincident(z, sol.z_source)
        groups.append(free_coefficients(sol.omega, material, sol.k_rho, z, sol.z_source, sol.layers[t].layout))
    return material, groups


def layer_scalars(sol, z, *, layer=None):
    t = locate_layer(sol.stack, z) if layer is None else layer
    material, groups = active_coefficients(sol, t, z)
    return sum(displacement_scalars(g, material, sol.omega, sol.k_rho, z) for g in groups)


def _check_point(sol, point):
    tolerance = max(1e-10 * max(1.0, point.k_rho), degenerate_threshold(sol.k_scale))
    if abs(point.k_rho - sol.k_rho) > tolerance:
        raise ValueError(f"spectral point has k_rho={point.k_rho}, solution was computed at {sol.k_rho}")


def scaled_channels(sol, z, *, layer=None):
    """
    单位基上的缩放系数, 不组装矩阵: 张量源 (9,), 向量源 (j2, j^3, j^7) 三个。
    空域积分的每个节点只需要这一步。
    """
    G = layer_scalars(sol, z, layer=layer)
    k_rho = sol.k_rho
    if sol.source_kind == SourceKind.VECTOR:
        return np.array([G[1], G[2] * k_rho, 0j])
    scaled = np.zeros(9, dtype=complex)
    scaled[:5] = G * k_rho ** np.array([0, 0, 1, 1, 2])
    return scaled


def assemble_G_elastic(sol, point, z, *, layer=None):
    """
    张量源返回 AssembledTensor (3x3), 向量源返回 AssembledVector。
    系数在 k_rho 高于退化阈值时才给出。
    """
    _check_point(sol, point)
    scaled = scaled_channels(sol, z, layer=layer)
    k_rho = sol.k_rho
    nondegenerate = k_rho > degenerate_threshold(sol.k_scale)

    if sol.source_kind == SourceKind.VECTOR:
        coefficients = VectorBasisCoefficients(scaled[0], scaled[1] / k_rho, 0j) if nondegenerate else None
        return AssembledVector(
            vector=realize_scaled_vector(scaled, point.alpha), scaled=scaled, coefficients=coefficients,
        )

    coefficients = unscale_coefficients(scaled, k_rho, restricted=True) if nondegenerate else None
    return AssembledTensor(matrix=realize_scaled(scaled, point.alpha), scaled=scaled, coefficients=coefficients)


def fluid_pressure(sol, point, z, *, layer=None):
    """
    流体层中的压力 p = lambda div u。
    向量源返回标量; 张量源返回三个力方向各自产生的压力 (T2 u^T + T1 e3^T)。
    """
    _check_point(sol, point)
    t = locate_layer(sol.stack, z) if layer is None else layer
    material = sol.stack.materials[t]
    if material.phase != Phase.FLUID:
        raise PhaseMismatch(f"pressure is defined in fluid layers, layer {t} is {material.phase}")
    _, groups = active_coefficients(sol, t, z)
    T = sum(traction_terms(g, material, sol.omega, sol.k_rho, z).sum(axis=0) for g in groups)
    if sol.source_kind == SourceKind.VECTOR:
        return complex(T[0])
    return np.array([1j * point.kx * T[1], 1j * point.ky * T[1], T[0]], dtype=complex)
