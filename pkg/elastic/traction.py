"""
界面两侧的十个连续性标量。

在限制基下, 位移张量各行、牵引力 T_3l 各行按 J1..J5 展开后逐系数比较, 得到
T1..T10: (a) T1, T2 来自 T33; (b) T3, T4 来自 u3; (c) T5, T6, T7 来自 T31, T32;
(d) T8, T9, T10 来自 u1, u2。每个标量只含 A 组 (x1, x4, x5, v) 或只含
B 组 (x2, x3, u) 的未知量, 所以整个方程组拆成两个互不耦合的带状系统。
"""
import numpy as np

from stack.models import DOWN, TAU, UP, Phase
from stack.wavenumbers import vertical_wavenumber, wavenumbers
from .models import TractionScalars

GROUPS = {
    'A': (2, 4, 5, 7, 8, 10),
    'B': (1, 3, 6, 9),
}

UNKNOWN_GROUP = {
    'x1': 'A', 'x4': 'A', 'x5': 'A', 'v': 'A',
    'x2': 'B', 'x3': 'B', 'u': 'B', 'g': 'B',
}

_PHASE_ORDER = (Phase.SOLID, Phase.FLUID, Phase.VACUUM)

CONDITIONS = {
    (Phase.SOLID, Phase.SOLID): tuple(range(1, 11)),
    (Phase.SOLID, Phase.FLUID): tuple(range(1, 8)),
    (Phase.FLUID, Phase.FLUID): (1, 2, 3, 4),
    # 自由表面: 牵引力为零
    (Phase.SOLID, Phase.VACUUM): (1, 2, 5, 6, 7),
    (Phase.FLUID, Phase.VACUUM): (1, 2),
}


def interface_conditions(upper, lower, group=None):
    """两侧相态对应的条件编号, group 给定时只保留该组"""
    key = tuple(sorted((Phase(upper), Phase(lower)), key=_PHASE_ORDER.index))
    if key not in CONDITIONS:
        raise ValueError(f"no interface conditions between {upper} and {lower}")
    conditions = CONDITIONS[key]
    if group is not None:
        conditions = tuple(k for k in conditions if k in GROUPS[group])
    return conditions


def _column(entries):
    column = np.zeros(10, dtype=complex)
    for index, value in entries.items():
        column[index - 1] = value
    return column


def traction_columns(material, omega, k_rho, k_sz, k_cz, direction, es, ec):
    """
    未知量名 -> 该未知量对 T1..T10 的系数 (长度 10)。
    es, ec 是横波、纵波在该深度的相位因子。
    """
    tau = TAU[direction]
    k_rho_sq = k_rho ** 2
    c = tau * 1j * k_cz

    if material.phase == Phase.FLUID:
        w = omega ** 2 * material.rho
        u = _column({1: -w * ec, 3: c * ec, 9: ec})
        v = _column({2: -w * ec, 4: c * ec, 10: ec})
        return {'u': u, 'v': v, 'g': u}

    if material.phase != Phase.SOLID:
        return {}

    s = tau * 1j * k_sz
    mu = material.mu
    q = -material.lam * k_rho_sq - material.gamma * k_cz ** 2
    shear = mu * (k_sz ** 2 - k_rho_sq)
    return {
        'x1': _column({2: 2 * mu * s * es, 4: es, 5: mu * k_sz ** 2 * es, 7: mu * es, 8: -s * es}),
        'x2': _column({1: q * ec, 3: c * ec, 6: 2 * mu * c * ec, 9: ec}),
        'x3': _column({1: -2 * mu * s * k_rho_sq * es, 3: -k_rho_sq * es, 6: shear * es, 9: -s * es}),
        'x4': _column({2: q * ec, 4: c * ec, 7: 2 * mu * c * ec, 10: ec}),
        'x5': _column({2: -2 * mu * s * k_rho_sq * es, 4: -k_rho_sq * es, 7: shear * es, 10: -s * es}),
    }


def traction_matrix(material, omega, k_rho, k_sz, k_cz, direction, es, ec, layout):
    """(10, len(layout)), 列顺序同 layout"""
    if not layout:
        return np.zeros((10, 0), dtype=complex)
    columns = traction_columns(material, omega, k_rho, k_sz, k_cz, direction, es, ec)
    return np.column_stack([columns[name] for name in layout])


def vertical_pair(material, omega, k_rho):
    """(k_sz, k_cz); 流体 k_sz 为 nan"""
    pair = wavenumbers(material, omega)
    k_cz = vertical_wavenumber(pair.k_c, k_rho)
    k_sz = np.nan if pair.k_s is None else vertical_wavenumber(pair.k_s, k_rho)
    return k_sz, k_cz


def phase_factors(material, k_sz, k_cz, direction, z, reference):
    tau = TAU[direction]
    ec = np.exp(tau * 1j * k_cz * (z - reference))
    es = np.exp(tau * 1j * k_sz * (z - reference)) if material.phase == Phase.SOLID else 0j
    return es, ec


def traction_terms(coeffs, material, omega, k_rho, z):
    """(2, 10): 上行、下行两部分各自对 T1..T10 的贡献"""
    terms = np.zeros((2, 10), dtype=complex)
    if not coeffs.layout:
        return terms
    k_sz, k_cz = vertical_pair(material, omega, k_rho)
    for direction in (UP, DOWN):
        amplitudes = coeffs.amplitudes(direction)
        if not np.any(amplitudes):
            continue
        es, ec = phase_factors(material, k_sz, k_cz, direction, z, coeffs.references[direction])
        matrix = traction_matrix(material, omega, k_rho, k_sz, k_cz, direction, es, ec, coeffs.layout)
        terms[direction] = matrix @ amplitudes
    return terms


def traction_magnitudes(coeffs, material, omega, k_rho, z):
    """(10,): 每个 T 的逐项模之和, 两个方向合计; 用作相对残差的分母"""
    magnitudes = np.zeros(10)
    if not coeffs.layout:
        return magnitudes
    k_sz, k_cz = vertical_pair(material, omega, k_rho)
    for direction in (UP, DOWN):
        amplitudes = coeffs.amplitudes(direction)
        if not np.any(amplitudes):
            continue
        es, ec = phase_factors(material, k_sz, k_cz, direction, z, coeffs.references[direction])
        matrix = traction_matrix(material, omega, k_rho, k_sz, k_cz, direction, es, ec, coeffs.layout)
        magnitudes += np.abs(matrix) @ np.abs(amplitudes)
    return magnitudes


def evaluate_traction_scalars(coeffs, material, omega, k_rho, z):
    """T1..T10 在深度 z 处的值 (两个方向求和)"""
    return TractionScalars(tuple(traction_terms(coeffs, material, omega, k_rho, z).sum(axis=0)))


