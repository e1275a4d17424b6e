# elastic/solver.py
"""
弹性分层问题在一个谱点上的求解。

未知量按 层 -> 方向 -> 名称 排列, 方程按 界面 -> 条件编号 排列;
A 组 (T2, T4, T5, T7, T8, T10 / x1, x4, x5, v) 和 B 组 (T1, T3, T6, T9 / x2, x3, u)
各自是一个方阵, 分别做带状求解。向量源 (流体中的标量源) 只有 B 组。
"""
import logging

import numpy as np

from basis_algebra.basis import degenerate_threshold
from core.conf import green_settings
from core.exceptions import InvalidStack, PhaseMismatch, SystemShapeError
from core.linalg import solve_interface_system
from stack.models import DOWN, UP, Phase, ProblemKind
from stack.wavenumbers import layer_wavenumbers, locate_layer, max_wavenumber, reference_depths
from .free_space import free_coefficients
from .models import ElasticLayerCoefficients, ElasticSpectralSolution, SourceKind, layout_for
from .traction import UNKNOWN_GROUP, interface_conditions, phase_factors, traction_matrix, traction_terms

logger = logging.getLogger(__name__)

SOURCE_PHASE = {
    SourceKind.TENSOR: Phase.SOLID,
    SourceKind.VECTOR: Phase.FLUID,
}


def interface_columns(layouts, group):
    """[(层, 方向, layout 内下标)], 去掉辐射条件禁止的方向"""
    count = len(layouts)
    columns = []
    for t, layout in enumerate(layouts):
        for direction in (UP, DOWN):
            if (t, direction) in ((0, DOWN), (count - 1, UP)):
                continue
            columns.extend(
                (t, direction, index) for index, name in enumerate(layout) if UNKNOWN_GROUP[name] == group
            )
    return columns


def interface_rows(phases, group):
    """[(界面, 条件编号)]"""
    return [
        (l, k)
        for l in range(len(phases) - 1)
        for k in interface_conditions(phases[l], phases[l + 1], group)
    ]


def interface_matrix(stack, omega, k_rho, layouts, rows, columns):
    """
    rows x columns 的界面矩阵。
    界面 l 上: 第 l 层 (上方) 取 +, 第 l+1 层 (下方) 取 -。
    """
    bundle = layer_wavenumbers(stack, omega, k_rho)
    refs = np.nan_to_num(reference_depths(stack.interfaces))
    tables = {}

    def table(t, l, direction):
        key = (t, l, direction)
        if key not in tables:
            material = stack.materials[t]
            k_sz, k_cz = bundle.k_sz[t], bundle.k_cz[t]
            es, ec = phase_factors(material, k_sz, k_cz, direction, stack.interfaces[l], refs[t, direction])
            tables[key] = traction_matrix(material, omega, k_rho, k_sz, k_cz, direction, es, ec, layouts[t])
        return tables[key]

    matrix = np.zeros((len(rows), len(columns)), dtype=complex)
    for i, (l, k) in enumerate(rows):
        for j, (t, direction, index) in enumerate(columns):
            if t == l:
                matrix[i, j] = table(t, l, direction)[k - 1, index]
            elif t == l + 1:
                matrix[i, j] = -table(t, l, direction)[k - 1, index]
    return matrix


def source_terms(stack, omega, k_rho, z_source, j, layout):
    """界面号 -> 自由项在该界面的 T1..T10 (已带上该界面上源层的符号)"""
    material = stack.materials[j]
    terms = {}
    for l, sign in ((j - 1, -1.0), (j, 1.0)):
        if not 0 <= l < len(stack.interfaces):
            continue
        depth = stack.interfaces[l]
        free = free_coefficients(omega, material, k_rho, depth, z_source, layout)
        terms[l] = sign * traction_terms(free, material, omega, k_rho, depth).sum(axis=0)
    return terms


def solve_elastic_spectral(stack, omega, k_rho, z_source, source_layer=None, source_kind=SourceKind.TENSOR, *,
                           loss=None, condition_limit=None):
    """
    求解一个谱点上各层的反射系数。

    张量源 (点力) 必须在固体层, 向量源必须在流体层, 否则抛 PhaseMismatch。
    k_rho 低于退化阈值时按 k_rho = 0 求解。谱极点 (Rayleigh / Stoneley / Scholte)
    处抛 SingularSystem。
    """
    if loss is None:
        loss = green_settings.LOSS
    if k_rho < 0:
        raise ValueError(f"k_rho must be nonnegative, got {k_rho}")
    if stack.problem_kind != ProblemKind.ELASTIC:
        raise InvalidStack("elastic solver needs an elastic stack")
    source_kind = SourceKind(source_kind)

    j = locate_layer(stack, z_source)
    if source_layer is not None and source_layer != j:
        raise InvalidStack(f"source depth {z_source} lies in layer {j}, not {source_layer}")

    stack = stack.with_loss(loss)
    phases = [m.phase for m in stack.materials]
    if phases[j] != SOURCE_PHASE[source_kind]:
        raise PhaseMismatch(f"{source_kind.label} cannot sit in a {phases[j]} layer (layer {j})")

    k_scale = max_wavenumber(stack, omega)
    if 0 < k_rho <= degenerate_threshold(k_scale):
        logger.debug("k_rho=%.3e below degenerate threshold, solving at normal incidence", k_rho)
        k_rho = 0.0

    layouts = [layout_for(phase, source_kind) for phase in phases]
    free = source_terms(stack, omega, k_rho, z_source, j, layouts[j])
    refs = np.nan_to_num(reference_depths(stack.interfaces))
    amplitudes = [np.zeros((2, len(layout)), dtype=complex) for layout in layouts]

    groups = ('B',) if source_kind == SourceKind.VECTOR else ('A', 'B')
    condition = 1.0
    for group in groups:
        rows = interface_rows(phases, group)
        columns = interface_columns(layouts, group)
        if len(rows) != len(columns):
            raise SystemShapeError(
                f"group {group} has {len(rows)} interface equations for {len(columns)} unknowns"
            )
        matrix = interface_matrix(stack, omega, k_rho, layouts, rows, columns)
        rhs = np.array([-free[l][k - 1] if l in free else 0j for l, k in rows], dtype=complex)
        solution, cond = solve_interface_system(
            matrix, rhs, condition_limit=condition_limit, k_rho=k_rho, label=f'elastic group {group}',
        )
        condition = max(condition, cond)
        for (t, direction, index), value in zip(columns, solution):
            amplitudes[t][direction, index] = value

    layers = tuple(
        ElasticLayerCoefficients(
            phase=phases[t], layout=layouts[t], up=amplitudes[t][UP], down=amplitudes[t][DOWN],
            references=(float(refs[t, UP]), float(refs[t, DOWN])),
        )
        for t in range(len(layouts))
    )
    bundle = layer_wavenumbers(stack, omega, k_rho)
    logger.debug("elastic spectral solve k_rho=%.6g layers=%d cond=%.2e", k_rho, len(layers), condition)
    return ElasticSpectralSolution(
        stack=stack, omega=omega, k_rho=k_rho, z_source=z_source, source_layer=j, source_kind=source_kind,
        k_s=bundle.k_s, k_c=bundle.k_c, k_sz=bundle.k_sz, k_cz=bundle.k_cz, layers=layers, condition=condition,
    )
