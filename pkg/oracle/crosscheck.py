"""生产求解器 vs 整张量参考解"""
import logging
from dataclasses import dataclass

import numpy as np

from basis_algebra.basis import decompose, decompose_vector
from core.conf import green_settings
from core.exceptions import SingularSystem
from elastic.assembly import assemble_G_elastic
from elastic.solver import solve_elastic_spectral
from maxwell.assembly import assemble_GE, assemble_GH
from maxwell.solver import solve_em_spectral
from .elastic import oracle_elastic_full, oracle_elastic_field
from .em import oracle_em_field, oracle_em_full

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CrossCheck:
    """最大相对误差与滤波残差 (I 类质量); skipped 时两者都是 0"""
    error: float = 0.0
    filtering: float = 0.0
    condition: float = 1.0
    skipped: bool = False


def _relative(a, b):
    scale = max(np.abs(a).max(), np.abs(b).max())
    return float(np.abs(a - b).max() / scale) if scale > 0 else 0.0


def _gated(condition, limit, point):
    if condition > limit:
        logger.warning("cross-check at k_rho=%.6g skipped: condition %.2e above %.2e", point.k_rho, condition, limit)
        return True
    return False


def em_cross_check(stack, omega, point, z_source, targets, *, loss=0.0, condition_limit=None):
    """targets: 深度列表; 比较 G_E, G_H, 并检查参考解各层各方向张量的 J6..J9 质量"""
    if condition_limit is None:
        condition_limit = green_settings.VALIDATION['ORACLE_CONDITION']
    try:
        production = solve_em_spectral(stack, omega, point.k_rho, z_source, loss=loss)
        reference = oracle_em_full(stack, omega, point, z_source, loss=loss)
    except SingularSystem as exc:
        logger.warning("cross-check at k_rho=%.6g skipped: %s", point.k_rho, exc)
        return CrossCheck(skipped=True, condition=np.inf)
    condition = max(production.condition, reference.condition)
    if _gated(condition, condition_limit, point):
        return CrossCheck(skipped=True, condition=condition)

    error = 0.0
    for z in targets:
        error = max(error, _relative(assemble_GE(production, point, z).matrix, oracle_em_field(reference, z, 'GE')))
        error = max(error, _relative(assemble_GH(production, point, z).matrix, oracle_em_field(reference, z, 'GH')))

    filtering = 0.0
    k_scale = production.k_scale
    for matrix in reference.unknowns.reshape(-1, 3, 3):
        if not np.any(matrix):
            continue
        coefficients = decompose(matrix, point, k_scale=k_scale)
        filtering = max(filtering, float(np.linalg.norm(coefficients.values[5:]) / coefficients.norm()))
    return CrossCheck(error=error, filtering=filtering, condition=condition)


def elastic_cross_check(stack, omega, point, z_source, targets, source_kind='tensor', *, loss=0.0,
                        condition_limit=None):
    if condition_limit is None:
        condition_limit = green_settings.VALIDATION['ORACLE_CONDITION']
    try:
        production = solve_elastic_spectral(stack, omega, point.k_rho, z_source, source_kind=source_kind, loss=loss)
        reference = oracle_elastic_full(stack, omega, point, z_source, source_kind=source_kind, loss=loss)
    except SingularSystem as exc:
        logger.warning("cross-check at k_rho=%.6g skipped: %s", point.k_rho, exc)
        return CrossCheck(skipped=True, condition=np.inf)
    condition = max(production.condition, reference.condition)
    if _gated(condition, condition_limit, point):
        return CrossCheck(skipped=True, condition=condition)

    vector = source_kind == 'vector'
    error, filtering = 0.0, 0.0
    k_scale = production.k_scale
    for z in targets:
        assembled = assemble_G_elastic(production, point, z)
        expected = oracle_elastic_field(reference, z)
        error = max(error, _relative(assembled.vector if vector else assembled.matrix, expected))
        if vector:
            coefficients = decompose_vector(expected, point, k_scale=k_scale)
            filtering = max(filtering, abs(coefficients.c7) / max(coefficients.norm(), 1e-300))
        else:
            coefficients = decompose(expected, point, k_scale=k_scale)
            filtering = max(filtering, float(np.linalg.norm(coefficients.values[5:]) / coefficients.norm()))
    return CrossCheck(error=error, filtering=filtering, condition=condition)
