import logging

import numpy as np

from stack.models import InterfaceResidual, Phase, ResidualReport
from .assembly import active_coefficients, layer_scalars
from .models import SourceKind
from .traction import interface_conditions, traction_magnitudes, traction_terms

logger = logging.getLogger(__name__)

# 分母下限: 整个解里最大逐项模的这个比例; 两侧都趋于零的条件按整体量级衡量
SCALE_FLOOR = 1e-4


def _relative(difference, scale):
    return float(difference / scale) if scale > 0 else 0.0


def _side(sol, t, depth):
    """一侧 T1..T10 的值和逐项模之和; 真空一侧都为零"""
    values = np.zeros(10, dtype=complex)
    magnitudes = np.zeros(10)
    material = sol.stack.materials[t]
    if material.phase == Phase.VACUUM:
        return values, magnitudes
    _, groups = active_coefficients(sol, t, depth)
    for g in groups:
        values += traction_terms(g, material, sol.omega, sol.k_rho, depth).sum(axis=0)
        magnitudes += traction_magnitudes(g, material, sol.omega, sol.k_rho, depth)
    return values, magnitudes


def radiation_residual(sol):
    top, bottom = sol.layers[0], sol.layers[-1]
    values = np.concatenate([np.abs(top.down), np.abs(bottom.up), [0.0]])
    return float(values.max())


def elastic_interface_residuals(sol):
    """
    每个界面按两侧相态检查规定的那几个 T (向量源只查 B 组)。
    相对残差 = |sum(上侧) - sum(下侧)| / max(各项模之和, 下限)。
    """
    group = 'B' if sol.source_kind == SourceKind.VECTOR else None
    sides = [
        (_side(sol, l, depth), _side(sol, l + 1, depth)) for l, depth in enumerate(sol.stack.interfaces)
    ]
    floor = SCALE_FLOOR * max((m.max() for pair in sides for _, m in pair), default=0.0)

    results = []
    for l, depth in enumerate(sol.stack.interfaces):
        upper, lower = sol.stack.materials[l], sol.stack.materials[l + 1]
        (above, above_scale), (below, below_scale) = sides[l]
        checks = {}
        for k in interface_conditions(upper.phase, lower.phase, group):
            difference = abs(above[k - 1] - below[k - 1])
            scale = max(above_scale[k - 1] + below_scale[k - 1], floor)
            checks[f'T{k}'] = _relative(difference, scale)
        results.append(InterfaceResidual(interface=l, depth=depth, checks=checks))
    report = ResidualReport(interfaces=tuple(results), radiation=radiation_residual(sol))
    logger.debug("elastic residuals k_rho=%.6g worst=%.3e", sol.k_rho, report.worst)
    return report


def acoustic_identity_residuals(sol):
    """
    流体-流体界面上 [[p]] = 0 与 [[(1/rho) dz p]] = 0。
    p = T1 (向量源), (1/rho) dz p = -omega^2 u3 = -omega^2 G2。
    """
    if sol.source_kind != SourceKind.VECTOR:
        raise ValueError("acoustic identities are checked for scalar (vector) sources")
    results = []
    for l, depth in enumerate(sol.stack.interfaces):
        upper, lower = sol.stack.materials[l], sol.stack.materials[l + 1]
        if upper.phase != Phase.FLUID or lower.phase != Phase.FLUID:
            continue
        (above, above_scale), (below, below_scale) = _side(sol, l, depth), _side(sol, l + 1, depth)
        flux = [-sol.omega ** 2 * layer_scalars(sol, depth, layer=t)[1] for t in (l, l + 1)]
        checks = {
            'p': _relative(abs(above[0] - below[0]), above_scale[0] + below_scale[0]),
            'dz_p/rho': _relative(abs(flux[0] - flux[1]), abs(flux[0]) + abs(flux[1])),
        }
        results.append(InterfaceResidual(interface=l, depth=depth, checks=checks))
    return ResidualReport(interfaces=tuple(results))
