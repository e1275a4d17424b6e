# maxwell/residuals.py
import logging

import numpy as np

from basis_algebra.models import SpectralPoint
from stack.models import DOWN, UP, InterfaceResidual, ResidualReport
from .assembly import assemble_GE, assemble_GH, b_profile, layer_terms
from .solver import solve_em_spectral

logger = logging.getLogger(__name__)

SCALAR_CHECKS = ('b1', 'dz_b1/mu', 'b2', 'dz_b2/eps', 'b3', 'dz_b3/eps')


def _relative(difference, scale):
    return float(difference / scale) if scale > 0 else 0.0


def _scalar_checks(sol, l, depth):
    checks = {}
    sides = []
    for t in (l, l + 1):
        value, dz = layer_terms(sol, t, depth)
        material = sol.stack.materials[t]
        # 每列: 自由项/上行/下行 的贡献
        sides.append(np.stack([
            value[:, 0], dz[:, 0] / material.mu,
            value[:, 1], dz[:, 1] / material.epsilon,
            value[:, 2], dz[:, 2] / material.epsilon,
        ]))
    above, below = sides
    for index, name in enumerate(SCALAR_CHECKS):
        difference = abs(above[index].sum() - below[index].sum())
        scale = np.abs(above[index]).sum() + np.abs(below[index]).sum()
        checks[name] = _relative(difference, scale)
    return checks


def _tensor_checks(sol, l, depth, point):
    upper, lower = sol.stack.materials[l], sol.stack.materials[l + 1]
    ge = [assemble_GE(sol, point, depth, layer=t).matrix for t in (l, l + 1)]
    gh = [assemble_GH(sol, point, depth, layer=t).matrix for t in (l, l + 1)]
    pairs = {
        'GE rows 1-2': (ge[0][:2], ge[1][:2]),
        'eps GE row 3': (upper.epsilon * ge[0][2], lower.epsilon * ge[1][2]),
        'GH rows 1-2': (gh[0][:2], gh[1][:2]),
        'mu GH row 3': (upper.mu * gh[0][2], lower.mu * gh[1][2]),
    }
    checks = {}
    for name, (a, b) in pairs.items():
        scale = max(np.abs(a).max(), np.abs(b).max())
        checks[name] = _relative(np.abs(a - b).max(), scale)
    return checks


def radiation_residual(sol):
    """最上层下行和最下层上行必须严格为 0"""
    return float(max(np.abs(sol.amplitudes[:, 0, DOWN]).max(), np.abs(sol.amplitudes[:, -1, UP]).max()))


def em_interface_residuals(sol, point=None):
    """
    每个界面两侧的连续性残差。
    给了谱点时, 额外检查 G_E / G_H 的切向行和法向行 (乘 eps / mu)。
    """
    results = []
    for l, depth in enumerate(sol.stack.interfaces):
        checks = _scalar_checks(sol, l, depth)
        if point is not None:
            checks.update(_tensor_checks(sol, l, depth, point))
        results.append(InterfaceResidual(interface=l, depth=depth, checks=checks))
    report = ResidualReport(interfaces=tuple(results), radiation=radiation_residual(sol))
    logger.debug("EM residuals k_rho=%.6g worst=%.3e", sol.k_rho, report.worst)
    return report


def b3_identity_residual(stack, omega, k_rho, z_source, z, *, step=None, loss=0.0):
    """
    解析的 b3 与 -d/dz' b2 的中心差分比较, 返回相对误差。
    step 缺省取源层波长的 1e-5。
    """
    base = solve_em_spectral(stack, omega, k_rho, z_source, loss=loss)
    if step is None:
        step = 1e-5 * 2 * np.pi / abs(base.k[base.source_layer])
    plus = solve_em_spectral(stack, omega, k_rho, z_source + step, loss=loss)
    minus = solve_em_spectral(stack, omega, k_rho, z_source - step, loss=loss)

    b3 = b_profile(base, z).value[2]
    finite_difference = -(b_profile(plus, z).value[1] - b_profile(minus, z).value[1]) / (2 * step)
    return _relative(abs(b3 - finite_difference), abs(b3))


def rotation_residual(stack, omega, k_rho, z_source, z, alphas, *, loss=0.0):
    """不同方位角下组装的系数差 (系数本身与方位角无关)"""
    sol = solve_em_spectral(stack, omega, k_rho, z_source, loss=loss)
    scaled = [assemble_GE(sol, SpectralPoint.from_polar(k_rho, a), z).scaled for a in alphas]
    reference = scaled[0]
    scale = np.abs(reference).max()
    return max((_relative(np.abs(s - reference).max(), scale) for s in scaled[1:]), default=0.0)
