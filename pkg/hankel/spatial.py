"""
空域格林函数: 对谱域解做二维逆 Fourier 变换。

每个积分节点 k_rho 只做一次谱域求解, 所有目标点共用; 目标点按深度分组组装,
然后乘上 J0/J1/J2(k_rho rho) 一起交给 quad_vec。
"""
import logging

import numpy as np
from scipy import special

from elastic.assembly import scaled_channels as elastic_channels
from elastic.models import SourceKind
from elastic.solver import solve_elastic_spectral
from maxwell.assembly import scaled_channels as em_channels
from maxwell.solver import solve_em_spectral
from stack.models import MaterialKind, ProblemKind
from stack.wavenumbers import max_wavenumber, wavenumbers
from .channels import combine
from .models import GreenKind, QuadratureSpec
from .quadrature import integrate_channels

logger = logging.getLogger(__name__)


def branch_points(stack, omega):
    """各层 Re k (弹性取 k_s 与 k_c), 作为积分区间的断点"""
    points = set()
    for material in stack.materials:
        if material.kind == MaterialKind.VACUUM:
            continue
        k = wavenumbers(material, omega)
        if material.kind == MaterialKind.EM:
            points.add(abs(k))
        else:
            points.update(abs(v) for v in (k.k_s, k.k_c) if v is not None)
    return tuple(sorted(points))


def _check_kind(stack, which, source_kind):
    which = GreenKind(which)
    if (which == GreenKind.ELASTIC) != (stack.problem_kind == ProblemKind.ELASTIC):
        raise ValueError(f"{which.label} cannot be computed on a {stack.problem_kind} stack")
    return which, which == GreenKind.ELASTIC and SourceKind(source_kind) == SourceKind.VECTOR


def spectral_channels(stack, omega, k_rho, z_source, depths, which, source_kind, loss):
    """(len(depths), m) 的单位基系数 c^_l, 张量 m = 9, 向量 m = 3"""
    if which == GreenKind.ELASTIC:
        sol = solve_elastic_spectral(stack, omega, k_rho, z_source, source_kind=source_kind, loss=loss)
        return np.array([elastic_channels(sol, z) for z in depths])
    sol = solve_em_spectral(stack, omega, k_rho, z_source, loss=loss)
    return np.array([em_channels(sol, z, which) for z in depths])


def spatial_green_batch(stack, omega, source, targets, which=GreenKind.GE, spec=None, *,
                        source_kind=SourceKind.TENSOR):
    """
    source 为 (x', y', z'), targets 为 (n, 3)。
    张量返回 (n, 3, 3), 流体向量源返回 (n, 3)。
    目标与源同深度时积分不收敛, 抛 NonConvergent; 同层同深度在组装时抛 CoincidentDepths。
    """
    which, vector = _check_kind(stack, which, source_kind)
    spec = spec or QuadratureSpec.from_settings()
    source = np.asarray(source, dtype=float)
    targets = np.atleast_2d(np.asarray(targets, dtype=float))

    offsets = targets[:, :2] - source[:2]
    rho = np.hypot(offsets[:, 0], offsets[:, 1])
    phi = np.arctan2(offsets[:, 1], offsets[:, 0])
    depths, depth_index = np.unique(targets[:, 2], return_inverse=True)

    def integrand(k_rho):
        channels = spectral_channels(stack, omega, k_rho, source[2], depths, which, source_kind, spec.loss)
        bessel = special.jv(np.arange(3), (k_rho * rho)[:, None])
        return channels[depth_index][:, :, None] * bessel[:, None, :] * (k_rho / (2 * np.pi))

    k_scale = max_wavenumber(stack, omega)
    radial = integrate_channels(
        integrand, spec.resolve_truncation(k_scale), rtol=spec.rtol, panels=spec.panels,
        breakpoints=branch_points(stack, omega), max_tail_segments=spec.max_tail_segments,
    )
    logger.info("spatial %s: %d targets, k_scale=%.6g", which, len(targets), k_scale)
    return np.array([combine(radial[n], phi[n], vector=vector) for n in range(len(targets))])


def spatial_green(stack, omega, source, target, which=GreenKind.GE, spec=None, *, source_kind=SourceKind.TENSOR):
    return spatial_green_batch(stack, omega, source, [target], which, spec, source_kind=source_kind)[0]
