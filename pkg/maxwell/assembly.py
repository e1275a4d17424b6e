# maxwell/assembly.py
"""
由 b 系数组装 G_E, G_H。

系数先在单位基上给出 (c^_l = c_l k_rho^deg), 这样 k_rho -> 0 时没有 1/k_rho^2;
J5 / J8 两个通道在 k_rho < SERIES_CUTOFF |k| 时取其极限 0。
"""
import numpy as np

from basis_algebra.basis import degenerate_threshold, realize_scaled, unscale_coefficients
from basis_algebra.models import AssembledTensor
from core.conf import green_settings
from stack.models import DOWN, TAU, UP
from stack.wavenumbers import locate_layer
from .free_space import check_coincident, em_free_terms
from .models import BProfile, FieldKind


def layer_terms(sol, t, z):
    """
    第 t 层表达式在深度 z 的各项贡献: (自由项, 上行, 下行) x (b1, b2, b3)。
    返回 (value, dz), 形状都是 (3, 3)。
    """
    value = np.zeros((3, 3), dtype=complex)
    dz = np.zeros((3, 3), dtype=complex)
    kz = sol.kz[t]
    if t == sol.source_layer:
        check_coincident(z, sol.z_source)
        value[0], dz[0] = em_free_terms(sol.omega, kz, sol.stack.materials[t].mu, z, sol.z_source)
    for direction in (UP, DOWN):
        amplitudes = sol.amplitudes[:, t, direction]
        if not np.any(amplitudes):
            continue
        tau = TAU[direction]
        phase = np.exp(tau * 1j * kz * (z - sol.references[t, direction]))
        value[1 + direction] = amplitudes * phase
        dz[1 + direction] = tau * 1j * kz * value[1 + direction]
    return value, dz


def b_profile(sol, z, *, layer=None):
    """
    深度 z 处的 b1, b2, b3 和 dz b。
    layer 给定时按该层的表达式求值 (用于界面两侧的极限)。
    """
    t = locate_layer(sol.stack, z) if layer is None else layer
    value, dz = layer_terms(sol, t, z)
    material = sol.stack.materials[t]
    return BProfile(
        layer=t, z=z, k=sol.k[t], kz=sol.kz[t], mu=material.mu, epsilon=material.epsilon,
        value=value.sum(axis=0), dz=dz.sum(axis=0),
    )


def ge_scaled(profile, omega, k_rho, series=False):
    b1, b2, b3 = profile.value
    d1, d2, d3 = profile.dz
    k_sq = profile.k ** 2
    mu = profile.mu
    prefactor = -1j * omega / k_sq

    scaled = np.zeros(9, dtype=complex)
    scaled[0] = prefactor * k_sq * b1
    scaled[1] = prefactor * mu * k_rho ** 2 * b2
    scaled[2] = prefactor * mu * d2 * k_rho
    scaled[3] = prefactor * mu * b3 * k_rho
    if not series:
        scaled[4] = prefactor * (k_sq * b1 + mu * d3)
    return scaled


def gh_scaled(profile, k_rho, series=False):
    b1, b2, b3 = profile.value
    d1 = profile.dz[0]
    mu = profile.mu

    scaled = np.zeros(9, dtype=complex)
    scaled[5] = b1 * k_rho / mu
    scaled[6] = b2 * k_rho
    if not series:
        scaled[7] = (d1 - mu * b3) / mu
    scaled[8] = -d1 / mu
    return scaled


def _check_point(sol, point):
    if abs(point.k_rho - sol.k_rho) > 1e-10 * max(1.0, sol.k_rho):
        raise ValueError(f"spectral point has k_rho={point.k_rho}, solution was computed at {sol.k_rho}")


def scaled_channels(sol, z, which=FieldKind.GE, *, layer=None):
    """单位基上的 9 个缩放系数, 不组装矩阵"""
    profile = b_profile(sol, z, layer=layer)
    series = sol.k_rho < green_settings.SERIES_CUTOFF * sol.k_scale
    if which == FieldKind.GE:
        return ge_scaled(profile, sol.omega, sol.k_rho, series)
    if which == FieldKind.GH:
        return gh_scaled(profile, sol.k_rho, series)
    raise ValueError(f"unknown field kind {which!r}")


def assemble(sol, point, z, which=FieldKind.GE, *, layer=None):
    _check_point(sol, point)
    scaled = scaled_channels(sol, z, which, layer=layer)
    coefficients = None
    if sol.k_rho > degenerate_threshold(sol.k_scale):
        coefficients = unscale_coefficients(scaled, sol.k_rho, restricted=which == FieldKind.GE)
    return AssembledTensor(matrix=realize_scaled(scaled, point.alpha), scaled=scaled, coefficients=coefficients)


def assemble_GE(sol, point, z, *, layer=None):
    return assemble(sol, point, z, FieldKind.GE, layer=layer)


def assemble_GH(sol, point, z, *, layer=None):
    return assemble(sol, point, z, FieldKind.GH, layer=layer)
