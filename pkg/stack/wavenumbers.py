# stack/wavenumbers.py
import logging

import numpy as np

from core.conf import green_settings
from core.exceptions import OnInterface, VacuumHasNoWavenumber
from .models import ElasticWavenumbers, MaterialKind, ProblemKind, VerticalWavenumbers

logger = logging.getLogger(__name__)


def interface_tolerance(stack, rtol=None):
    if rtol is None:
        rtol = green_settings.INTERFACE_RTOL
    return rtol * stack.geometry_scale


def locate_layer(stack, z, *, rtol=None):
    """返回 t 使 d_{t-1} > z > d_t; 离界面太近抛 OnInterface"""
    tolerance = interface_tolerance(stack, rtol)
    for index, depth in enumerate(stack.interfaces):
        if abs(z - depth) <= tolerance:
            raise OnInterface(z, index)
    return sum(1 for depth in stack.interfaces if depth > z)


def wavenumbers(material, omega):
    """EM: k = omega sqrt(eps mu); 弹性: (k_s, k_c), 流体 k_s 为 None"""
    if material.kind == MaterialKind.VACUUM:
        raise VacuumHasNoWavenumber("vacuum layers carry no wavenumber")
    if material.kind == MaterialKind.EM:
        return omega * np.sqrt(complex(material.epsilon * material.mu))

    k_c = omega * np.sqrt(complex(material.rho / material.gamma))
    k_s = None if material.mu == 0 else omega * np.sqrt(complex(material.rho / material.mu))
    return ElasticWavenumbers(k_s=k_s, k_c=k_c)


def vertical_wavenumber(k, k_rho):
    """
    k_z = sqrt(k^2 - k_rho^2), Re >= 0; Re = 0 时取 Im >= 0。
    支持数组输入。
    """
    kz = np.sqrt(np.asarray(k, dtype=complex) ** 2 - np.asarray(k_rho, dtype=complex) ** 2)
    flip = (kz.real == 0) & (kz.imag < 0)
    kz = np.where(flip, -kz, kz)
    return kz[()] if kz.ndim == 0 else kz


def max_wavenumber(stack, omega):
    """各层 |k| 的最大值, 用作退化阈值和积分截断的尺度"""
    largest = 0.0
    for material in stack.materials:
        if material.kind == MaterialKind.VACUUM:
            continue
        k = wavenumbers(material, omega)
        if material.kind == MaterialKind.EM:
            largest = max(largest, abs(k))
        else:
            largest = max(largest, abs(k.k_c), abs(k.k_s) if k.k_s is not None else 0.0)
    return largest


def layer_wavenumbers(stack, omega, k_rho, loss=0.0):
    """打包各层的 k 与竖向波数; loss 非零时先对材料加极限吸收"""
    if loss:
        stack = stack.with_loss(loss)

    if stack.problem_kind == ProblemKind.MAXWELL:
        k = np.array([wavenumbers(m, omega) for m in stack.materials], dtype=complex)
        return VerticalWavenumbers(k_rho=k_rho, k=k, kz=vertical_wavenumber(k, k_rho))

    count = stack.layer_count
    k_s = np.full(count, np.nan, dtype=complex)
    k_c = np.full(count, np.nan, dtype=complex)
    for index, material in enumerate(stack.materials):
        if material.kind == MaterialKind.VACUUM:
            continue
        pair = wavenumbers(material, omega)
        k_c[index] = pair.k_c
        if pair.k_s is not None:
            k_s[index] = pair.k_s
    return VerticalWavenumbers(
        k_rho=k_rho, k_s=k_s, k_c=k_c,
        k_sz=vertical_wavenumber(k_s, k_rho), k_cz=vertical_wavenumber(k_c, k_rho),
    )


def reference_depths(interfaces):
    """
    每层上行/下行项的零相位深度: 上行取层的下边界, 下行取上边界,
    层内 |e^{+-i kz (z - r)}| <= 1。不存在的方向为 nan。
    """
    count = len(interfaces) + 1
    refs = np.full((count, 2), np.nan)
    for t in range(count):
        if t < count - 1:
            refs[t, 0] = interfaces[t]
        if t > 0:
            refs[t, 1] = interfaces[t - 1]
    return refs
