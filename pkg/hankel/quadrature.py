"""
二维 Fourier 逆变换的径向部分:

    (1/2pi) int_0^inf f(k_rho) J_n(k_rho rho) k_rho dk_rho

实轴上积分 (损耗把支点推离实轴), 用 scipy.integrate.quad_vec 做自适应
Gauss-Kronrod; 截断之后按同样长度的段继续往外积, 直到一段的贡献低于容差。
"""
import logging

import numpy as np
from scipy import integrate, special

from core.exceptions import NonConvergent
from .models import check_radial

logger = logging.getLogger(__name__)


def _as_real(function):
    """复值向量函数 -> 实值 (实部, 虚部拼接), quad_vec 只按实数处理误差范数"""
    def wrapped(k_rho):
        value = np.atleast_1d(np.asarray(function(k_rho), dtype=complex))
        return np.concatenate([value.real.ravel(), value.imag.ravel()])
    return wrapped


def _to_complex(values, shape):
    half = values.size // 2
    return (values[:half] + 1j * values[half:]).reshape(shape)


def integrate_channels(function, truncation, *, rtol, panels, breakpoints=(), max_tail_segments=64):
    """
    int_0^inf function(k) dk, function 返回复数组。
    [0, truncation] 分 panels 段, 之后每段长 truncation。
    尾段在 max_tail_segments 段内没有收敛时抛 NonConvergent。
    """
    sample = np.asarray(function(0.5 * truncation / panels), dtype=complex)
    shape = sample.shape
    real = _as_real(function)

    points = set(np.linspace(0.0, truncation, panels + 1)[1:-1].tolist())
    points.update(float(b) for b in breakpoints if 0 < b < truncation)
    total, _ = integrate.quad_vec(real, 0.0, truncation, epsrel=rtol / 10, norm='max', points=sorted(points))

    segment = truncation
    for _ in range(max_tail_segments):
        tail, _ = integrate.quad_vec(real, segment, segment + truncation, epsrel=rtol / 10, norm='max')
        total = total + tail
        segment += truncation
        size, reference = np.abs(tail).max(), np.abs(total).max()
        if size <= rtol * reference or size == 0:
            logger.debug("radial integral converged at k_rho=%.6g", segment)
            return _to_complex(total, shape)
    raise NonConvergent(
        f"radial integral did not converge by k_rho={segment:.6g}",
        estimate=float(size / reference) if reference else np.inf,
    )


def inverse_radial_transform(integrand, spec):
    """(1/2pi) int f(k_rho) J_n(k_rho rho) k_rho dk_rho; 阶数不是 0..2 的整数或半径为负时抛 ValueError"""
    order, rho = integrand.order, integrand.rho
    check_radial(order, rho)
    if rho == 0 and order > 0:
        return 0j

    def kernel(k_rho):
        return np.asarray(integrand.function(k_rho)) * special.jv(order, k_rho * rho) * k_rho / (2 * np.pi)

    result = integrate_channels(
        kernel, spec.resolve_truncation(integrand.k_scale), rtol=spec.rtol, panels=spec.panels,
        breakpoints=integrand.breakpoints, max_tail_segments=spec.max_tail_segments,
    )
    return complex(result.reshape(-1)[0]) if result.size == 1 else result
