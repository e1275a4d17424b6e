import numpy as np

from core.exceptions import PhaseMismatch
from maxwell.free_space import check_branch
from stack.models import DOWN, TAU, UP, Phase
from stack.wavenumbers import vertical_wavenumber, wavenumbers
from .models import ElasticLayerCoefficients, FreeSpaceCoefficients


def elastic_free_space_coeffs(omega, material, k_rho, direction):
    """
    固体中点力的自由项系数 x1..x5 (direction 方向, 参考深度为源深度)。

    与闭式谱域并矢 (1/w^2 rho)[(ks^2 I + ns ns^T) g_s - nc nc^T g_c] 逐项对照得
    x1 = tau ks^2 Ds, x2 = -tau kcz^2 Dc, x3 = i ksz Ds, x4 = i kcz Dc, x5 = tau Ds。
    """
    if material.phase != Phase.SOLID:
        raise PhaseMismatch(f"point-force free term needs a solid layer, got {material.phase}")
    pair = wavenumbers(material, omega)
    k_sz = vertical_wavenumber(pair.k_s, k_rho)
    k_cz = vertical_wavenumber(pair.k_c, k_rho)
    check_branch(pair.k_s, k_sz)
    check_branch(pair.k_c, k_cz)

    tau = TAU[direction]
    scale = omega ** 2 * material.rho
    d_s = -1 / (2 * scale * k_sz ** 2)
    d_c = -1 / (2 * scale * k_cz ** 2)
    x = np.array([
        tau * pair.k_s ** 2 * d_s,
        -tau * k_cz ** 2 * d_c,
        1j * k_sz * d_s,
        1j * k_cz * d_c,
        tau * d_s,
    ], dtype=complex)
    return FreeSpaceCoefficients(d_s=d_s, d_c=d_c, x=x)


def fluid_free_space_coeff(omega, material, k_rho):
    """流体中标量源的自由项 g = i / (2 w^2 rho kcz), 两个方向相同"""
    if material.phase != Phase.FLUID:
        raise PhaseMismatch(f"scalar-source free term needs a fluid layer, got {material.phase}")
    k_c = wavenumbers(material, omega).k_c
    k_cz = vertical_wavenumber(k_c, k_rho)
    check_branch(k_c, k_cz)
    return 1j / (2 * omega ** 2 * material.rho * k_cz)


def free_amplitudes(omega, material, k_rho, direction, layout):
    """按 layout 排列的自由项系数"""
    if material.phase == Phase.FLUID:
        return np.array([fluid_free_space_coeff(omega, material, k_rho)], dtype=complex)
    x = elastic_free_space_coeffs(omega, material, k_rho, direction).x
    return np.array([x[int(name[1]) - 1] for name in layout], dtype=complex)


def free_coefficients(omega, material, k_rho, z, z_source, layout):
    """源层自由项在深度 z 处生效的那一半 (z > z' 上行, 否则下行)"""
    direction = UP if z > z_source else DOWN
    values = free_amplitudes(omega, material, k_rho, direction, layout)
    empty = np.zeros(len(layout), dtype=complex)
    up, down = (values, empty) if direction == UP else (empty, values)
    return ElasticLayerCoefficients(
        phase=material.phase, layout=layout, up=up, down=down, references=(z_source, z_source),
    )
