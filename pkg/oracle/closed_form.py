# oracle/closed_form.py
"""
均匀无界介质中格林函数的闭式表达, 谱域和空域各一套。

谱域约定: g^(kx, ky; z) = i e^{i kz |z - z'|} / (2 kz), 与空域
g(r) = e^{i k R} / (4 pi R) 通过 (1/4pi^2) 的二维 Fourier 逆变换对应。
"""
import numpy as np

from stack.wavenumbers import vertical_wavenumber, wavenumbers


def cross_matrix(n):
    """[n]x, 满足 [n]x v = n x v"""
    return np.array([
        [0, -n[2], n[1]],
        [n[2], 0, -n[0]],
        [-n[1], n[0], 0],
    ], dtype=complex)


def _spectral_scalar(k, point, z, z_source):
    kz = vertical_wavenumber(k, point.k_rho)
    sigma = 1.0 if z > z_source else -1.0
    g = 1j * np.exp(1j * kz * abs(z - z_source)) / (2 * kz)
    n = np.array([1j * point.kx, 1j * point.ky, 1j * kz * sigma])
    return g, n


def spectral_free_GE(omega, material, point, z, z_source):
    """(I + n n^T / k^2) g^, n = (i kx, i ky, +-i kz)"""
    k = wavenumbers(material, omega)
    g, n = _spectral_scalar(k, point, z, z_source)
    return (np.eye(3) + np.outer(n, n) / k ** 2) * g


def spectral_free_GH(omega, material, point, z, z_source):
    """-(1/(i omega mu)) [n]x g^"""
    k = wavenumbers(material, omega)
    g, n = _spectral_scalar(k, point, z, z_source)
    return -cross_matrix(n) * g / (1j * omega * material.mu)


def spectral_free_elastic_parts(omega, material, point, z, z_source):
    """
    自由项拆成横波和纵波两个平面波: 返回 (S, P, ns, nc),
    S = (ks^2 I + ns ns^T) g^_s / (w^2 rho), P = -nc nc^T g^_c / (w^2 rho)。
    """
    pair = wavenumbers(material, omega)
    gs, ns = _spectral_scalar(pair.k_s, point, z, z_source)
    gc, nc = _spectral_scalar(pair.k_c, point, z, z_source)
    scale = omega ** 2 * material.rho
    shear = (pair.k_s ** 2 * np.eye(3) + np.outer(ns, ns)) * gs / scale
    pressure = -np.outer(nc, nc) * gc / scale
    return shear, pressure, ns, nc


def spectral_free_elastic(omega, material, point, z, z_source):
    """(1/omega^2 rho) [(ks^2 I + ns ns^T) g^_s - nc nc^T g^_c]"""
    shear, pressure, _, _ = spectral_free_elastic_parts(omega, material, point, z, z_source)
    return shear + pressure


def spectral_free_fluid(omega, material, point, z, z_source):
    """流体中标量源的位移 (1/omega^2 rho) n_c g^_c"""
    pair = wavenumbers(material, omega)
    gc, nc = _spectral_scalar(pair.k_c, point, z, z_source)
    return nc * gc / (omega ** 2 * material.rho)


def spectral_wavevector(k, point, z, z_source):
    """(i kx, i ky, +-i kz), 符号随 z 在源的哪一侧"""
    return _spectral_scalar(k, point, z, z_source)[1]


def helmholtz_green(k, r):
    return np.exp(1j * k * r) / (4 * np.pi * r)


def _offset(source, target):
    offset = np.asarray(target, dtype=float) - np.asarray(source, dtype=float)
    distance = float(np.linalg.norm(offset))
    if distance == 0:
        raise ValueError("source and target coincide")
    return offset / distance, distance


def hessian_green(k, source, target):
    """grad grad g"""
    unit, r = _offset(source, target)
    g = helmholtz_green(k, r)
    radial = -k ** 2 - 3j * k / r + 3 / r ** 2
    return g * (radial * np.outer(unit, unit) + (1j * k / r - 1 / r ** 2) * np.eye(3))


def gradient_green(k, source, target):
    unit, r = _offset(source, target)
    return helmholtz_green(k, r) * (1j * k - 1 / r) * unit


def spatial_free_GE(omega, material, source, target):
    k = wavenumbers(material, omega)
    _, r = _offset(source, target)
    return np.eye(3) * helmholtz_green(k, r) + hessian_green(k, source, target) / k ** 2


def spatial_free_GH(omega, material, source, target):
    k = wavenumbers(material, omega)
    return -cross_matrix(gradient_green(k, source, target)) / (1j * omega * material.mu)


def spatial_free_elastic(omega, material, source, target):
    """(1/omega^2 rho) [ks^2 g_s I + grad grad (g_s - g_c)]"""
    pair = wavenumbers(material, omega)
    _, r = _offset(source, target)
    tensor = pair.k_s ** 2 * helmholtz_green(pair.k_s, r) * np.eye(3)
    tensor = tensor + hessian_green(pair.k_s, source, target) - hessian_green(pair.k_c, source, target)
    return tensor / (omega ** 2 * material.rho)


def spatial_free_fluid(omega, material, source, target):
    pair = wavenumbers(material, omega)
    return gradient_green(pair.k_c, source, target) / (omega ** 2 * material.rho)
