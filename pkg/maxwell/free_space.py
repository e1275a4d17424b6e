# maxwell/free_space.py
import numpy as np

from core.conf import green_settings
from core.exceptions import BranchPoint, CoincidentDepths
from stack.wavenumbers import vertical_wavenumber, wavenumbers


def free_space_scalar(kz, distance):
    """g^f = i e^{i kz |z - z'|} / (2 kz)"""
    return 1j * np.exp(1j * kz * abs(distance)) / (2 * kz)


def check_branch(k, kz, rtol=None):
    if rtol is None:
        rtol = green_settings.BRANCH_RTOL
    if abs(kz) <= rtol * abs(k):
        raise BranchPoint(f"vertical wavenumber {kz:.3e} is at the branch point of k={k:.6g}")


def check_coincident(z, z_source, rtol=None):
    if rtol is None:
        rtol = green_settings.INTERFACE_RTOL
    if abs(z - z_source) <= rtol * max(1.0, abs(z), abs(z_source)):
        raise CoincidentDepths(f"target depth {z!r} coincides with the source depth")


def em_free_terms(omega, kz, mu, z, z_source):
    """
    源层自由项 (b1f, b2f, b3f) 及其 z 导数。
    b1f = -g^f / (i omega), b2f = b1f / mu, b3f = -d/dz' b2f = d/dz b2f。
    """
    sigma = 1.0 if z > z_source else -1.0
    b1 = -np.exp(1j * kz * abs(z - z_source)) / (2 * omega * kz)
    b2 = b1 / mu
    b3 = 1j * kz * sigma * b2
    value = np.array([b1, b2, b3], dtype=complex)
    return value, 1j * kz * sigma * value


def em_free_space_b(omega, material, k_rho, z, z_source):
    """返回 (b1f, b2f, b3f)"""
    check_coincident(z, z_source)
    k = wavenumbers(material, omega)
    kz = vertical_wavenumber(k, k_rho)
    check_branch(k, kz)
    value, _ = em_free_terms(omega, kz, material.mu, z, z_source)
    return tuple(value)
