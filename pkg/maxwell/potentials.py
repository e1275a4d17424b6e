# maxwell/potentials.py
"""
由 b 系数恢复向量位 G_A, 以及反过来由 G_A 求场。

横向位:       G_A = a1 J1 + a2 J2 + a5 J5
Sommerfeld 位: G_A = a1 J1 + a2 J2 + a4 J4

两种位都满足 G_E = -i omega (I + grad grad^T / k^2) G_A, G_H = (1/mu) curl G_A,
其中 grad grad^T = J5 + dz (J3 + J4) + dzz J2, curl = J6 + J7 - dz J9。
"""
from basis_algebra.basis import degenerate_threshold
from basis_algebra.models import BasisCoefficients
from basis_algebra.products import multiply_in_basis
from core.exceptions import DegenerateSpectralPoint
from .assembly import b_profile
from .free_space import check_branch
from .models import PotentialKind, PotentialProfile

J = {index: BasisCoefficients.unit(index) for index in range(1, 10)}


def _profile(sol, z, layer, need_kz):
    if sol.k_rho <= degenerate_threshold(sol.k_scale):
        raise DegenerateSpectralPoint(f"potentials carry 1/k_rho factors; k_rho={sol.k_rho:.3e} is degenerate")
    profile = b_profile(sol, z, layer=layer)
    if need_kz:
        check_branch(profile.k, profile.kz)
    return profile


def recover_transverse_potential(sol, z, *, layer=None):
    profile = _profile(sol, z, layer, need_kz=True)
    b1, b2, b3 = profile.value
    d1, d2, d3 = profile.dz
    mu, kz_sq, k_rho_sq = profile.mu, profile.kz ** 2, sol.k_rho ** 2

    a5 = (b1 + mu * d3 / kz_sq) / k_rho_sq
    # dz b3 的导数是 -kz^2 b3
    da5 = (d1 - mu * b3) / k_rho_sq
    value = BasisCoefficients.from_restricted(c1=b1, c2=mu * b2, c5=a5)
    dz = BasisCoefficients.from_restricted(c1=d1, c2=mu * d2, c5=da5)
    return PotentialProfile(PotentialKind.TRANSVERSE, value, dz, value * (-kz_sq))


def recover_sommerfeld_potential(sol, z, *, layer=None):
    profile = _profile(sol, z, layer, need_kz=False)
    b1, b2, b3 = profile.value
    d1, d2, d3 = profile.dz
    mu, kz_sq, k_rho_sq = profile.mu, profile.kz ** 2, sol.k_rho ** 2

    a4 = (mu * b3 - d1) / k_rho_sq
    da4 = (mu * d3 + kz_sq * b1) / k_rho_sq
    value = BasisCoefficients.from_restricted(c1=b1, c2=mu * b2, c4=a4)
    dz = BasisCoefficients.from_restricted(c1=d1, c2=mu * d2, c4=da4)
    return PotentialProfile(PotentialKind.SOMMERFELD, value, dz, value * (-kz_sq))


def field_from_potential(potential, omega, k_sq, k_rho_sq):
    """-i omega (A + grad grad^T A / k^2), 在基系数上做乘法"""
    grad_grad = (
        multiply_in_basis(J[5], potential.value, k_rho_sq)
        + multiply_in_basis(J[3] + J[4], potential.dz, k_rho_sq)
        + multiply_in_basis(J[2], potential.dzz, k_rho_sq)
    )
    return (potential.value + grad_grad * (1 / k_sq)) * (-1j * omega)


def magnetic_from_potential(potential, mu, k_rho_sq):
    """(1/mu) curl A"""
    curl = (
        multiply_in_basis(J[6] + J[7], potential.value, k_rho_sq)
        - multiply_in_basis(J[9], potential.dz, k_rho_sq)
    )
    return curl * (1 / mu)
