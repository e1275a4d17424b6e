"""
弹性整张量参考解。

固体层每个方向: u = (M_s e_s + M_c e_c) x, M_s 的两列是两个横波极化
(-s, 0, i kx), (0, -s, i ky), M_c 的第三列是纵波方向 n_c;
流体层每个方向: u = a e_c, a 是任意 3 维向量, 另加无旋和声波方程两组约束行。
界面条件按分量写 (位移 u, 牵引力 t = sigma e3), 不用 T1..T10。
"""
import numpy as np

from core.conf import green_settings
from core.exceptions import InvalidStack, PhaseMismatch
from stack.models import Phase, ProblemKind
from stack.wavenumbers import locate_layer, vertical_wavenumber, wavenumbers
from .closed_form import cross_matrix, spectral_free_elastic_parts, spectral_free_fluid, spectral_wavevector
from .dense import solve_dense
from .models import FullTensorSolution

_DIRECTIONS = ((0, 1), (1, -1))

# 分量 (u1, u2, u3, t1, t2, t3) 中每种界面要连续 (或为零) 的那些
_CONTINUITY = {
    frozenset([Phase.SOLID]): (0, 1, 2, 3, 4, 5),
    frozenset([Phase.SOLID, Phase.FLUID]): (2, 3, 4, 5),
    frozenset([Phase.FLUID]): (2, 5),
    frozenset([Phase.SOLID, Phase.VACUUM]): (3, 4, 5),
    frozenset([Phase.FLUID, Phase.VACUUM]): (5,),
}


def traction_operator(material, n):
    """平面波 a e^{i n.x} 的牵引力 sigma e3 = T(n) a"""
    mu, lam = material.mu, material.lam
    return np.array([
        [mu * n[2], 0, mu * n[0]],
        [0, mu * n[2], mu * n[1]],
        [lam * n[0], lam * n[1], (lam + 2 * mu) * n[2]],
    ], dtype=complex)


class _Layer:
    """一层在给定谱点上的波数和平面波基"""

    def __init__(self, material, omega, point):
        self.material = material
        self.phase = material.phase
        self.omega = omega
        self.point = point
        if self.phase == Phase.VACUUM:
            return
        pair = wavenumbers(material, omega)
        self.k_cz = vertical_wavenumber(pair.k_c, point.k_rho)
        self.k_sz = None if pair.k_s is None else vertical_wavenumber(pair.k_s, point.k_rho)

    def vectors(self, tau):
        ikx, iky = 1j * self.point.kx, 1j * self.point.ky
        n_c = np.array([ikx, iky, tau * 1j * self.k_cz])
        if self.phase == Phase.FLUID:
            return None, n_c
        return np.array([ikx, iky, tau * 1j * self.k_sz]), n_c

    def response(self, tau, z, reference):
        """(位移矩阵, 牵引力矩阵), 都作用在该方向的 3 个未知量上"""
        n_s, n_c = self.vectors(tau)
        e_c = np.exp(tau * 1j * self.k_cz * (z - reference))
        if self.phase == Phase.FLUID:
            displacement = np.eye(3) * e_c
            return displacement, traction_operator(self.material, n_c) @ displacement
        s = n_s[2]
        e_s = np.exp(tau * 1j * self.k_sz * (z - reference))
        m_s = np.array([[-s, 0, 0], [0, -s, 0], [n_s[0], n_s[1], 0]], dtype=complex)
        m_c = np.zeros((3, 3), dtype=complex)
        m_c[:, 2] = n_c
        displacement = m_s * e_s + m_c * e_c
        traction = traction_operator(self.material, n_s) @ m_s * e_s + traction_operator(self.material, n_c) @ m_c * e_c
        return displacement, traction

    def constraints(self, tau):
        """流体平面波: n x a = 0 与 (lam n n^T + w^2 rho I) a = 0"""
        _, n_c = self.vectors(tau)
        acoustic = self.material.lam * np.outer(n_c, n_c) + self.omega ** 2 * self.material.rho * np.eye(3)
        return np.vstack([cross_matrix(n_c), acoustic])


def _references(interfaces):
    count = len(interfaces) + 1
    refs = np.zeros((count, 2))
    for t in range(count):
        refs[t, 0] = interfaces[t] if t < count - 1 else 0.0
        refs[t, 1] = interfaces[t - 1] if t > 0 else 0.0
    return refs


def _free_response(layer, z, z_source, vector):
    """自由项在深度 z 的 (位移, 牵引力)"""
    material, point, omega = layer.material, layer.point, layer.omega
    if vector:
        u = spectral_free_fluid(omega, material, point, z, z_source)
        n_c = spectral_wavevector(wavenumbers(material, omega).k_c, point, z, z_source)
        return u[:, None], (traction_operator(material, n_c) @ u)[:, None]
    shear, pressure, n_s, n_c = spectral_free_elastic_parts(omega, material, point, z, z_source)
    traction = traction_operator(material, n_s) @ shear + traction_operator(material, n_c) @ pressure
    return shear + pressure, traction


def oracle_elastic_full(stack, omega, point, z_source, source_layer=None, source_kind='tensor', *,
                        loss=None, condition_limit=None):
    if stack.problem_kind != ProblemKind.ELASTIC:
        raise InvalidStack("elastic oracle needs an elastic stack")
    if loss is None:
        loss = green_settings.LOSS
    vector = source_kind == 'vector'
    j = locate_layer(stack, z_source)
    if source_layer is not None and source_layer != j:
        raise InvalidStack(f"source depth {z_source} lies in layer {j}, not {source_layer}")
    stack = stack.with_loss(loss)
    layers = [_Layer(m, omega, point) for m in stack.materials]
    if layers[j].phase != (Phase.FLUID if vector else Phase.SOLID):
        raise PhaseMismatch(f"{source_kind} source cannot sit in a {layers[j].phase} layer")

    count = len(layers)
    columns = 1 if vector else 3
    refs = _references(stack.interfaces)
    blocks = {}
    for t, layer in enumerate(layers):
        if layer.phase == Phase.VACUUM:
            continue
        for direction, _ in _DIRECTIONS:
            if (t, direction) not in ((0, 1), (count - 1, 0)):
                blocks[(t, direction)] = 3 * len(blocks)
    size = 3 * len(blocks)

    equations, rhs = [], []
    for l, depth in enumerate(stack.interfaces):
        components = _CONTINUITY[frozenset([layers[l].phase, layers[l + 1].phase])]
        rows = np.zeros((6, size), dtype=complex)
        right = np.zeros((6, columns), dtype=complex)
        for t, sign in ((l, 1.0), (l + 1, -1.0)):
            if layers[t].phase == Phase.VACUUM:
                continue
            for direction, tau in _DIRECTIONS:
                start = blocks.get((t, direction))
                if start is None:
                    continue
                displacement, traction = layers[t].response(tau, depth, refs[t, direction])
                rows[:, start:start + 3] += sign * np.vstack([displacement, traction])
            if t == j:
                displacement, traction = _free_response(layers[t], depth, z_source, vector)
                right -= sign * np.vstack([displacement, traction])
        equations.append(rows[list(components)])
        rhs.append(right[list(components)])

    for (t, direction), start in blocks.items():
        if layers[t].phase != Phase.FLUID:
            continue
        block = np.zeros((6, size), dtype=complex)
        block[:, start:start + 3] = layers[t].constraints(_DIRECTIONS[direction][1])
        equations.append(block)
        rhs.append(np.zeros((6, columns), dtype=complex))

    matrix = np.vstack(equations) if equations else np.zeros((0, size), dtype=complex)
    right = np.vstack(rhs) if rhs else np.zeros((0, columns), dtype=complex)
    solution, cond = solve_dense(
        matrix, right, condition_limit=condition_limit, k_rho=point.k_rho, label='elastic oracle',
    )

    unknowns = np.zeros((count, 2, 3, columns), dtype=complex)
    for (t, direction), start in blocks.items():
        unknowns[t, direction] = solution[start:start + 3]
    if vector:
        unknowns = unknowns[..., 0]
    return FullTensorSolution(
        stack=stack, omega=omega, point=point, z_source=z_source, source_layer=j,
        unknowns=unknowns, references=refs, condition=cond, source_kind=source_kind,
    )


def oracle_elastic_field(sol, z, *, layer=None):
    """参考解在深度 z 的位移 (张量源 3x3, 向量源 3 维)"""
    t = locate_layer(sol.stack, z) if layer is None else layer
    material = sol.stack.materials[t]
    if material.phase == Phase.VACUUM:
        raise InvalidStack(f"layer {t} is vacuum and carries no displacement")
    vector = sol.source_kind == 'vector'
    current = _Layer(material, sol.omega, sol.point)
    total = np.zeros((3,) if vector else (3, 3), dtype=complex)
    if t == sol.source_layer:
        displacement, _ = _free_response(current, z, sol.z_source, vector)
        total += displacement[:, 0] if vector else displacement
    for direction, tau in _DIRECTIONS:
        amplitudes = sol.unknowns[t, direction]
        if not np.any(amplitudes):
            continue
        displacement, _ = current.response(tau, z, sol.references[t, direction])
        total += displacement @ amplitudes
    return total
