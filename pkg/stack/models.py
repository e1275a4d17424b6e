# stack/models.py
import math
from dataclasses import dataclass, field, replace

from django.db import models

from core.exceptions import InvalidStack


class ProblemKind(models.TextChoices):
    MAXWELL = 'maxwell', '电磁'
    ELASTIC = 'elastic', '弹性'


class MaterialKind(models.TextChoices):
    EM = 'em', '电磁介质'
    ELASTIC = 'elastic', '弹性介质'
    VACUUM = 'vacuum', '真空'


class Phase(models.TextChoices):
    SOLID = 'solid', '固体'
    FLUID = 'fluid', '流体'
    VACUUM = 'vacuum', '真空'


def _positive(value):
    # 加了损耗之后参数是复数, 按实部判断
    return complex(value).real > 0


@dataclass(frozen=True)
class Material:
    """
    一层的材料参数。
    EM: epsilon, mu (磁导率); Elastic: rho, lam, mu (剪切模量); Vacuum 无参数。
    建议用 Material.em / Material.elastic / Material.vacuum 构造。
    """
    kind: str
    epsilon: complex = 0.0
    mu: complex = 0.0
    rho: complex = 0.0
    lam: complex = 0.0

    def __post_init__(self):
        for name in ('epsilon', 'mu', 'rho', 'lam'):
            value = getattr(self, name)
            if not (math.isfinite(complex(value).real) and math.isfinite(complex(value).imag)):
                raise InvalidStack(f"material parameter {name} must be finite, got {value!r}")

        if self.kind == MaterialKind.EM:
            if self.epsilon == 0 or self.mu == 0:
                raise InvalidStack("EM material requires nonzero epsilon and mu")
        elif self.kind == MaterialKind.ELASTIC:
            if not _positive(self.rho):
                raise InvalidStack(f"density must be positive, got {self.rho!r}")
            if not _positive(self.lam):
                raise InvalidStack(f"Lame first parameter must be positive, got {self.lam!r}")
            if self.mu != 0 and not _positive(self.mu):
                raise InvalidStack(f"shear modulus must be positive or zero, got {self.mu!r}")
        elif self.kind != MaterialKind.VACUUM:
            raise InvalidStack(f"unknown material kind {self.kind!r}")

    @classmethod
    def em(cls, epsilon, mu):
        return cls(MaterialKind.EM, epsilon=epsilon, mu=mu)

    @classmethod
    def elastic(cls, rho, lam, mu=0.0):
        return cls(MaterialKind.ELASTIC, rho=rho, lam=lam, mu=mu)

    @classmethod
    def vacuum(cls):
        return cls(MaterialKind.VACUUM)

    @property
    def phase(self):
        if self.kind == MaterialKind.VACUUM:
            return Phase.VACUUM
        if self.kind == MaterialKind.ELASTIC:
            return Phase.FLUID if self.mu == 0 else Phase.SOLID
        return None

    @property
    def gamma(self):
        """P 波模量 lambda + 2 mu"""
        return self.lam + 2 * self.mu

    def with_loss(self, delta):
        """
        极限吸收: 每个波数乘以 (1 + i delta)。
        EM 改 epsilon, 弹性改 lambda 和 mu, 这样界面条件里的材料参数也一致。
        """
        if not delta or self.kind == MaterialKind.VACUUM:
            return self
        factor = (1 + 1j * delta) ** 2
        if self.kind == MaterialKind.EM:
            return replace(self, epsilon=self.epsilon * factor)
        return replace(self, lam=self.lam / factor, mu=self.mu / factor)


@dataclass(frozen=True)
class LayerStack:
    """
    界面深度 d0 > d1 > ... > d_{L-1}, 材料自上 (0) 而下 (L)。
    """
    interfaces: tuple
    materials: tuple
    problem_kind: str = ProblemKind.MAXWELL
    loss: float = 0.0
    _scale: float = field(default=1.0, init=False, repr=False)

    def __post_init__(self):
        interfaces = tuple(float(d) for d in self.interfaces)
        materials = tuple(self.materials)
        object.__setattr__(self, 'interfaces', interfaces)
        object.__setattr__(self, 'materials', materials)

        if len(materials) != len(interfaces) + 1:
            raise InvalidStack(
                f"{len(interfaces)} interfaces need {len(interfaces) + 1} materials, got {len(materials)}"
            )
        if not all(math.isfinite(d) for d in interfaces):
            raise InvalidStack("interface depths must be finite")
        if any(upper <= lower for upper, lower in zip(interfaces, interfaces[1:])):
            raise InvalidStack(f"interfaces must be strictly decreasing, got {interfaces}")

        if self.problem_kind == ProblemKind.MAXWELL:
            if any(m.kind != MaterialKind.EM for m in materials):
                raise InvalidStack("Maxwell stacks take EM materials only")
        elif self.problem_kind == ProblemKind.ELASTIC:
            if any(m.kind == MaterialKind.EM for m in materials):
                raise InvalidStack("elastic stacks take elastic or vacuum materials only")
            for index, m in enumerate(materials):
                if m.kind == MaterialKind.VACUUM and 0 < index < len(materials) - 1:
                    raise InvalidStack(f"vacuum is only allowed as top or bottom layer, found at {index}")
            if all(m.kind == MaterialKind.VACUUM for m in materials):
                raise InvalidStack("stack has no elastic layer")
        else:
            raise InvalidStack(f"unknown problem kind {self.problem_kind!r}")

        spread = max((abs(d) for d in interfaces), default=0.0)
        if len(interfaces) > 1:
            spread = max(spread, interfaces[0] - interfaces[-1])
        object.__setattr__(self, '_scale', max(1.0, spread))

    @property
    def layer_count(self):
        """L + 1"""
        return len(self.materials)

    @property
    def geometry_scale(self):
        return self._scale

    def with_loss(self, delta):
        if not delta:
            return self
        return LayerStack(
            self.interfaces,
            tuple(m.with_loss(delta) for m in self.materials),
            self.problem_kind,
            loss=self.loss + delta,
        )

    def replace_material(self, index, material):
        materials = list(self.materials)
        materials[index] = material
        return LayerStack(self.interfaces, tuple(materials), self.problem_kind, loss=self.loss)


@dataclass(frozen=True)
class ElasticWavenumbers:
    """固体 (k_s, k_c); 流体只有 k_c, k_s 为 None"""
    k_s: complex | None
    k_c: complex


@dataclass(frozen=True, eq=False)
class VerticalWavenumbers:
    """
    某个 k_rho 处各层的波数。
    EM 用 k, kz; 弹性用 k_s, k_c, k_sz, k_cz (没有定义的位置为 nan)。
    """
    k_rho: float
    k: object = None
    kz: object = None
    k_s: object = None
    k_c: object = None
    k_sz: object = None
    k_cz: object = None


class Direction(models.TextChoices):
    UP = 'up', '上行 e^{+i kz z}'
    DOWN = 'down', '下行 e^{-i kz z}'


UP, DOWN = 0, 1
TAU = (1, -1)


@dataclass(frozen=True)
class InterfaceResidual:
    """一个界面上各项条件的相对残差"""
    interface: int
    depth: float
    checks: dict

    @property
    def worst(self):
        return max(self.checks.values(), default=0.0)


@dataclass(frozen=True)
class ResidualReport:
    interfaces: tuple
    radiation: float = 0.0

    @property
    def worst(self):
        return max([self.radiation] + [r.worst for r in self.interfaces])

    def by_check(self):
        """条件名 -> 所有界面上的最大残差"""
        merged = {}
        for residual in self.interfaces:
            for name, value in residual.checks.items():
                merged[name] = max(merged.get(name, 0.0), value)
        return merged
