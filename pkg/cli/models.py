from dataclasses import dataclass

from django.db import models

from elastic.models import SourceKind
from stack.models import ProblemKind


class Problem(models.TextChoices):
    MAXWELL = 'maxwell', '电磁'
    ELASTIC_TENSOR = 'elastic-tensor', '弹性 (固体点力)'
    ELASTIC_VECTOR = 'elastic-vector', '弹性 (流体标量源)'


class OutputFormat(models.TextChoices):
    CSV = 'csv', 'CSV'
    JSON = 'json', 'JSON'


class ExitCode(models.IntegerChoices):
    OK = 0, '成功'
    VALIDATION_FAILED = 1, '校验未通过'
    CONFIG_ERROR = 2, '配置错误'
    SINGULAR = 3, '谱极点 (--strict)'
    NONCONVERGENT = 4, '积分不收敛 (--strict)'


class RowStatus(models.TextChoices):
    OK = 'ok', '正常'
    SINGULAR = 'singular', '矩阵奇异'
    NONCONVERGENT = 'nonconvergent', '积分不收敛'


@dataclass(frozen=True)
class RunConfig:
    """解析并校验过的运行配置, 解析之后只读"""
    problem: str
    omega: float
    stack: object
    source: tuple
    k_rho: tuple = ()
    alpha: float = 0.0
    depths: tuple = ()
    points: tuple = ()
    output_path: str | None = None
    output_format: str = OutputFormat.CSV
    quadrature: object = None
    loss: float | None = None
    field: str = 'GE'
    perturb: float = 0.0

    @property
    def problem_kind(self):
        return ProblemKind.MAXWELL if self.problem == Problem.MAXWELL else ProblemKind.ELASTIC

    @property
    def source_kind(self):
        return SourceKind.VECTOR if self.problem == Problem.ELASTIC_VECTOR else SourceKind.TENSOR

    @property
    def z_source(self):
        return self.source[2]


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float

    @property
    def passed(self):
        return self.value <= self.threshold


@dataclass(frozen=True)
class CheckReport:
    """一次 validate / selfcheck 的汇总; skipped 记录被跳过的 k_rho"""
    checks: tuple
    skipped: tuple = ()
    table: object = None

    @property
    def passed(self):
        return all(c.passed for c in self.checks)
