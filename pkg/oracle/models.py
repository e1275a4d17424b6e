# oracle/models.py
from dataclasses import dataclass

import numpy as np
from django.db import models


class ReflectionKind(models.TextChoices):
    TE = 'TE', 'TE (b1, 1/mu)'
    TM = 'TM', 'TM (b2, 1/eps)'
    ACOUSTIC = 'acoustic', '声学 (1/rho)'


@dataclass(frozen=True, eq=False)
class FullTensorSolution:
    """
    不经过基分解的整张量解。
    unknowns[t, dir] 是第 t 层 dir 方向的 3x3 (张量源) 或 3 维 (向量源) 反射未知量,
    相位参考点与生产求解器相同 (references)。
    """
    stack: object
    omega: float
    point: object
    z_source: float
    source_layer: int
    unknowns: np.ndarray
    references: np.ndarray
    condition: float = 1.0
    source_kind: str = 'em'
