# stack/factories.py
"""随机层状结构, 供测试和 selfcheck 抽样使用"""
import numpy as np

from .models import LayerStack, Material, ProblemKind


def random_interfaces(rng, count, top=0.0, thickness=(0.3, 1.5)):
    depths = [top]
    for _ in range(count - 1):
        depths.append(depths[-1] - rng.uniform(*thickness))
    return depths[:count]


def random_em_stack(rng, interface_count, low=0.5, high=4.0):
    materials = tuple(
        Material.em(rng.uniform(low, high), rng.uniform(low, high)) for _ in range(interface_count + 1)
    )
    return LayerStack(random_interfaces(rng, interface_count), materials, ProblemKind.MAXWELL)


def random_solid(rng):
    mu = rng.uniform(0.5, 3.0)
    return Material.elastic(rng.uniform(0.8, 3.0), rng.uniform(0.5, 3.0) + mu, mu)


def random_fluid(rng):
    return Material.elastic(rng.uniform(0.8, 3.0), rng.uniform(1.0, 4.0))


def random_elastic_stack(rng, phases):
    """phases 为每层相态字符串 ('solid' / 'fluid' / 'vacuum')"""
    factory = {
        'solid': random_solid,
        'fluid': random_fluid,
        'vacuum': lambda _rng: Material.vacuum(),
    }
    materials = tuple(factory[phase](rng) for phase in phases)
    return LayerStack(random_interfaces(rng, len(phases) - 1), materials, ProblemKind.ELASTIC)


def source_depth(rng, stack, layer):
    """第 layer 层内部的一个随机深度, 离界面至少 0.1"""
    above = stack.interfaces[layer - 1] if layer > 0 else None
    below = stack.interfaces[layer] if layer < len(stack.interfaces) else None
    if above is None and below is None:
        return float(rng.uniform(-1.0, 1.0))
    if above is None:
        return below + float(rng.uniform(0.1, 1.0))
    if below is None:
        return above - float(rng.uniform(0.1, 1.0))
    return float(rng.uniform(below + 0.1 * (above - below), above - 0.1 * (above - below)))
