# core/exceptions.py
"""层状介质格林函数的异常体系"""


class LayeredGreenError(Exception):
    """所有数值/配置错误的基类"""


class InvalidStack(LayeredGreenError, ValueError):
    """材料或分层几何不满足约束"""


class ConfigError(LayeredGreenError):
    """运行配置无法解析或不合法"""


class DegenerateSpectralPoint(LayeredGreenError):
    """k_rho 太小, J3..J8 退化, 无法提取基系数"""


class OnInterface(LayeredGreenError):
    """深度落在界面上 (容差 eps_iface 内)"""

    def __init__(self, z, interface):
        self.z = z
        self.interface = interface
        super().__init__(f"depth {z!r} lies on interface {interface} (within tolerance)")


class VacuumHasNoWavenumber(LayeredGreenError):
    pass


class CoincidentDepths(LayeredGreenError):
    """源层内 z == z'"""


class BranchPoint(LayeredGreenError):
    """竖向波数 k_z 落在支点上"""


class PhaseMismatch(LayeredGreenError):
    """源类型和源所在层的相态不一致"""


class SystemShapeError(LayeredGreenError):
    """界面方程组不是方阵"""


class SingularSystem(LayeredGreenError):
    """界面矩阵数值奇异 (谱极点 / 导模)"""

    def __init__(self, message, condition=None, k_rho=None):
        self.condition = condition
        self.k_rho = k_rho
        super().__init__(message)


class NonConvergent(LayeredGreenError):
    """Hankel 积分在截断处尾项估计超过容差"""

    def __init__(self, message, estimate=None):
        self.estimate = estimate
        super().__init__(message)


class ProductTableError(LayeredGreenError, RuntimeError):
    """硬编码乘法表与实际矩阵乘积不一致"""
