"""异常定义"""


class BoostkitError(ValueError):
    """boostkit 异常基类"""


class UnsupportedRepresentationError(BoostkitError):
    """不支持的 gamma 矩阵表示"""


class InvalidParticleError(BoostkitError):
    """粒子状态无效（超光速、质量非正等）"""


class MixedSystemError(BoostkitError):
    """体系中电荷、速率或静质量不一致，M = (e/2m')L 不适定"""


class SourceRadiusError(BoostkitError):
    """场点落在源半径之内，多极展开不收敛"""


class CoincidentPointError(BoostkitError):
    """场点与源点重合"""


class InconsistentFieldError(BoostkitError):
    """E、B 与势 Φ、A 不一致"""


class NonUniformFieldError(BoostkitError):
    """要求均匀电场而实际不均匀"""


class PreconditionError(BoostkitError):
    """前置条件不满足"""


class InvalidLatticeError(BoostkitError):
    """格点参数无效"""


class TimeDependentFieldError(BoostkitError):
    """要求静态场而配置含时"""


class RelativisticRegimeError(BoostkitError):
    """势阱深度超出非相对论区域"""


class ScenarioParseError(BoostkitError):
    """场景文件无法解析"""


class ScenarioValidationError(BoostkitError):
    """场景参数缺失或无效"""
