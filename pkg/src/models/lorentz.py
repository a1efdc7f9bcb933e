"""Lorentz 群相关数据模型"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.utils.linalg import readonly
from src.utils.exceptions import BoostkitError


class TransformKind(str, Enum):
    """旋量变换类型"""
    ROTATION = "rotation"
    BOOST = "boost"
    MIXED = "mixed"


@dataclass(frozen=True)
class Metric:
    """度规 g^μν = diag(1, -1, -1, -1)"""
    signature: Tuple[int, int, int, int] = (1, -1, -1, -1)

    def __post_init__(self):
        if tuple(self.signature) != (1, -1, -1, -1):
            raise BoostkitError(f"仅支持度规 (+1, -1, -1, -1)，收到 {self.signature}")

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(np.array(self.signature, dtype=float))

    def __getitem__(self, index):
        mu, nu = index
        return float(self.signature[mu]) if mu == nu else 0.0


MINKOWSKI = Metric()


@dataclass(frozen=True)
class GammaSet:
    """四个 4×4 Dirac 矩阵 γ^μ"""
    gamma: np.ndarray
    representation: str = "dirac"
    metric: Metric = field(default=MINKOWSKI)

    def __post_init__(self):
        gamma = np.asarray(self.gamma, dtype=complex)
        if gamma.shape != (4, 4, 4):
            raise BoostkitError(f"gamma 矩阵形状应为 (4, 4, 4)，收到 {gamma.shape}")
        object.__setattr__(self, "gamma", readonly(gamma))

    def __getitem__(self, mu: int) -> np.ndarray:
        return self.gamma[mu]

    @property
    def gamma0(self) -> np.ndarray:
        return self.gamma[0]


@dataclass(frozen=True)
class SpinTensor:
    """4D 自旋张量 S^μν，s[μ, ν] 为 4×4 矩阵"""
    s: np.ndarray
    representation: str = "dirac"

    def __post_init__(self):
        s = np.asarray(self.s, dtype=complex)
        if s.shape != (4, 4, 4, 4):
            raise BoostkitError(f"自旋张量形状应为 (4, 4, 4, 4)，收到 {s.shape}")
        object.__setattr__(self, "s", readonly(s))

    def __getitem__(self, index) -> np.ndarray:
        return self.s[index]

    def with_entry(self, mu: int, nu: int, value: np.ndarray) -> "SpinTensor":
        """替换单个分量（用于扰动检测）"""
        s = np.array(self.s, copy=True)
        s[mu, nu] = value
        return SpinTensor(s=s, representation=self.representation)


@dataclass(frozen=True)
class RapidityVector:
    """快度矢量 η"""
    eta: np.ndarray

    def __post_init__(self):
        eta = np.asarray(self.eta, dtype=float).reshape(-1)
        if eta.shape != (3,):
            raise BoostkitError(f"快度应为三维矢量，收到 {eta.shape}")
        if not np.all(np.isfinite(eta)):
            raise BoostkitError("快度分量必须有限")
        object.__setattr__(self, "eta", readonly(eta))

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.eta))

    @property
    def direction(self) -> Optional[np.ndarray]:
        norm = self.magnitude
        if norm == 0.0:
            return None
        return self.eta / norm

    @property
    def velocity(self) -> np.ndarray:
        """对应的三速度 tanh|η| n̂"""
        direction = self.direction
        if direction is None:
            return np.zeros(3)
        return np.tanh(self.magnitude) * direction

    def __neg__(self) -> "RapidityVector":
        return RapidityVector(-self.eta)

    def __add__(self, other: "RapidityVector") -> "RapidityVector":
        return RapidityVector(self.eta + other.eta)


@dataclass(frozen=True)
class SpinorTransform:
    """旋量表示下的有限 Lorentz 变换 S(Λ)"""
    matrix: np.ndarray
    kind: TransformKind

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.shape != (4, 4):
            raise BoostkitError(f"旋量变换应为 4×4，收到 {matrix.shape}")
        object.__setattr__(self, "matrix", readonly(matrix))
        object.__setattr__(self, "kind", TransformKind(self.kind))

    @property
    def inverse_matrix(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


@dataclass(frozen=True)
class VectorTransform:
    """四矢量表示下的 Λ^μ_ν"""
    lam: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if lam.shape != (4, 4):
            raise BoostkitError(f"Λ 应为 4×4，收到 {lam.shape}")
        object.__setattr__(self, "lam", readonly(lam))

    def apply(self, vector) -> np.ndarray:
        return self.lam @ np.asarray(vector, dtype=float)

    def metric_residual(self) -> float:
        """‖Λ^T g Λ − g‖_max"""
        g = MINKOWSKI.matrix
        return float(np.max(np.abs(self.lam.T @ g @ self.lam - g)))

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.lam))


@dataclass(frozen=True)
class ResidualReport:
    """残差报告"""
    max_residual: float
    worst_index: Tuple[int, ...] = ()
    checked: int = 0

    def passed(self, tolerance: float) -> bool:
        return self.max_residual <= tolerance
