"""算符与谱结果模型"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from src.models.fields import Grid1D
from src.utils.linalg import (
    anti_hermiticity_residual,
    hermiticity_residual,
    max_entry,
    readonly,
)
from src.utils.exceptions import BoostkitError


class OperatorLabel(str, Enum):
    """Pauli 级算符标签"""
    H0 = "H0"
    H1 = "H1"
    FULL = "full"
    BLOCK = "block"


@dataclass(frozen=True)
class PauliOperator:
    """自旋 ⊗ 空间 乘积基上的有限矩阵，自旋指标在外层"""
    matrix: np.ndarray
    label: OperatorLabel
    n_spatial: int
    spin_components: int = 2
    spin_blocks: Optional[np.ndarray] = None
    basis_label: str = "spin"

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        expected = self.n_spatial * self.spin_components
        if matrix.shape != (expected, expected):
            raise BoostkitError(f"算符维数 {matrix.shape} 与 {self.spin_components}×{self.n_spatial} 不符")
        object.__setattr__(self, "matrix", readonly(matrix))
        object.__setattr__(self, "label", OperatorLabel(self.label))
        if self.spin_blocks is not None:
            object.__setattr__(self, "spin_blocks", readonly(np.asarray(self.spin_blocks, dtype=complex)))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def hermiticity_residual(self) -> float:
        return hermiticity_residual(self.matrix)

    @property
    def anti_hermiticity_residual(self) -> float:
        return anti_hermiticity_residual(self.matrix)

    def block(self, row: int, col: int) -> np.ndarray:
        """按 2×2 分块取子矩阵（用于四分量算符）"""
        half = self.dimension // 2
        return self.matrix[row * half:(row + 1) * half, col * half:(col + 1) * half]


@dataclass(frozen=True)
class SpectrumResult:
    """± 分支的配对谱

    plus[i] 与 minus[i] 为同一对能级；epsilon0 = (λ₊ + λ₋)/2，
    epsilon1 = (λ₊ − λ₋)/2，分裂为 2ε₁。特征值一律为复数。
    """
    plus: np.ndarray
    minus: np.ndarray
    hermitian_tolerance: float = 1e-12

    def __post_init__(self):
        plus = np.asarray(self.plus, dtype=complex).reshape(-1)
        minus = np.asarray(self.minus, dtype=complex).reshape(-1)
        if plus.shape != minus.shape:
            raise BoostkitError("± 分支特征值数目不一致")
        object.__setattr__(self, "plus", readonly(plus))
        object.__setattr__(self, "minus", readonly(minus))

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([self.plus, self.minus])

    @property
    def groups(self) -> Dict[str, np.ndarray]:
        return {"plus": self.plus, "minus": self.minus}

    @property
    def epsilon0(self) -> np.ndarray:
        return 0.5 * (self.plus + self.minus)

    @property
    def epsilon1(self) -> np.ndarray:
        return 0.5 * (self.plus - self.minus)

    @property
    def splittings(self) -> np.ndarray:
        return self.plus - self.minus

    @property
    def splitting(self) -> complex:
        """最低能级对的 2ε₁"""
        if len(self.plus) == 0:
            return 0j
        return complex(self.splittings[0])

    @property
    def splitting_magnitude(self) -> float:
        return abs(self.splitting)

    @property
    def max_splitting_magnitude(self) -> float:
        return float(np.max(np.abs(self.splittings))) if len(self.plus) else 0.0

    @property
    def is_real(self) -> np.ndarray:
        """|Im λ| 小于 hermitian_tolerance 的特征值"""
        return np.abs(self.eigenvalues.imag) <= self.hermitian_tolerance

    @property
    def degenerate(self) -> bool:
        return self.max_splitting_magnitude <= self.hermitian_tolerance

    def scaled(self, factor: float) -> "SpectrumResult":
        return SpectrumResult(self.plus * factor, self.minus * factor, self.hermitian_tolerance * abs(factor))

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            "n_pairs": len(self.plus),
            "splitting": self.splitting,
            "splitting_magnitude": self.splitting_magnitude,
            "max_splitting_magnitude": self.max_splitting_magnitude,
            "ground_epsilon0": complex(self.epsilon0[0]) if len(self.plus) else 0j,
            "all_real": bool(np.all(self.is_real)),
        }


@dataclass(frozen=True)
class LatticeDiracOperator:
    """一维格点 Dirac 哈密顿量 H = σ₁⊗P + σ₃⊗(m + W) + I⊗eΦ"""
    matrix: np.ndarray
    grid: Grid1D
    wilson_r: float
    mass: float
    charge: float
    links: np.ndarray
    momentum: np.ndarray
    wilson: np.ndarray
    potential: np.ndarray

    def __post_init__(self):
        for name in ("matrix", "links", "momentum", "wilson", "potential"):
            object.__setattr__(self, name, readonly(np.asarray(getattr(self, name))))

    @property
    def mass_term(self) -> np.ndarray:
        """M = m + W"""
        return self.mass * np.eye(self.grid.n_points) + self.wilson

    @property
    def potential_matrix(self) -> np.ndarray:
        return np.diag(self.potential).astype(complex)

    @property
    def hermiticity_residual(self) -> float:
        return hermiticity_residual(self.matrix)

    @property
    def has_uniform_links(self) -> bool:
        return bool(np.allclose(self.links, self.links[0], rtol=0.0, atol=1e-14))

    @property
    def has_uniform_potential(self) -> bool:
        return bool(np.all(self.potential == self.potential[0]))


@dataclass(frozen=True)
class SecondOrderOperator:
    """二阶算符 Q 及其组成部分，(ε − eΦ)²ψ = Qψ"""
    klein_gordon: np.ndarray
    cross_term: np.ndarray
    spin_field: np.ndarray
    wilson_field: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return self.klein_gordon + self.cross_term + self.spin_field + self.wilson_field

    @property
    def spin_field_norm(self) -> float:
        return max_entry(self.spin_field)


@dataclass(frozen=True)
class NonRelComparison:
    """Dirac 基态与 Pauli 基态的比较"""
    well_depth: float
    well_width: float
    mass: float
    dirac_binding: float
    pauli_energy: float
    doubled_dirac_binding: float
    doubled_pauli_energy: float
    extras: Dict[str, float] = field(default_factory=dict)

    @staticmethod
    def _relative(dirac: float, pauli: float) -> Optional[float]:
        if pauli == 0.0:
            return None
        return abs(dirac - pauli) / abs(pauli)

    @property
    def absolute_discrepancy(self) -> float:
        return abs(self.dirac_binding - self.pauli_energy)

    @property
    def doubled_absolute_discrepancy(self) -> float:
        return abs(self.doubled_dirac_binding - self.doubled_pauli_energy)

    @property
    def relative_discrepancy(self) -> Optional[float]:
        return self._relative(self.dirac_binding, self.pauli_energy)

    @property
    def doubled_relative_discrepancy(self) -> Optional[float]:
        return self._relative(self.doubled_dirac_binding, self.doubled_pauli_energy)

    @property
    def ratio(self) -> Optional[float]:
        """质量加倍后相对偏差之比"""
        first, second = self.relative_discrepancy, self.doubled_relative_discrepancy
        if not first or second is None:
            return None
        return second / first

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            "well_depth": self.well_depth,
            "well_width": self.well_width,
            "mass": self.mass,
            "dirac_binding": self.dirac_binding,
            "pauli_energy": self.pauli_energy,
            "absolute_discrepancy": self.absolute_discrepancy,
            "relative_discrepancy": self.relative_discrepancy,
            "doubled_dirac_binding": self.doubled_dirac_binding,
            "doubled_pauli_energy": self.doubled_pauli_energy,
            "doubled_relative_discrepancy": self.doubled_relative_discrepancy,
            "ratio": self.ratio,
            "box_decay": self.extras.get("box_decay"),
        }
