"""外场配置、一维格点与空间基组"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Union

import numpy as np

from config.settings import get_settings
from src.utils.linalg import readonly
from src.utils.exceptions import BoostkitError, InvalidLatticeError

Potential = Union[None, float, Callable[..., Any]]


def _zeros3() -> np.ndarray:
    return np.zeros(3)


@dataclass(frozen=True)
class FieldConfig:
    """均匀 E、B 以及可选的标势 Φ、矢势 A

    势可以为 None（仅自旋耦合模式，跳过一致性检查）、常数，或可调用对象
    f(x, y, z)。矢势可调用对象返回 (A_x, A_y, A_z)。
    """
    e_field: np.ndarray = field(default_factory=_zeros3)
    b_field: np.ndarray = field(default_factory=_zeros3)
    scalar_potential: Potential = None
    vector_potential: Any = None
    charge: float = 1.0
    mass: float = 1.0
    static: bool = True

    def __post_init__(self):
        for name in ("e_field", "b_field"):
            vector = np.asarray(getattr(self, name), dtype=float).reshape(-1)
            if vector.shape != (3,) or not np.all(np.isfinite(vector)):
                raise BoostkitError(f"{name} 应为有限的三维矢量")
            object.__setattr__(self, name, readonly(vector))
        if not self.mass > 0:
            raise BoostkitError(f"质量必须为正，收到 {self.mass}")
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "charge", float(self.charge))

        phi = self.scalar_potential
        if phi is not None and not callable(phi):
            object.__setattr__(self, "scalar_potential", float(phi))
        vec = self.vector_potential
        if vec is not None and not callable(vec):
            vec = np.asarray(vec, dtype=float).reshape(-1)
            if vec.shape != (3,):
                raise BoostkitError(f"常矢势应为三维矢量，收到 {vec.shape}")
            object.__setattr__(self, "vector_potential", readonly(vec))

    @property
    def has_scalar_potential(self) -> bool:
        return self.scalar_potential is not None

    @property
    def has_vector_potential(self) -> bool:
        return self.vector_potential is not None

    @property
    def charge_to_mass(self) -> float:
        return self.charge / self.mass

    def scalar_samples(self, points) -> np.ndarray:
        """在采样点上求 Φ"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        count = len(points)
        phi = self.scalar_potential
        if phi is None:
            return np.zeros(count)
        if callable(phi):
            values = np.asarray(phi(points[:, 0], points[:, 1], points[:, 2]), dtype=float)
            return np.array(np.broadcast_to(values, (count,)), dtype=float)
        return np.full(count, phi)

    def vector_samples(self, points) -> np.ndarray:
        """在采样点上求 A，形状 (N, 3)"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        count = len(points)
        vec = self.vector_potential
        if vec is None:
            return np.zeros((count, 3))
        if callable(vec):
            components = vec(points[:, 0], points[:, 1], points[:, 2])
            return np.stack(
                [np.broadcast_to(np.asarray(c, dtype=float), (count,)) for c in components],
                axis=1,
            )
        return np.tile(vec, (count, 1))

    def link_phases(self, grid: "Grid1D") -> np.ndarray:
        """Peierls 链接相位 U_j = exp(−i e a A_x(x_j + a/2))"""
        midpoints = np.zeros((grid.n_points, 3))
        midpoints[:, 0] = grid.link_midpoints
        a_x = self.vector_samples(midpoints)[:, 0]
        return np.exp(-1j * self.charge * grid.spacing * a_x)

    def sampled_e_field(self, points, step: float) -> np.ndarray:
        """中心差分 −∇Φ（静态场，∂_t A = 0）"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        gradient = np.zeros_like(points)
        for axis in range(3):
            shift = np.zeros(3)
            shift[axis] = step
            gradient[:, axis] = (
                self.scalar_samples(points + shift) - self.scalar_samples(points - shift)
            ) / (2.0 * step)
        return -gradient

    def sampled_b_field(self, points, step: float) -> np.ndarray:
        """中心差分 ∇×A"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        # jacobian[n, i, j] = ∂_j A_i
        jacobian = np.zeros((len(points), 3, 3))
        for axis in range(3):
            shift = np.zeros(3)
            shift[axis] = step
            jacobian[:, :, axis] = (
                self.vector_samples(points + shift) - self.vector_samples(points - shift)
            ) / (2.0 * step)
        return np.stack(
            [
                jacobian[:, 2, 1] - jacobian[:, 1, 2],
                jacobian[:, 0, 2] - jacobian[:, 2, 0],
                jacobian[:, 1, 0] - jacobian[:, 0, 1],
            ],
            axis=1,
        )

    def consistency_residuals(self, points, step: float) -> Dict[str, float]:
        """E、B 与势在采样点上的偏差"""
        e_residual = b_residual = e_spread = 0.0
        if self.has_scalar_potential:
            sampled = self.sampled_e_field(points, step)
            e_residual = float(np.max(np.abs(sampled.mean(axis=0) - self.e_field)))
            e_spread = float(np.max(np.ptp(sampled, axis=0)))
        if self.has_vector_potential:
            sampled = self.sampled_b_field(points, step)
            b_residual = float(np.max(np.abs(sampled.mean(axis=0) - self.b_field)))
        return {"e_residual": e_residual, "b_residual": b_residual, "e_spread": e_spread}

    def probe_points(self, half_width: float = 1.0, count: int = 3) -> np.ndarray:
        """无基组时用于检查均匀性的小立方网格"""
        axis = np.linspace(-half_width, half_width, count)
        mesh = np.meshgrid(axis, axis, axis, indexing="ij")
        return np.stack([m.reshape(-1) for m in mesh], axis=1)


@dataclass(frozen=True)
class Grid1D:
    """周期边界一维格点，x_j = (j − n/2)·a"""
    n_points: int
    spacing: float
    boundary: str = "periodic"

    def __post_init__(self):
        max_points = get_settings().lattice.max_points
        if self.boundary != "periodic":
            raise InvalidLatticeError(f"仅支持周期边界，收到 {self.boundary}")
        if int(self.n_points) != self.n_points or self.n_points < 16:
            raise InvalidLatticeError(f"格点数必须为不小于 16 的整数，收到 {self.n_points}")
        if self.n_points % 2:
            raise InvalidLatticeError(f"格点数必须为偶数，收到 {self.n_points}")
        if self.n_points > max_points:
            raise InvalidLatticeError(f"格点数 {self.n_points} 超过稠密求解上限 {max_points}")
        if not (self.spacing > 0 and np.isfinite(self.spacing)):
            raise InvalidLatticeError(f"格距必须为正，收到 {self.spacing}")
        object.__setattr__(self, "n_points", int(self.n_points))
        object.__setattr__(self, "spacing", float(self.spacing))

    @property
    def length(self) -> float:
        return self.n_points * self.spacing

    @property
    def coordinates(self) -> np.ndarray:
        return (np.arange(self.n_points) - self.n_points // 2) * self.spacing

    @property
    def link_midpoints(self) -> np.ndarray:
        return self.coordinates + 0.5 * self.spacing

    @property
    def momenta(self) -> np.ndarray:
        """格点允许的动量 2π·fftfreq"""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)

    def sample_points(self) -> np.ndarray:
        points = np.zeros((self.n_points, 3))
        points[:, 0] = self.coordinates
        return points

    def hopping(self, links: Optional[np.ndarray] = None) -> np.ndarray:
        """前向跳跃矩阵 T[j, j+1 mod n] = U_j"""
        n = self.n_points
        matrix = np.zeros((n, n), dtype=complex)
        index = np.arange(n)
        matrix[index, (index + 1) % n] = 1.0 if links is None else links
        return matrix


@dataclass(frozen=True)
class PlaneWaveBasis:
    """周期盒中的平面波基组，每个轴 n_modes 个模式"""
    box_length: float
    n_modes: int
    dimension: int = 3

    def __post_init__(self):
        if not self.box_length > 0:
            raise BoostkitError(f"盒长必须为正，收到 {self.box_length}")
        if self.n_modes < 1:
            raise BoostkitError(f"模式数必须为正，收到 {self.n_modes}")
        if self.dimension not in (1, 2, 3):
            raise BoostkitError(f"维数必须为 1、2 或 3，收到 {self.dimension}")
        if self.size > get_settings().lattice.max_points:
            raise BoostkitError(f"平面波数 {self.size} 超过稠密求解上限")

    label = "plane_wave"

    @property
    def size(self) -> int:
        return int(self.n_modes) ** int(self.dimension)

    def kinetic_mass(self, mass: float) -> float:
        return mass

    def _product(self, axis_values: np.ndarray) -> np.ndarray:
        mesh = np.meshgrid(*([axis_values] * self.dimension), indexing="ij")
        out = np.zeros((self.size, 3))
        for i, values in enumerate(mesh):
            out[:, i] = values.reshape(-1)
        return out

    @property
    def momenta(self) -> np.ndarray:
        """形状 (size, 3) 的波矢"""
        spacing = self.box_length / self.n_modes
        return self._product(2.0 * np.pi * np.fft.fftfreq(self.n_modes, d=spacing))

    def sample_points(self) -> np.ndarray:
        axis = self.box_length * np.arange(self.n_modes) / self.n_modes - 0.5 * self.box_length
        return self._product(axis)

    def dft_matrix(self) -> np.ndarray:
        """幺正 DFT，F[j, k] = exp(i k·x_j)/√N"""
        phase = self.sample_points() @ self.momenta.T
        return np.exp(1j * phase) / np.sqrt(self.size)

    def project(self, samples: np.ndarray) -> np.ndarray:
        """实空间乘法算符在平面波基下的矩阵 F† diag(V) F"""
        dft = self.dft_matrix()
        return dft.conj().T @ (samples[:, None] * dft)

    def scalar_hamiltonian(self, cfg: FieldConfig) -> np.ndarray:
        """(p − eA)²/2m + eΦ"""
        momenta = self.momenta
        mass = self.kinetic_mass(cfg.mass)
        if cfg.has_vector_potential:
            samples = cfg.vector_samples(self.sample_points())
            kinetic = np.zeros((self.size, self.size), dtype=complex)
            for axis in range(3):
                if callable(cfg.vector_potential):
                    a_axis = self.project(samples[:, axis])
                else:
                    a_axis = cfg.vector_potential[axis] * np.eye(self.size)
                d = np.diag(momenta[:, axis]).astype(complex) - cfg.charge * a_axis
                kinetic += d @ d
            kinetic /= 2.0 * mass
        else:
            kinetic = np.diag(np.sum(momenta ** 2, axis=1) / (2.0 * mass)).astype(complex)

        if callable(cfg.scalar_potential):
            kinetic = kinetic + cfg.charge * self.project(cfg.scalar_samples(self.sample_points()))
        elif cfg.has_scalar_potential:
            kinetic = kinetic + cfg.charge * cfg.scalar_potential * np.eye(self.size)
        return kinetic

    def field_residuals(self, cfg: FieldConfig) -> Dict[str, float]:
        step = 1e-4 * self.box_length / self.n_modes
        return cfg.consistency_residuals(self.sample_points(), step)


@dataclass(frozen=True)
class LatticeBasis:
    """一维 Wilson 格点基组（仅 A_x 通过 Peierls 相位进入）"""
    grid: Grid1D
    wilson_r: float = 1.0

    label = "lattice"

    def __post_init__(self):
        if not 0.0 <= self.wilson_r <= 1.0:
            raise InvalidLatticeError(f"wilson_r 必须在 [0, 1] 内，收到 {self.wilson_r}")

    @property
    def size(self) -> int:
        return self.grid.n_points

    def kinetic_mass(self, mass: float) -> float:
        """m/(1 + m·r·a)，与 Wilson 格点 Dirac 色散的非相对论极限一致"""
        return mass / (1.0 + mass * self.wilson_r * self.grid.spacing)

    def sample_points(self) -> np.ndarray:
        return self.grid.sample_points()

    def covariant_laplacian(self, cfg: FieldConfig) -> np.ndarray:
        hop = self.grid.hopping(cfg.link_phases(self.grid))
        n = self.size
        return (hop + hop.conj().T - 2.0 * np.eye(n)) / self.grid.spacing ** 2

    def scalar_hamiltonian(self, cfg: FieldConfig) -> np.ndarray:
        kinetic = -self.covariant_laplacian(cfg) / (2.0 * self.kinetic_mass(cfg.mass))
        potential = cfg.charge * cfg.scalar_samples(self.sample_points())
        return kinetic + np.diag(potential)

    def field_residuals(self, cfg: FieldConfig) -> Dict[str, float]:
        """周期差分：导数的平均值在周期格点上严格抵消"""
        a = self.grid.spacing
        points = self.sample_points()
        e_residual = b_residual = e_spread = 0.0
        if cfg.has_scalar_potential:
            phi = cfg.scalar_samples(points)
            e_x = -(np.roll(phi, -1) - np.roll(phi, 1)) / (2.0 * a)
            e_residual = abs(float(e_x.mean()) - float(cfg.e_field[0]))
            e_spread = float(np.ptp(e_x))
        if cfg.has_vector_potential:
            vec = cfg.vector_samples(points)
            d_ay = (np.roll(vec[:, 1], -1) - np.roll(vec[:, 1], 1)) / (2.0 * a)
            d_az = (np.roll(vec[:, 2], -1) - np.roll(vec[:, 2], 1)) / (2.0 * a)
            b_residual = max(
                abs(float(d_ay.mean()) - float(cfg.b_field[2])),
                abs(-float(d_az.mean()) - float(cfg.b_field[1])),
            )
        return {"e_residual": e_residual, "b_residual": b_residual, "e_spread": e_spread}
