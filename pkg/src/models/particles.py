"""带电粒子体系与矩张量模型"""

from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

import numpy as np

from src.utils.linalg import readonly
from src.utils.exceptions import BoostkitError, InvalidParticleError

# 同时性判定容差
COMMON_TIME_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ChargedParticle:
    """带电粒子（自然单位）"""
    rest_mass: float
    charge: float
    position: np.ndarray
    velocity3: np.ndarray

    def __post_init__(self):
        if not self.rest_mass > 0:
            raise InvalidParticleError(f"静质量必须为正，收到 {self.rest_mass}")
        position = np.asarray(self.position, dtype=float).reshape(-1)
        velocity = np.asarray(self.velocity3, dtype=float).reshape(-1)
        if position.shape != (4,):
            raise InvalidParticleError(f"位置应为四矢量 (t, x, y, z)，收到 {position.shape}")
        if velocity.shape != (3,):
            raise InvalidParticleError(f"速度应为三矢量，收到 {velocity.shape}")
        if not (np.all(np.isfinite(position)) and np.all(np.isfinite(velocity))):
            raise InvalidParticleError("位置和速度分量必须有限")
        if float(velocity @ velocity) >= 1.0:
            raise InvalidParticleError(f"速率必须小于光速，|v| = {np.linalg.norm(velocity)}")
        object.__setattr__(self, "rest_mass", float(self.rest_mass))
        object.__setattr__(self, "charge", float(self.charge))
        object.__setattr__(self, "position", readonly(position))
        object.__setattr__(self, "velocity3", readonly(velocity))

    @property
    def time(self) -> float:
        return float(self.position[0])

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.velocity3))

    @property
    def gamma(self) -> float:
        """γ_v = 1/√(1 − v²)"""
        return 1.0 / np.sqrt(1.0 - float(self.velocity3 @ self.velocity3))

    @property
    def coordinate_velocity(self) -> np.ndarray:
        """dx^μ/dt = (1, v)"""
        return np.concatenate(([1.0], self.velocity3))

    @property
    def four_velocity(self) -> np.ndarray:
        """u^μ = γ_v (1, v)"""
        return self.gamma * self.coordinate_velocity

    @property
    def four_momentum(self) -> np.ndarray:
        """p^μ = m u^μ"""
        return self.rest_mass * self.four_velocity

    @property
    def relativistic_mass(self) -> float:
        """m' = γ_v m"""
        return self.gamma * self.rest_mass

    @classmethod
    def from_four_momentum(cls, rest_mass: float, charge: float, position, momentum) -> "ChargedParticle":
        momentum = np.asarray(momentum, dtype=float)
        return cls(rest_mass=rest_mass, charge=charge, position=position,
                   velocity3=momentum[1:] / momentum[0])

    def to_dict(self):
        """转换为字典"""
        return {
            "mass": self.rest_mass,
            "charge": self.charge,
            "t": float(self.position[0]),
            "x": float(self.position[1]),
            "y": float(self.position[2]),
            "z": float(self.position[3]),
            "vx": float(self.velocity3[0]),
            "vy": float(self.velocity3[1]),
            "vz": float(self.velocity3[2]),
        }

    @classmethod
    def from_dict(cls, data):
        """从字典创建实例"""
        return cls(
            rest_mass=data["mass"],
            charge=data["charge"],
            position=[data.get("t", 0.0), data["x"], data["y"], data["z"]],
            velocity3=[data.get("vx", 0.0), data.get("vy", 0.0), data.get("vz", 0.0)],
        )


@dataclass(frozen=True)
class ParticleSystem:
    """同一时刻采样的带电粒子体系"""
    particles: Tuple[ChargedParticle, ...]

    def __post_init__(self):
        particles = tuple(self.particles)
        if not particles:
            raise BoostkitError("粒子体系不能为空")
        t0 = particles[0].time
        for particle in particles[1:]:
            if abs(particle.time - t0) > COMMON_TIME_TOLERANCE * max(1.0, abs(t0)):
                raise BoostkitError(f"所有粒子须在同一时刻采样: {t0} 与 {particle.time}")
        object.__setattr__(self, "particles", particles)

    @property
    def common_time(self) -> float:
        return self.particles[0].time

    def __len__(self) -> int:
        return len(self.particles)

    def __iter__(self):
        return iter(self.particles)

    @property
    def positions(self) -> np.ndarray:
        return np.array([p.position for p in self.particles])

    @property
    def charges(self) -> np.ndarray:
        return np.array([p.charge for p in self.particles])

    def merge(self, other: "ParticleSystem") -> "ParticleSystem":
        return ParticleSystem(self.particles + other.particles)


@dataclass(frozen=True)
class OrbitalTensor:
    """4D 总轨道角动量张量 L^μν"""
    l: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "l", readonly(_antisymmetric(self.l, "L")))

    def __getitem__(self, index) -> float:
        return float(self.l[index])


@dataclass(frozen=True)
class MomentTensor:
    """电磁矩张量 M^μν"""
    m: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "m", readonly(_antisymmetric(self.m, "M")))

    def __getitem__(self, index) -> float:
        return float(self.m[index])

    def __add__(self, other: "MomentTensor") -> "MomentTensor":
        return MomentTensor(self.m + other.m)


@dataclass(frozen=True)
class LoopSegment:
    """直线电流段"""
    midpoint: np.ndarray
    dl: np.ndarray
    current: float


@dataclass(frozen=True)
class StaticCurrentLoop:
    """离散为直线段的稳恒电流回路"""
    midpoints: np.ndarray
    dl: np.ndarray
    currents: np.ndarray
    closure_tolerance: float = field(default=1e-9)

    def __post_init__(self):
        midpoints = np.asarray(self.midpoints, dtype=float).reshape(-1, 3)
        dl = np.asarray(self.dl, dtype=float).reshape(-1, 3)
        currents = np.asarray(self.currents, dtype=float).reshape(-1)
        if not (len(midpoints) == len(dl) == len(currents)) or len(midpoints) == 0:
            raise BoostkitError("电流段的中点、长度矢量和电流数目必须一致且非空")
        object.__setattr__(self, "midpoints", readonly(midpoints))
        object.__setattr__(self, "dl", readonly(dl))
        object.__setattr__(self, "currents", readonly(currents))

    @classmethod
    def from_segments(cls, segments: Iterable[LoopSegment]) -> "StaticCurrentLoop":
        segments = list(segments)
        return cls(
            midpoints=[s.midpoint for s in segments],
            dl=[s.dl for s in segments],
            currents=[s.current for s in segments],
        )

    @property
    def segments(self) -> List[LoopSegment]:
        return [LoopSegment(m, d, float(c)) for m, d, c in zip(self.midpoints, self.dl, self.currents)]

    @property
    def current_elements(self) -> np.ndarray:
        """I·Δl"""
        return self.currents[:, None] * self.dl

    @property
    def closure_residual(self) -> float:
        """|Σ I Δl| / Σ |I| |Δl|"""
        scale = float(np.sum(np.abs(self.currents) * np.linalg.norm(self.dl, axis=1)))
        if scale == 0.0:
            return 0.0
        return float(np.linalg.norm(self.current_elements.sum(axis=0))) / scale

    @property
    def is_closed(self) -> bool:
        return self.closure_residual <= self.closure_tolerance

    def __len__(self) -> int:
        return len(self.currents)


def _antisymmetric(matrix, name: str) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (4, 4):
        raise BoostkitError(f"{name} 应为 4×4，收到 {matrix.shape}")
    if not np.array_equal(matrix, -matrix.T):
        raise BoostkitError(f"{name}^μν 必须严格反对称")
    return matrix
