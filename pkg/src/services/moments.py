"""四维轨道角动量张量、电磁矩张量与多极展开"""

from typing import Iterable, Union

import numpy as np
from loguru import logger

from src.models.lorentz import RapidityVector
from src.models.particles import (
    ChargedParticle,
    MomentTensor,
    OrbitalTensor,
    ParticleSystem,
    StaticCurrentLoop,
)
from src.services.clifford import finite_vector_boost
from src.utils.exceptions import (
    BoostkitError,
    CoincidentPointError,
    MixedSystemError,
    SourceRadiusError,
)

Source = Union[ParticleSystem, StaticCurrentLoop]

FOUR_PI = 4.0 * np.pi

# 多极展开要求场点距离大于源半径的倍数
SOURCE_RADIUS_FACTOR = 3.0

# 判断电荷、速率、质量是否相同的相对容差
HOMOGENEITY_TOLERANCE = 1e-12

MULTIPOLE_ORDERS = ("monopole", "dipole")


def _coordinate_velocities(sys: ParticleSystem) -> np.ndarray:
    return np.array([p.coordinate_velocity for p in sys])


def orbital_tensor(sys: ParticleSystem) -> OrbitalTensor:
    """L^μν = Σ (x^μ p^ν − x^ν p^μ)"""
    momenta = np.array([p.four_momentum for p in sys])
    outer = np.einsum("nm,nv->mv", sys.positions, momenta)
    return OrbitalTensor(outer - outer.T)


def moment_tensor(sys: ParticleSystem) -> MomentTensor:
    """M^μν = ½ Σ e (x^μ ẋ^ν − x^ν ẋ^μ)，ẋ = dx/dt = (1, v)

    δ 函数电流 J^μ = Σ e (dx^μ/dt) δ³ 使积分坍缩为对粒子求和；等时 t = t′。
    """
    outer = 0.5 * np.einsum("n,nm,nv->mv", sys.charges, sys.positions, _coordinate_velocities(sys))
    return MomentTensor(outer - outer.T)


def loop_moment_tensor(loop: StaticCurrentLoop) -> MomentTensor:
    """稳恒回路的矩张量：M^ik = ½ Σ I (x^i Δl^k − x^k Δl^i)，时间分量为零"""
    outer = 0.5 * np.einsum("ni,nk->ik", loop.midpoints, loop.current_elements)
    m = np.zeros((4, 4))
    m[1:, 1:] = outer - outer.T
    return MomentTensor(m)


def _same(values: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(values))))
    return float(np.ptp(values)) <= HOMOGENEITY_TOLERANCE * scale


def relativistic_mass(sys: ParticleSystem) -> float:
    """体系共同的 m′ = γ_v m；电荷、速率或静质量不一致时报错"""
    charges = sys.charges
    speeds = np.array([p.speed for p in sys])
    masses = np.array([p.rest_mass for p in sys])
    if not _same(charges):
        raise MixedSystemError(f"电荷不一致，M = (e/2m′)L 不适定: {sorted(set(charges.tolist()))}")
    if not _same(speeds):
        raise MixedSystemError(f"速率不一致，m′ 无法唯一确定: {sorted(set(speeds.tolist()))}")
    if not _same(masses):
        raise MixedSystemError(f"静质量不一致，m′ 无法唯一确定: {sorted(set(masses.tolist()))}")
    return sys.particles[0].relativistic_mass


def verify_moment_relation(sys: ParticleSystem) -> float:
    """max |M^μν − (e/2m′) L^μν|"""
    m_prime = relativistic_mass(sys)
    charge = sys.particles[0].charge
    residual = np.max(np.abs(moment_tensor(sys).m - charge / (2.0 * m_prime) * orbital_tensor(sys).l))
    logger.debug(f"M–L 关系残差: {residual:.3e}（{len(sys)} 个粒子，m′ = {m_prime}）")
    return float(residual)


def magnetic_moment(m: MomentTensor) -> np.ndarray:
    """(M^23, M^31, M^12)"""
    return np.array([m.m[2, 3], m.m[3, 1], m.m[1, 2]])


def electric_moment(m: MomentTensor) -> np.ndarray:
    """(M^01, M^02, M^03)"""
    return np.array(m.m[0, 1:])


def source_radius(source: Source) -> float:
    """以原点为中心包住全部源的半径"""
    if isinstance(source, ParticleSystem):
        return float(np.max(np.linalg.norm(source.positions[:, 1:], axis=1)))
    half = 0.5 * np.linalg.norm(source.dl, axis=1)
    return float(np.max(np.linalg.norm(source.midpoints, axis=1) + half))


def _field_point(field_point) -> np.ndarray:
    point = np.asarray(field_point, dtype=float).reshape(-1)
    if point.shape != (3,):
        raise BoostkitError(f"场点应为三维矢量，收到 {point.shape}")
    return point


def multipole_potential(source: Source, field_point, order: str = "dipole") -> np.ndarray:
    """静态极限下四维势 A^μ 的单极 + 偶极近似

    粒子：A^μ = Σ e ẋ^μ [1/|x| + x·xₙ/|x|³] / 4π
    回路：单极项 Σ IΔl/4π|x|，偶极项通过反对称矩 M^ik 写成 Σ xᵢ M^ik / 4π|x|³
    """
    if order not in MULTIPOLE_ORDERS:
        raise BoostkitError(f"不支持的展开阶数 {order!r}，可选: {', '.join(MULTIPOLE_ORDERS)}")
    point = _field_point(field_point)
    distance = float(np.linalg.norm(point))
    radius = source_radius(source)
    if distance <= SOURCE_RADIUS_FACTOR * radius:
        raise SourceRadiusError(
            f"场点距离 {distance:.6g} 未超过源半径 {radius:.6g} 的 {SOURCE_RADIUS_FACTOR:g} 倍，展开不收敛"
        )

    potential = np.zeros(4)
    if isinstance(source, ParticleSystem):
        weights = source.charges[:, None] * _coordinate_velocities(source)
        potential += weights.sum(axis=0) / (FOUR_PI * distance)
        if order == "dipole":
            projections = source.positions[:, 1:] @ point
            potential += (projections[:, None] * weights).sum(axis=0) / (FOUR_PI * distance ** 3)
        return potential

    potential[1:] += source.current_elements.sum(axis=0) / (FOUR_PI * distance)
    if order == "dipole":
        spatial = loop_moment_tensor(source).m[1:, 1:]
        potential[1:] += point @ spatial / (FOUR_PI * distance ** 3)
    return potential


def exact_potential_oracle(source: Source, field_point) -> np.ndarray:
    """直接求和 Σ e ẋ^μ / 4π|x − xₙ|（回路按线段中点求和）"""
    point = _field_point(field_point)
    if isinstance(source, ParticleSystem):
        locations = source.positions[:, 1:]
        weights = source.charges[:, None] * _coordinate_velocities(source)
    else:
        locations = source.midpoints
        weights = np.zeros((len(source), 4))
        weights[:, 1:] = source.current_elements

    distances = np.linalg.norm(point - locations, axis=1)
    scale = max(1.0, float(np.linalg.norm(point)))
    if np.any(distances <= 1e-12 * scale):
        index = int(np.argmin(distances))
        raise CoincidentPointError(f"场点与第 {index} 个源点重合")
    return (weights / distances[:, None]).sum(axis=0) / FOUR_PI


def multipole_relative_error(source: Source, field_point, order: str = "dipole") -> float:
    """|A_multipole − A_exact| / |A_exact|"""
    exact = exact_potential_oracle(source, field_point)
    approx = multipole_potential(source, field_point, order)
    return float(np.linalg.norm(approx - exact) / np.linalg.norm(exact))


def check_antisymmetry_identity(loop: StaticCurrentLoop) -> float:
    """max_{μν} |Σ I (x_μ Δl_ν + x_ν Δl_μ)|，相对于 Σ |I||x||Δl|"""
    if not loop.is_closed:
        logger.warning(f"回路未闭合（闭合残差 {loop.closure_residual:.3e}），恒等式前提不成立")
    outer = np.einsum("ni,nk->ik", loop.midpoints, loop.current_elements)
    symmetric = outer + outer.T
    scale = float(np.sum(
        np.abs(loop.currents) * np.linalg.norm(loop.midpoints, axis=1) * np.linalg.norm(loop.dl, axis=1)
    ))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(symmetric))) / scale


def boost_system(sys: ParticleSystem, eta) -> ParticleSystem:
    """对全部粒子作 boost，并沿各自世界线同步到原点事件的新时刻 Λ⁰₀·t"""
    boost = finite_vector_boost(eta if isinstance(eta, RapidityVector) else RapidityVector(eta))
    target_time = boost.lam[0, 0] * sys.common_time
    boosted = []
    for particle in sys:
        position = boost.apply(particle.position)
        momentum = boost.apply(particle.four_momentum)
        velocity = momentum[1:] / momentum[0]
        shifted = position.copy()
        shifted[1:] += velocity * (target_time - position[0])
        shifted[0] = target_time
        boosted.append(ChargedParticle.from_four_momentum(
            particle.rest_mass, particle.charge, shifted, momentum,
        ))
    return ParticleSystem(tuple(boosted))


def merge_systems(systems: Iterable[ParticleSystem]) -> ParticleSystem:
    particles = []
    for system in systems:
        particles.extend(system.particles)
    return ParticleSystem(tuple(particles))


# ---- 测试与场景用的构造器 ----

def dipole_pair(charge: float, separation: float, mass: float = 1.0) -> ParticleSystem:
    """+e 位于 (0, 0, d/2)，−e 位于 (0, 0, −d/2)，静止"""
    half = 0.5 * separation
    return ParticleSystem((
        ChargedParticle(mass, charge, [0.0, 0.0, 0.0, half], [0.0, 0.0, 0.0]),
        ChargedParticle(mass, -charge, [0.0, 0.0, 0.0, -half], [0.0, 0.0, 0.0]),
    ))


def charge_ring(count: int, radius: float, speed: float, charge: float = 1.0, mass: float = 1.0) -> ParticleSystem:
    """xy 平面内等距分布、沿切向逆时针运动的电荷"""
    angles = 2.0 * np.pi * np.arange(count) / count
    particles = []
    for angle in angles:
        c, s = np.cos(angle), np.sin(angle)
        particles.append(ChargedParticle(
            mass, charge, [0.0, radius * c, radius * s, 0.0], [-speed * s, speed * c, 0.0]
        ))
    return ParticleSystem(tuple(particles))


def square_loop(side: float, current: float = 1.0, segments_per_side: int = 10) -> StaticCurrentLoop:
    """xy 平面内以原点为中心、逆时针电流的正方形回路"""
    half = 0.5 * side
    corners = np.array([[half, -half, 0.0], [half, half, 0.0], [-half, half, 0.0], [-half, -half, 0.0]])
    midpoints, dls = [], []
    for i in range(4):
        start, end = corners[i], corners[(i + 1) % 4]
        step = (end - start) / segments_per_side
        for j in range(segments_per_side):
            midpoints.append(start + (j + 0.5) * step)
            dls.append(step)
    return StaticCurrentLoop(midpoints=midpoints, dl=dls, currents=np.full(len(dls), current))


def circular_loop(radius: float, current: float = 1.0, segments: int = 360) -> StaticCurrentLoop:
    """xy 平面内的圆形回路，用切向线段近似"""
    angles = 2.0 * np.pi * (np.arange(segments) + 0.5) / segments
    length = 2.0 * np.pi * radius / segments
    midpoints = radius * np.stack([np.cos(angles), np.sin(angles), np.zeros(segments)], axis=1)
    dls = length * np.stack([-np.sin(angles), np.cos(angles), np.zeros(segments)], axis=1)
    return StaticCurrentLoop(midpoints=midpoints, dl=dls, currents=np.full(segments, current))


def open_loop(loop: StaticCurrentLoop, dropped: int = 1) -> StaticCurrentLoop:
    """去掉末尾若干线段得到的开放回路"""
    keep = len(loop) - dropped
    return StaticCurrentLoop(
        midpoints=loop.midpoints[:keep], dl=loop.dl[:keep], currents=loop.currents[:keep]
    )
