"""一维格点 Dirac 求解器

H = σ₁ ⊗ P + σ₃ ⊗ (m + W) + I ⊗ eΦ，周期边界，A_x 通过 Peierls 链接相位进入，
Wilson 项 W = −(r/2a)(T + T† − 2) 去除倍增子。
"""

from typing import Dict, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.linalg import eigh

from config.settings import get_settings
from src.models.fields import FieldConfig, Grid1D, LatticeBasis
from src.models.operators import LatticeDiracOperator, NonRelComparison, SecondOrderOperator
from src.services.pauli import build_h0
from src.utils.exceptions import (
    BoostkitError,
    InvalidLatticeError,
    PreconditionError,
    RelativisticRegimeError,
    TimeDependentFieldError,
)
from src.utils.linalg import SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3, commutator, max_entry


def _resolve_wilson(wilson_r: Optional[float], allow_doublers: bool) -> float:
    wilson_r = get_settings().lattice.wilson_r if wilson_r is None else float(wilson_r)
    if allow_doublers and wilson_r == 0.0:
        return wilson_r
    if not 0.0 < wilson_r <= 1.0:
        raise InvalidLatticeError(f"wilson_r 必须在 (0, 1] 内，收到 {wilson_r}")
    return wilson_r


def _assemble(
    grid: Grid1D,
    mass: float,
    charge: float,
    wilson_r: float,
    links: np.ndarray,
    potential: np.ndarray,
) -> LatticeDiracOperator:
    a = grid.spacing
    n = grid.n_points
    hop = grid.hopping(links)
    hop_dagger = hop.conj().T
    momentum = -1j * (hop - hop_dagger) / (2.0 * a)
    wilson = -(wilson_r / (2.0 * a)) * (hop + hop_dagger - 2.0 * np.eye(n))
    mass_term = mass * np.eye(n) + wilson
    matrix = (
        np.kron(SIGMA_1, momentum)
        + np.kron(SIGMA_3, mass_term)
        + np.kron(SIGMA_0, np.diag(potential).astype(complex))
    )
    return LatticeDiracOperator(
        matrix=matrix,
        grid=grid,
        wilson_r=wilson_r,
        mass=mass,
        charge=charge,
        links=links,
        momentum=momentum,
        wilson=wilson,
        potential=potential,
    )


def build_dirac_1d(
    grid: Grid1D,
    cfg: FieldConfig,
    wilson_r: Optional[float] = None,
    allow_doublers: bool = False,
) -> LatticeDiracOperator:
    """离散化 H = α(p̂ − eA) + βm + eΦ；allow_doublers 仅用于 r = 0 的倍增子回归检查"""
    wilson_r = _resolve_wilson(wilson_r, allow_doublers)
    links = cfg.link_phases(grid)
    potential = cfg.charge * cfg.scalar_samples(grid.sample_points())
    op = _assemble(grid, cfg.mass, cfg.charge, wilson_r, links, potential)
    logger.debug(f"构造格点 Dirac 算符: n = {grid.n_points}，a = {grid.spacing}，r = {wilson_r}")
    return op


def spectrum(op: LatticeDiracOperator) -> np.ndarray:
    """升序实本征值"""
    return eigh(op.matrix, eigvals_only=True)


def lattice_dispersion(k, mass: float, spacing: float, wilson_r: float) -> np.ndarray:
    """E(k)² = (m + (r/a)(1 − cos ka))² + sin²(ka)/a²"""
    ka = np.asarray(k, dtype=float) * spacing
    return np.sqrt((mass + (wilson_r / spacing) * (1.0 - np.cos(ka))) ** 2 + np.sin(ka) ** 2 / spacing ** 2)


def _effective_momenta(op: LatticeDiracOperator) -> np.ndarray:
    """k − eA，折回第一 Brillouin 区"""
    a = op.grid.spacing
    shifted = op.grid.momenta + np.angle(op.links[0]) / a
    return np.angle(np.exp(1j * shifted * a)) / a


def _require_free(op: LatticeDiracOperator) -> None:
    if not (op.has_uniform_links and op.has_uniform_potential):
        raise PreconditionError("色散检查要求常矢势与常标势")


def free_dispersion_residual(op: LatticeDiracOperator) -> float:
    """数值谱与解析格点色散 ±E(k − eA) + eΦ 的最大偏差"""
    _require_free(op)
    energies = lattice_dispersion(_effective_momenta(op), op.mass, op.grid.spacing, op.wilson_r)
    analytic = np.sort(np.concatenate([-energies, energies]) + op.potential[0])
    return float(np.max(np.abs(spectrum(op) - analytic)))


def continuum_deviation(op: LatticeDiracOperator, max_ka: float = 0.3) -> float:
    """|ka| ≤ max_ka 的正能本征值相对 √(k² + m²) 的最大相对偏差"""
    _require_free(op)
    if op.wilson_r == 0.0:
        raise PreconditionError("r = 0 时倍增子使正能分支无法按 |k| 排序")
    a = op.grid.spacing
    values = spectrum(op) - op.potential[0]
    positive = np.sort(values[values > 0.0])
    momenta = np.sort(np.abs(_effective_momenta(op)))
    mask = momenta * a <= max_ka + 1e-12
    if not np.any(mask):
        raise PreconditionError(f"没有满足 |ka| ≤ {max_ka} 的格点动量")
    continuum = np.sqrt(momenta[mask] ** 2 + op.mass ** 2)
    return float(np.max(np.abs(positive[mask] - continuum) / continuum))


def count_low_modes(op: LatticeDiracOperator, window: float) -> int:
    """|E − eΦ| ≤ m + window 的本征值个数（倍增子计数）"""
    values = spectrum(op) - op.potential[0]
    return int(np.sum(np.abs(values) <= op.mass + window))


def gauge_shift(grid: Grid1D, charge: float, winding: int = 1) -> float:
    """周期格点上允许的常矢势平移 δA = 2πn/(eL)"""
    if charge == 0.0:
        raise BoostkitError("电荷为零时规范平移无意义")
    return 2.0 * np.pi * winding / (charge * grid.length)


def gauge_transform(op: LatticeDiracOperator, delta_a: float) -> Tuple[LatticeDiracOperator, np.ndarray]:
    """A → A + δA，返回新算符与本征矢的相位因子 exp(i e δA x_j)"""
    grid = op.grid
    winding = op.charge * delta_a * grid.length / (2.0 * np.pi)
    if abs(winding - round(winding)) > 1e-9:
        raise InvalidLatticeError(f"δA = {delta_a} 在周期格点上不是纯规范（绕数 {winding:.6g}）")
    links = op.links * np.exp(-1j * op.charge * grid.spacing * delta_a)
    shifted = _assemble(grid, op.mass, op.charge, op.wilson_r, links, np.array(op.potential))
    phases = np.tile(np.exp(1j * op.charge * delta_a * grid.coordinates), 2)
    return shifted, phases


def gauge_covariance_residual(op: LatticeDiracOperator, winding: int = 1) -> Dict[str, float]:
    """谱不变性与本征矢相位变换的残差"""
    shifted, phases = gauge_transform(op, gauge_shift(op.grid, op.charge, winding))
    values, vectors = eigh(op.matrix)
    rotated = phases[:, None] * vectors
    eigen_residual = max_entry(shifted.matrix @ rotated - rotated * values[None, :])
    spectrum_residual = float(np.max(np.abs(spectrum(shifted) - values)))
    return {"spectrum": spectrum_residual, "eigenvectors": eigen_residual}


def second_order_operator(
    grid: Grid1D,
    cfg: FieldConfig,
    wilson_r: Optional[float] = None,
) -> SecondOrderOperator:
    """Q = (P² + M²)⊗I − iσ₂⊗[P, M] + σ₁⊗[P, eΦ] + σ₃⊗[W, eΦ]

    σ₁⊗[P, eΦ] 是格点上的 S^{01}F_{01}（K·E）项；对 H 的任一本征对有 (ε − eΦ)²ψ = Qψ。
    """
    if not cfg.static:
        raise TimeDependentFieldError("二阶算符要求静态场")
    op = build_dirac_1d(grid, cfg, wilson_r)
    p, m, w = op.momentum, op.mass_term, op.wilson
    v = op.potential_matrix
    return SecondOrderOperator(
        klein_gordon=np.kron(SIGMA_0, p @ p + m @ m),
        cross_term=-1j * np.kron(SIGMA_2, commutator(p, m)),
        spin_field=np.kron(SIGMA_1, commutator(p, v)),
        wilson_field=np.kron(SIGMA_3, commutator(w, v)),
    )


def second_order_residual(op: LatticeDiracOperator, q: SecondOrderOperator) -> float:
    """max |(ε − eΦ)²ψ − Qψ| 对 H 的全部本征对"""
    values, vectors = eigh(op.matrix)
    potential = np.tile(op.potential, 2)
    lhs = (values[None, :] - potential[:, None]) ** 2 * vectors
    return max_entry(lhs - q.matrix @ vectors)


def squared_spectrum_residual(op: LatticeDiracOperator, q: SecondOrderOperator) -> float:
    """常标势 c 下 spec(Q) 与 (spec(H) − c)² 的偏差"""
    if not op.has_uniform_potential:
        raise PreconditionError("谱平方比较要求常标势")
    shifted = np.sort((spectrum(op) - op.potential[0]) ** 2)
    return float(np.max(np.abs(eigh(q.matrix, eigvals_only=True) - shifted)))


def square_well(depth: float, width: float, charge: float = 1.0):
    """|x| < width/2 内 eΦ = −depth 的方势阱"""
    def potential(x, y, z):
        return np.where(np.abs(x) < 0.5 * width, -depth / charge, 0.0)
    return potential


def _ground_states(grid: Grid1D, cfg: FieldConfig, wilson_r: float) -> Tuple[float, float]:
    op = build_dirac_1d(grid, cfg, wilson_r)
    n = grid.n_points
    lowest_positive = eigh(op.matrix, eigvals_only=True, subset_by_index=[n, n])[0]
    h0 = build_h0(cfg, LatticeBasis(grid=grid, wilson_r=wilson_r))
    pauli_ground = eigh(h0.matrix, eigvals_only=True, subset_by_index=[0, 0])[0]
    return float(lowest_positive - cfg.mass), float(pauli_ground)


def _box_decay(grid: Grid1D, well_width: float, mass: float, wilson_r: float, pauli_energy: float) -> float:
    """κ·(L − w)：基态尾部从阱边到周期像之间衰减的 e 倍数"""
    if pauli_energy >= 0.0:
        return float("inf")
    kappa = np.sqrt(2.0 * LatticeBasis(grid=grid, wilson_r=wilson_r).kinetic_mass(mass) * -pauli_energy)
    return float(kappa * max(grid.length - well_width, 0.0))


def nonrel_limit_compare(
    well_depth: float,
    well_width: float,
    m: float,
    grid: Optional[Grid1D] = None,
    wilson_r: Optional[float] = None,
    charge: float = 1.0,
) -> NonRelComparison:
    """方势阱中 E_Dirac − m 与格点 Pauli 基态的比较，并在 2m 处重复"""
    if well_depth < 0.0:
        raise BoostkitError(f"势阱深度不能为负，收到 {well_depth}")
    if well_depth >= 0.5 * m:
        raise RelativisticRegimeError(
            f"势阱深度 {well_depth} 不小于 m/2 = {0.5 * m}，超出非相对论区域"
        )
    if charge == 0.0:
        raise BoostkitError("电荷为零时势阱不起作用")
    settings = get_settings()
    if grid is None:
        grid = Grid1D(n_points=settings.lattice.nonrel_points, spacing=settings.lattice.nonrel_spacing)
    if wilson_r is None:
        wilson_r = settings.lattice.nonrel_wilson_r
    wilson_r = _resolve_wilson(wilson_r, allow_doublers=False)

    potential = square_well(well_depth, well_width, charge) if well_depth > 0.0 else None
    energies = []
    for mass in (m, 2.0 * m):
        cfg = FieldConfig(scalar_potential=potential, charge=charge, mass=mass)
        energies.append(_ground_states(grid, cfg, wilson_r))
        logger.debug(f"m = {mass}: E_D − m = {energies[-1][0]:.10e}，E_S = {energies[-1][1]:.10e}")

    comparison = NonRelComparison(
        well_depth=well_depth,
        well_width=well_width,
        mass=m,
        dirac_binding=energies[0][0],
        pauli_energy=energies[0][1],
        doubled_dirac_binding=energies[1][0],
        doubled_pauli_energy=energies[1][1],
        extras={"box_decay": _box_decay(grid, well_width, m, wilson_r, energies[0][1])},
    )
    logger.info(
        f"非相对论极限比较: 相对偏差 {comparison.relative_discrepancy}，"
        f"加倍质量后 {comparison.doubled_relative_discrepancy}，比值 {comparison.ratio}"
    )
    return comparison
