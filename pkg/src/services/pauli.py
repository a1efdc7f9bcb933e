"""半非相对论 Pauli 哈密顿量、ψ± 变换与静电能级分裂"""

from typing import Dict, Optional, Tuple, Union

import numpy as np
from loguru import logger
from scipy.optimize import linear_sum_assignment

from config.settings import get_settings
from src.models.fields import FieldConfig, Grid1D, LatticeBasis, PlaneWaveBasis
from src.models.operators import OperatorLabel, PauliOperator, SpectrumResult
from src.services.clifford import k_vector, make_gamma, sigma_vector, spin_tensor
from src.utils.exceptions import (
    BoostkitError,
    InconsistentFieldError,
    NonUniformFieldError,
    PreconditionError,
    TimeDependentFieldError,
)
from src.utils.linalg import SIGMA_0, commutator, max_entry, sigma_dot

Basis = Union[PlaneWaveBasis, LatticeBasis]

# ψ₊ = φ + χ，ψ₋ = φ − χ
PM_MATRIX = np.array([[1.0, 1.0], [1.0, -1.0]])


def check_consistency(cfg: FieldConfig, basis: Basis, tolerance: Optional[float] = None) -> Dict[str, float]:
    """在基组采样点上比较 −∇Φ、∇×A 的平均值与 E、B"""
    if not cfg.static:
        raise TimeDependentFieldError("仅支持静态场配置")
    tolerance = tolerance if tolerance is not None else get_settings().tolerances.field_consistency
    residuals = basis.field_residuals(cfg)
    e_scale = max(1.0, float(np.linalg.norm(cfg.e_field)))
    b_scale = max(1.0, float(np.linalg.norm(cfg.b_field)))
    if residuals["e_residual"] > tolerance * e_scale:
        raise InconsistentFieldError(f"E 与 −∇Φ 不一致，偏差 {residuals['e_residual']:.3e}")
    if residuals["b_residual"] > tolerance * b_scale:
        raise InconsistentFieldError(f"B 与 ∇×A 不一致，偏差 {residuals['b_residual']:.3e}")
    return residuals


def _require_uniform_e(cfg: FieldConfig, basis: Optional[Basis], tolerance: Optional[float] = None) -> None:
    if not cfg.has_scalar_potential:
        return
    tolerance = tolerance if tolerance is not None else get_settings().tolerances.field_consistency
    if basis is not None:
        spread = basis.field_residuals(cfg)["e_spread"]
    else:
        points = cfg.probe_points()
        spread = cfg.consistency_residuals(points, 1e-4)["e_spread"]
    if spread > tolerance * max(1.0, float(np.linalg.norm(cfg.e_field))):
        raise NonUniformFieldError(f"电场不均匀，−∇Φ 的变化幅度 {spread:.3e}")


def _spin_zeeman(cfg: FieldConfig) -> np.ndarray:
    """−(e/2m) σ·B"""
    return -0.5 * cfg.charge_to_mass * sigma_dot(cfg.b_field)


def _spin_electric(cfg: FieldConfig) -> np.ndarray:
    """i(e/2m) σ·E"""
    return 0.5j * cfg.charge_to_mass * sigma_dot(cfg.e_field)


def build_h0(cfg: FieldConfig, basis: Basis) -> PauliOperator:
    """Ĥ₀ = (p̂ − eA)²/2m + eΦ − (e/2m)σ·B"""
    check_consistency(cfg, basis)
    scalar = basis.scalar_hamiltonian(cfg)
    spin = _spin_zeeman(cfg)
    n = basis.size
    matrix = np.kron(SIGMA_0, scalar) + np.kron(spin, np.eye(n))
    logger.debug(f"构造 H0: 基组 {basis.label}，空间维数 {n}")
    return PauliOperator(matrix=matrix, label=OperatorLabel.H0, n_spatial=n, spin_blocks=spin, basis_label=basis.label)


def build_h1(cfg: FieldConfig, basis: Optional[Basis] = None) -> PauliOperator:
    """Ĥ₁ = i(e/2m)σ·E ⊗ I，要求 E 均匀；basis 为 None 时只返回 2×2 自旋算符"""
    _require_uniform_e(cfg, basis)
    return _h1(cfg, basis)


def _h1(cfg: FieldConfig, basis: Optional[Basis]) -> PauliOperator:
    spin = _spin_electric(cfg)
    n = 1 if basis is None else basis.size
    label = "spin" if basis is None else basis.label
    return PauliOperator(
        matrix=np.kron(spin, np.eye(n)), label=OperatorLabel.H1, n_spatial=n, spin_blocks=spin, basis_label=label
    )


def full_spin_coupling(cfg: FieldConfig) -> np.ndarray:
    """−(e/m)Σ·B + (e/m)K·E，Σ 与 K 取自 Dirac 表示的自旋张量"""
    s = spin_tensor(make_gamma("dirac"))
    sigmas, ks = sigma_vector(s), k_vector(s)
    ratio = cfg.charge_to_mass
    return (
        -ratio * np.einsum("i,iab->ab", cfg.b_field, sigmas)
        + ratio * np.einsum("i,iab->ab", cfg.e_field, ks)
    )


def build_full_pauli(cfg: FieldConfig, basis: Basis) -> PauliOperator:
    """四分量算符 (p̂ − eA)²/2m + eΦ − (e/m)Σ·B + (e/m)K·E"""
    check_consistency(cfg, basis)
    scalar = basis.scalar_hamiltonian(cfg)
    spin = full_spin_coupling(cfg)
    n = basis.size
    matrix = np.kron(np.eye(4), scalar) + np.kron(spin, np.eye(n))
    return PauliOperator(
        matrix=matrix, label=OperatorLabel.FULL, n_spatial=n, spin_components=4,
        spin_blocks=spin, basis_label=basis.label,
    )


def pm_transform(op: PauliOperator) -> PauliOperator:
    """(φ, χ) → (ψ₊, ψ₋) 基变换 T H T⁻¹，T⁻¹ = T/2"""
    if op.dimension % 2:
        raise BoostkitError(f"算符维数 {op.dimension} 不能分成两半")
    half = op.dimension // 2
    transform = np.kron(PM_MATRIX, np.eye(half))
    matrix = transform @ op.matrix @ transform / 2.0
    return PauliOperator(
        matrix=matrix, label=OperatorLabel.BLOCK, n_spatial=op.n_spatial,
        spin_components=op.spin_components, basis_label=op.basis_label,
    )


def off_block_residual(op: PauliOperator) -> float:
    """非对角块的最大元素"""
    return max(max_entry(op.block(0, 1)), max_entry(op.block(1, 0)))


def basis_change_pm(phi, chi) -> Tuple[np.ndarray, np.ndarray]:
    """ψ₊ = φ + χ，ψ₋ = φ − χ（不归一化）"""
    phi, chi = np.asarray(phi), np.asarray(chi)
    if phi.shape != chi.shape:
        raise BoostkitError(f"φ 与 χ 维数不一致: {phi.shape} vs {chi.shape}")
    return phi + chi, phi - chi


def inverse_basis_change_pm(psi_plus, psi_minus) -> Tuple[np.ndarray, np.ndarray]:
    """φ = (ψ₊ + ψ₋)/2，χ = (ψ₊ − ψ₋)/2"""
    plus, minus = basis_change_pm(psi_plus, psi_minus)
    return plus / 2.0, minus / 2.0


def check_commutation(cfg: FieldConfig, basis: Basis) -> float:
    """max |[Ĥ₀, Ĥ₁]|，对任意配置给出残差"""
    h0 = build_h0(cfg, basis)
    h1 = _h1(cfg, basis)
    residual = max_entry(commutator(h0.matrix, h1.matrix))
    logger.debug(f"[H0, H1] 残差: {residual:.3e}")
    return residual


def _pair_by_overlap(vectors_plus: np.ndarray, vectors_minus: np.ndarray) -> np.ndarray:
    """按本征矢重叠 |⟨v₊|v₋⟩|² 最大的方式配对，返回 minus 的排列"""
    overlap = np.abs(vectors_plus.conj().T @ vectors_minus) ** 2
    rows, cols = linear_sum_assignment(overlap, maximize=True)
    return cols[np.argsort(rows)]


def splitting_spectrum(
    cfg: FieldConfig,
    basis: Basis,
    hermitian_tolerance: Optional[float] = None,
) -> SpectrumResult:
    """对角化 diag(Ĥ₀ + Ĥ₁, Ĥ₀ − Ĥ₁)，按本征矢重叠配对，给出复数 ε₀、ε₁"""
    if np.any(cfg.b_field != 0.0):
        raise PreconditionError(f"能级分裂计算要求 B = 0，收到 B = {cfg.b_field.tolist()}")
    _require_uniform_e(cfg, basis)
    if hermitian_tolerance is None:
        hermitian_tolerance = get_settings().tolerances.hermitian

    h0 = build_h0(cfg, basis).matrix
    h1 = _h1(cfg, basis).matrix
    values_plus, vectors_plus = np.linalg.eig(h0 + h1)
    values_minus, vectors_minus = np.linalg.eig(h0 - h1)
    permutation = _pair_by_overlap(vectors_plus, vectors_minus)
    plus, minus = values_plus, values_minus[permutation]

    epsilon0 = 0.5 * (plus + minus)
    epsilon1 = 0.5 * (plus - minus)
    order = np.lexsort((-epsilon1.imag, np.round(epsilon0.real, 10)))
    result = SpectrumResult(plus=plus[order], minus=minus[order], hermitian_tolerance=hermitian_tolerance)
    logger.debug(
        f"能级分裂: {len(plus)} 对，|2ε₁| = {result.splitting_magnitude:.6e}，"
        f"预期 (e/m)|E| = {abs(cfg.charge_to_mass) * np.linalg.norm(cfg.e_field):.6e}"
    )
    return result


def make_basis(spec: Dict) -> Basis:
    """由场景中的基组描述构造基组"""
    if spec.get("type", "plane_wave") == "lattice":
        grid = Grid1D(n_points=spec["n_points"], spacing=spec["spacing"])
        return LatticeBasis(grid=grid, wilson_r=spec.get("wilson_r", get_settings().lattice.wilson_r))
    return PlaneWaveBasis(
        box_length=spec["box_length"], n_modes=spec["n_modes"], dimension=spec.get("dimension", 3)
    )
