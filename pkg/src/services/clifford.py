"""Dirac 矩阵、自旋张量与有限 Lorentz 变换"""

import itertools
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.linalg import expm
from scipy.spatial.transform import Rotation

from config.settings import get_settings
from src.models.lorentz import (
    MINKOWSKI,
    GammaSet,
    RapidityVector,
    ResidualReport,
    SpinorTransform,
    SpinTensor,
    TransformKind,
    VectorTransform,
)
from src.models.scenario import ResidualCheck
from src.utils.exceptions import UnsupportedRepresentationError
from src.utils.linalg import (
    LEVI_CIVITA,
    PAULI,
    SIGMA_0,
    anti_block2,
    anti_hermiticity_residual,
    anticommutator,
    block_diag2,
    commutator,
    dagger,
    hermiticity_residual,
    max_entry,
)

SUPPORTED_REPRESENTATIONS = ("dirac", "weyl")

IDENTITY4 = np.eye(4, dtype=complex)


def make_gamma(representation: str = "dirac") -> GammaSet:
    """构造 γ^μ

    dirac: γ⁰ = diag(I, −I)，γᵏ = ((0, σₖ), (−σₖ, 0))
    weyl:  γ⁰ = ((0, I), (I, 0))，γᵏ 同上
    """
    label = str(representation).lower()
    if label == "dirac":
        gamma0 = block_diag2(SIGMA_0, -SIGMA_0)
    elif label == "weyl":
        gamma0 = anti_block2(SIGMA_0, SIGMA_0)
    else:
        raise UnsupportedRepresentationError(
            f"不支持的表示 {representation!r}，可选: {', '.join(SUPPORTED_REPRESENTATIONS)}"
        )
    spatial = [anti_block2(sigma, -sigma) for sigma in PAULI]
    return GammaSet(gamma=np.array([gamma0] + spatial), representation=label)


def spin_tensor(g: GammaSet) -> SpinTensor:
    """S^μν = (i/4)[γ^μ, γ^ν]，只计算 μ < ν，其余由反对称性给出"""
    s = np.zeros((4, 4, 4, 4), dtype=complex)
    for mu, nu in itertools.combinations(range(4), 2):
        entry = 0.25j * commutator(g[mu], g[nu])
        s[mu, nu] = entry
        s[nu, mu] = -entry
    return SpinTensor(s=s, representation=g.representation)


def sigma_vector(s: SpinTensor) -> np.ndarray:
    """Σ_i = ½ ε_ijk S^jk"""
    spatial = s.s[1:, 1:]
    return 0.5 * np.einsum("ijk,jkab->iab", LEVI_CIVITA, spatial)


def k_vector(s: SpinTensor) -> np.ndarray:
    """K = (S^01, S^02, S^03)"""
    return np.array(s.s[0, 1:])


def _as_rapidity(eta) -> RapidityVector:
    return eta if isinstance(eta, RapidityVector) else RapidityVector(eta)


def finite_spinor_boost(s: SpinTensor, eta) -> SpinorTransform:
    """S(Λ) = exp(+i η·K)，与 finite_vector_boost 配对满足协变性"""
    eta = _as_rapidity(eta)
    generator = np.einsum("i,iab->ab", eta.eta, k_vector(s))
    return SpinorTransform(matrix=expm(1j * generator), kind=TransformKind.BOOST)


def finite_vector_boost(eta) -> VectorTransform:
    """被动 boost：Λ⁰₀ = cosh|η|，Λ⁰ᵢ = Λⁱ₀ = −nᵢ sinh|η|，Λⁱⱼ = δᵢⱼ + (cosh|η| − 1) nᵢnⱼ"""
    eta = _as_rapidity(eta)
    direction = eta.direction
    if direction is None:
        return VectorTransform(np.eye(4))
    rapidity = eta.magnitude
    cosh, sinh = np.cosh(rapidity), np.sinh(rapidity)
    lam = np.eye(4)
    lam[0, 0] = cosh
    lam[0, 1:] = -direction * sinh
    lam[1:, 0] = -direction * sinh
    lam[1:, 1:] += (cosh - 1.0) * np.outer(direction, direction)
    return VectorTransform(lam)


def finite_spinor_rotation(s: SpinTensor, axis_angle) -> SpinorTransform:
    """S(R) = exp(−i θ·Σ)，2π 转动给出 −I"""
    theta = np.array(axis_angle, dtype=float).reshape(3)
    generator = np.einsum("i,iab->ab", theta, sigma_vector(s))
    return SpinorTransform(matrix=expm(-1j * generator), kind=TransformKind.ROTATION)


def finite_vector_rotation(axis_angle) -> VectorTransform:
    """主动空间转动 diag(1, R(θ))"""
    theta = np.array(axis_angle, dtype=float).reshape(3)
    lam = np.eye(4)
    lam[1:, 1:] = Rotation.from_rotvec(theta).as_matrix()
    return VectorTransform(lam)


def compose(first, second):
    """先作用 second 再作用 first"""
    if isinstance(first, SpinorTransform) and isinstance(second, SpinorTransform):
        kind = first.kind if first.kind == second.kind else TransformKind.MIXED
        return SpinorTransform(matrix=first.matrix @ second.matrix, kind=kind)
    if isinstance(first, VectorTransform) and isinstance(second, VectorTransform):
        return VectorTransform(first.lam @ second.lam)
    raise TypeError("compose 的两个参数必须同为 SpinorTransform 或 VectorTransform")


def check_lorentz_algebra(s: SpinTensor) -> ResidualReport:
    """[S^μν, S^ρσ] − i(g^νρ S^μσ − g^μρ S^νσ − g^νσ S^μρ + g^μσ S^νρ) 的最大残差"""
    g = MINKOWSKI.matrix
    worst, worst_index, checked = 0.0, (), 0
    for mu, nu, rho, sigma in itertools.product(range(4), repeat=4):
        expected = 1j * (
            g[nu, rho] * s[mu, sigma]
            - g[mu, rho] * s[nu, sigma]
            - g[nu, sigma] * s[mu, rho]
            + g[mu, sigma] * s[nu, rho]
        )
        residual = max_entry(commutator(s[mu, nu], s[rho, sigma]) - expected)
        checked += 1
        if residual > worst:
            worst, worst_index = residual, (mu, nu, rho, sigma)
    return ResidualReport(max_residual=worst, worst_index=worst_index, checked=checked)


def clifford_residual(g: GammaSet) -> float:
    """max |{γ^μ, γ^ν} − 2g^μν I|"""
    metric = MINKOWSKI.matrix
    return max(
        max_entry(anticommutator(g[mu], g[nu]) - 2.0 * metric[mu, nu] * IDENTITY4)
        for mu, nu in itertools.product(range(4), repeat=2)
    )


def gamma_hermiticity_residual(g: GammaSet) -> float:
    """γ⁰ 厄米、γᵏ 反厄米"""
    return max(
        [hermiticity_residual(g[0])] + [anti_hermiticity_residual(g[k]) for k in (1, 2, 3)]
    )


def adjoint_residual(g: GammaSet, s: SpinTensor) -> float:
    """max |γ⁰ (S^μν)† γ⁰ − S^μν|"""
    gamma0 = g.gamma0
    return max(
        max_entry(gamma0 @ dagger(s[mu, nu]) @ gamma0 - s[mu, nu])
        for mu, nu in itertools.product(range(4), repeat=2)
    )


def antisymmetry_residual(s: SpinTensor) -> float:
    return max_entry(s.s + np.swapaxes(s.s, 0, 1))


def block_form_residuals(s: SpinTensor) -> Dict[str, float]:
    """Σ = ½ diag(σ, σ)，K = (i/2)((0, σ), (σ, 0))，仅适用于 Dirac 表示"""
    sigmas, ks = sigma_vector(s), k_vector(s)
    sigma_residual = max(
        max_entry(sigmas[i] - 0.5 * block_diag2(PAULI[i], PAULI[i])) for i in range(3)
    )
    k_residual = max(
        max_entry(ks[i] - 0.5j * anti_block2(PAULI[i], PAULI[i])) for i in range(3)
    )
    return {"sigma_block_form": sigma_residual, "k_block_form": k_residual}


def covariance_residual(g: GammaSet, spinor: SpinorTransform, vector: VectorTransform) -> float:
    """max_μ |S⁻¹ γ^μ S − Λ^μ_ν γ^ν|"""
    inverse = spinor.inverse_matrix
    mixed = np.einsum("mn,nab->mab", vector.lam, g.gamma)
    return max(
        max_entry(inverse @ g[mu] @ spinor.matrix - mixed[mu]) for mu in range(4)
    )


def unitarity_residual(t: SpinorTransform) -> float:
    return max_entry(dagger(t.matrix) @ t.matrix - IDENTITY4)


def dirac_unitarity_residual(g: GammaSet, t: SpinorTransform) -> float:
    """max |γ⁰ S† γ⁰ S − I|"""
    return max_entry(g.gamma0 @ dagger(t.matrix) @ g.gamma0 @ t.matrix - IDENTITY4)


def _generator_relations(s: SpinTensor) -> Dict[str, float]:
    sigmas, ks = sigma_vector(s), k_vector(s)
    cyclic = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    return {
        "sigma_hermiticity": max(hermiticity_residual(m) for m in sigmas),
        "sigma_square": max(max_entry(m @ m - 0.25 * IDENTITY4) for m in sigmas),
        "sigma_commutator": max(
            max_entry(commutator(sigmas[i], sigmas[j]) - 1j * sigmas[k]) for i, j, k in cyclic
        ),
        "k_anti_hermiticity": max(anti_hermiticity_residual(m) for m in ks),
        "k_commutator": max(
            max_entry(commutator(ks[i], ks[j]) + 1j * sigmas[k]) for i, j, k in cyclic
        ),
    }


def random_rapidities(rng: np.random.Generator, count: int, max_magnitude: float) -> List[RapidityVector]:
    """随机方向、|η| ≤ max_magnitude 的快度"""
    directions = rng.normal(size=(count, 3))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    magnitudes = rng.uniform(0.0, max_magnitude, size=count)
    return [RapidityVector(d * m) for d, m in zip(directions, magnitudes)]


def run_algebra_suite(
    representation: str = "dirac",
    samples: int = 100,
    max_rapidity: float = 2.0,
    seed: Optional[int] = None,
    tolerance: Optional[float] = None,
    covariance_tolerance: Optional[float] = None,
) -> Tuple[List[ResidualCheck], Dict[str, float]]:
    """完整的代数检查：返回 (残差列表, 附加结果)"""
    settings = get_settings()
    tolerance = tolerance if tolerance is not None else settings.tolerances.algebra
    covariance_tolerance = (
        covariance_tolerance if covariance_tolerance is not None else settings.tolerances.covariance
    )
    rng = np.random.default_rng(settings.seed if seed is None else seed)

    g = make_gamma(representation)
    s = spin_tensor(g)
    logger.debug(f"代数检查: 表示 {g.representation}，随机样本 {samples}")

    exact: Dict[str, float] = {
        "clifford": clifford_residual(g),
        "gamma_hermiticity": gamma_hermiticity_residual(g),
        "spin_antisymmetry": antisymmetry_residual(s),
        "dirac_adjoint": adjoint_residual(g, s),
        "lorentz_algebra": check_lorentz_algebra(s).max_residual,
    }
    exact.update(_generator_relations(s))
    if g.representation == "dirac":
        exact.update(block_form_residuals(s))

    z_axis = np.array([0.0, 0.0, 1.0])
    boosts = random_rapidities(rng, samples, max_rapidity)
    axes = random_rapidities(rng, samples, np.pi)
    collinear = RapidityVector([0.4, 0.0, 0.0]), RapidityVector([0.3, 0.0, 0.0])

    numerical: Dict[str, float] = {
        "boost_covariance": max(
            covariance_residual(g, finite_spinor_boost(s, eta), finite_vector_boost(eta)) for eta in boosts
        ),
        "rotation_covariance": max(
            covariance_residual(g, finite_spinor_rotation(s, th.eta), finite_vector_rotation(th.eta))
            for th in axes
        ),
        "boost_dirac_unitarity": max(dirac_unitarity_residual(g, finite_spinor_boost(s, eta)) for eta in boosts),
        "rotation_unitarity": max(unitarity_residual(finite_spinor_rotation(s, th.eta)) for th in axes),
        "double_cover": max(
            max_entry(finite_spinor_rotation(s, 2.0 * np.pi * z_axis).matrix + IDENTITY4),
            max_entry(finite_spinor_rotation(s, 4.0 * np.pi * z_axis).matrix - IDENTITY4),
        ),
        "boost_composition": max_entry(
            compose(finite_spinor_boost(s, collinear[0]), finite_spinor_boost(s, collinear[1])).matrix
            - finite_spinor_boost(s, collinear[0] + collinear[1]).matrix
        ),
        "vector_boost_metric": max(finite_vector_boost(eta).metric_residual() for eta in boosts),
        "vector_boost_inverse": max(
            max_entry(finite_vector_boost(eta).lam @ finite_vector_boost(-eta).lam - np.eye(4)) for eta in boosts
        ),
    }

    checks = [ResidualCheck(name=name, value=value, tolerance=tolerance) for name, value in exact.items()]
    checks += [
        ResidualCheck(name=name, value=value, tolerance=covariance_tolerance) for name, value in numerical.items()
    ]
    extras = {
        "max_boost_non_unitarity": max(unitarity_residual(finite_spinor_boost(s, eta)) for eta in boosts),
        "samples": float(samples),
    }

    failed = [check.name for check in checks if not check.passed]
    if failed:
        logger.warning(f"代数检查未通过: {', '.join(failed)}")
    else:
        logger.debug(f"代数检查通过，共 {len(checks)} 项")
    return checks, extras
