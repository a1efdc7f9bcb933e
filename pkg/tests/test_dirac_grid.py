"""一维格点 Dirac 求解器测试"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.settings import get_settings
from src.models.fields import FieldConfig, Grid1D
from src.services.dirac_grid import (
    build_dirac_1d,
    continuum_deviation,
    count_low_modes,
    free_dispersion_residual,
    gauge_covariance_residual,
    gauge_shift,
    gauge_transform,
    lattice_dispersion,
    nonrel_limit_compare,
    second_order_operator,
    second_order_residual,
    spectrum,
    square_well,
    squared_spectrum_residual,
)
from src.utils.exceptions import (
    BoostkitError,
    InvalidLatticeError,
    PreconditionError,
    RelativisticRegimeError,
    TimeDependentFieldError,
)


@pytest.fixture(scope="module")
def grid():
    return Grid1D(n_points=256, spacing=0.1)


@pytest.fixture(scope="module")
def free_op(grid):
    return build_dirac_1d(grid, FieldConfig(mass=1.0))


def _well_config(**kwargs) -> FieldConfig:
    return FieldConfig(scalar_potential=square_well(0.2, 3.0), **kwargs)


class TestGrid:
    """测试格点参数检查"""

    @pytest.mark.parametrize("n_points, spacing", [(15, 0.1), (17, 0.1), (2048, 0.1), (64, 0.0), (64, -0.1)])
    def test_invalid_grid(self, n_points, spacing):
        with pytest.raises(InvalidLatticeError):
            Grid1D(n_points=n_points, spacing=spacing)

    def test_open_boundary_rejected(self):
        with pytest.raises(InvalidLatticeError):
            Grid1D(n_points=64, spacing=0.1, boundary="open")

    def test_coordinates(self, grid):
        assert grid.length == pytest.approx(25.6)
        assert grid.coordinates[grid.n_points // 2] == 0.0
        assert len(grid.momenta) == grid.n_points

    @pytest.mark.parametrize("wilson_r", [0.0, -0.5, 1.5])
    def test_invalid_wilson_parameter(self, grid, wilson_r):
        with pytest.raises(InvalidLatticeError):
            build_dirac_1d(grid, FieldConfig(), wilson_r=wilson_r)


class TestFreeSpectrum:
    """测试自由粒子谱"""

    def test_hermitian(self, free_op):
        assert free_op.hermiticity_residual < 1e-12
        assert free_op.matrix.shape == (512, 512)

    def test_matches_lattice_dispersion(self, free_op):
        assert free_dispersion_residual(free_op) < 1e-10

    def test_lowest_modes(self, free_op, grid):
        values = spectrum(free_op)
        n = grid.n_points
        first = lattice_dispersion(2.0 * np.pi / grid.length, 1.0, grid.spacing, 1.0)
        assert values[n] == pytest.approx(1.0, abs=1e-10)
        assert values[n + 1] == pytest.approx(first, abs=1e-10)
        assert values[n + 2] == pytest.approx(first, abs=1e-10)

    def test_particle_antiparticle_symmetry(self, free_op):
        values = spectrum(free_op)
        assert np.allclose(values, -values[::-1], atol=1e-10)

    def test_constant_potential_shifts_spectrum(self, grid, free_op):
        shifted = build_dirac_1d(grid, FieldConfig(scalar_potential=0.25))
        assert np.allclose(spectrum(shifted), spectrum(free_op) + 0.25, atol=1e-10)

    def test_constant_vector_potential(self, grid):
        op = build_dirac_1d(grid, FieldConfig(scalar_potential=0.25, vector_potential=[0.3, 0.0, 0.0]))
        assert op.has_uniform_links
        assert free_dispersion_residual(op) < 1e-10

    def test_dispersion_requires_free_field(self, grid):
        with pytest.raises(PreconditionError):
            free_dispersion_residual(build_dirac_1d(grid, _well_config()))

    def test_zero_momentum_dispersion(self):
        assert lattice_dispersion(0.0, 2.5, 0.1, 1.0) == pytest.approx(2.5)


class TestContinuumLimit:
    """测试连续极限"""

    def test_fine_grid_matches_continuum(self):
        op = build_dirac_1d(Grid1D(n_points=256, spacing=0.002), FieldConfig())
        assert continuum_deviation(op, max_ka=0.3) < 5e-3

    def test_coarse_grid_deviates(self, free_op):
        assert continuum_deviation(free_op, max_ka=0.3) > 5e-3


class TestDoublers:
    """测试 Wilson 项对倍增子的抑制"""

    def test_naive_lattice_has_doublers(self, grid):
        naive = build_dirac_1d(grid, FieldConfig(), wilson_r=0.0, allow_doublers=True)
        assert count_low_modes(naive, 0.01) == 4

    def test_wilson_lattice_removes_doublers(self, free_op):
        assert count_low_modes(free_op, 0.01) == 2

    def test_continuum_check_rejects_naive_lattice(self, grid):
        naive = build_dirac_1d(grid, FieldConfig(), wilson_r=0.0, allow_doublers=True)
        with pytest.raises(PreconditionError):
            continuum_deviation(naive)


class TestGaugeCovariance:
    """测试常矢势平移的规范协变性"""

    @pytest.fixture(scope="class")
    def gauged_op(self):
        cfg = _well_config(vector_potential=[0.3, 0.0, 0.0])
        return build_dirac_1d(Grid1D(n_points=128, spacing=0.1), cfg)

    @pytest.mark.parametrize("winding", [1, 2, -3])
    def test_spectrum_and_eigenvectors(self, gauged_op, winding):
        residuals = gauge_covariance_residual(gauged_op, winding)
        assert residuals["spectrum"] < 1e-10
        assert residuals["eigenvectors"] < 1e-10

    def test_phases_have_unit_modulus(self, gauged_op):
        shifted, phases = gauge_transform(gauged_op, gauge_shift(gauged_op.grid, gauged_op.charge))
        assert phases.shape == (gauged_op.matrix.shape[0],)
        assert np.allclose(np.abs(phases), 1.0)
        assert shifted.hermiticity_residual < 1e-12

    def test_non_integer_winding_rejected(self, gauged_op):
        with pytest.raises(InvalidLatticeError):
            gauge_transform(gauged_op, 0.1)

    def test_zero_charge_rejected(self, grid):
        with pytest.raises(BoostkitError):
            gauge_shift(grid, 0.0)


class TestSecondOrder:
    """测试二阶算符 Q"""

    def test_free_q_is_h_squared(self, grid, free_op):
        q = second_order_operator(grid, FieldConfig())
        assert np.allclose(q.matrix, free_op.matrix @ free_op.matrix, atol=1e-10)

    def test_eigenpairs_in_well(self):
        grid = Grid1D(n_points=128, spacing=0.1)
        cfg = _well_config(vector_potential=[0.2, 0.0, 0.0])
        op = build_dirac_1d(grid, cfg)
        q = second_order_operator(grid, cfg)
        assert q.spin_field_norm > 0.0
        assert second_order_residual(op, q) < 1e-9

    def test_constant_potential(self, grid):
        cfg = FieldConfig(scalar_potential=0.25)
        op = build_dirac_1d(grid, cfg)
        q = second_order_operator(grid, cfg)
        assert q.spin_field_norm == 0.0
        assert squared_spectrum_residual(op, q) < 1e-9

    def test_squared_spectrum_requires_constant_potential(self):
        grid = Grid1D(n_points=64, spacing=0.1)
        cfg = _well_config()
        with pytest.raises(PreconditionError):
            squared_spectrum_residual(build_dirac_1d(grid, cfg), second_order_operator(grid, cfg))

    def test_time_dependent_field_rejected(self, grid):
        with pytest.raises(TimeDependentFieldError):
            second_order_operator(grid, FieldConfig(static=False))


class TestNonRelativisticLimit:
    """测试方势阱中的非相对论极限"""

    def test_shallow_well(self):
        """默认比较网格上 1/m 修正主导偏差，质量加倍后偏差约减半"""
        comparison = nonrel_limit_compare(0.04, 5.0, 1.0)
        assert comparison.dirac_binding < 0.0
        assert comparison.pauli_energy < 0.0
        assert comparison.relative_discrepancy < 2e-2
        assert 0.35 <= comparison.ratio <= 0.65
        assert comparison.extras["box_decay"] > get_settings().lattice.nonrel_box_decay

    def test_ratio_stable_under_refinement(self):
        """换一个格距，比值基本不变"""
        default = nonrel_limit_compare(0.04, 5.0, 1.0)
        coarser = nonrel_limit_compare(0.04, 5.0, 1.0, grid=Grid1D(n_points=896, spacing=0.045))
        assert 0.35 <= coarser.ratio <= 0.65
        assert abs(coarser.ratio - default.ratio) < 0.05

    def test_wide_well_within_tolerance(self):
        """深度 0.01m、宽度 10/m 的阱：偏差在 2% 以内"""
        comparison = nonrel_limit_compare(0.01, 10.0, 1.0, grid=Grid1D(n_points=1024, spacing=0.1))
        assert comparison.dirac_binding < 0.0
        assert comparison.relative_discrepancy < 2e-2

    def test_small_box_reported(self):
        comparison = nonrel_limit_compare(0.01, 10.0, 1.0, grid=Grid1D(n_points=256, spacing=0.1))
        assert comparison.extras["box_decay"] < get_settings().lattice.nonrel_box_decay

    def test_zero_depth(self):
        comparison = nonrel_limit_compare(0.0, 10.0, 1.0, grid=Grid1D(n_points=256, spacing=0.1))
        assert comparison.absolute_discrepancy < 1e-6
        assert comparison.doubled_absolute_discrepancy < 1e-6

    def test_relativistic_depth_rejected(self):
        with pytest.raises(RelativisticRegimeError):
            nonrel_limit_compare(0.5, 10.0, 1.0)

    def test_negative_depth_rejected(self):
        with pytest.raises(BoostkitError):
            nonrel_limit_compare(-0.01, 10.0, 1.0)

    def test_to_dict(self):
        data = nonrel_limit_compare(0.01, 10.0, 1.0, grid=Grid1D(n_points=256, spacing=0.1)).to_dict()
        assert list(data)[:3] == ["well_depth", "well_width", "mass"]
        assert data["ratio"] is not None
        assert "box_decay" in data
