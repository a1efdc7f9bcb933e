"""矩张量与多极展开测试"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.settings import get_settings
from src.models.particles import ChargedParticle, ParticleSystem
from src.services.moments import (
    boost_system,
    charge_ring,
    check_antisymmetry_identity,
    circular_loop,
    dipole_pair,
    electric_moment,
    exact_potential_oracle,
    loop_moment_tensor,
    magnetic_moment,
    merge_systems,
    moment_tensor,
    multipole_potential,
    multipole_relative_error,
    open_loop,
    orbital_tensor,
    relativistic_mass,
    source_radius,
    square_loop,
    verify_moment_relation,
)
from src.utils.exceptions import (
    BoostkitError,
    CoincidentPointError,
    InvalidParticleError,
    MixedSystemError,
    SourceRadiusError,
)


def _random_particle(rng: np.random.Generator) -> ChargedParticle:
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    return ChargedParticle(
        rest_mass=rng.uniform(0.5, 2.0),
        charge=rng.choice([-2.0, -1.0, 1.0, 2.0]),
        position=np.concatenate(([rng.uniform(-1.0, 1.0)], rng.normal(size=3))),
        velocity3=rng.uniform(0.0, 0.95) * direction,
    )


class TestParticles:
    """测试粒子模型"""

    def test_superluminal_rejected(self):
        with pytest.raises(InvalidParticleError):
            ChargedParticle(1.0, 1.0, [0.0, 0.0, 0.0, 0.0], [0.8, 0.7, 0.0])

    def test_non_positive_mass_rejected(self):
        with pytest.raises(InvalidParticleError):
            ChargedParticle(0.0, 1.0, [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0])

    def test_unequal_times_rejected(self):
        with pytest.raises(BoostkitError):
            ParticleSystem((
                ChargedParticle(1.0, 1.0, [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
                ChargedParticle(1.0, 1.0, [0.5, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
            ))

    def test_four_momentum_shell(self):
        particle = ChargedParticle(2.0, 1.0, [0.0, 0.0, 0.0, 0.0], [0.6, 0.0, 0.0])
        p = particle.four_momentum
        assert particle.gamma == pytest.approx(1.25)
        assert p[0] ** 2 - p[1:] @ p[1:] == pytest.approx(4.0)

    def test_from_four_momentum(self):
        particle = ChargedParticle(2.0, 1.0, [0.0, 0.0, 0.0, 0.0], [0.6, 0.0, 0.0])
        restored = ChargedParticle.from_four_momentum(2.0, 1.0, particle.position, particle.four_momentum)
        assert np.allclose(restored.velocity3, [0.6, 0.0, 0.0], atol=1e-15)
        assert restored.gamma == pytest.approx(1.25)

    def test_dict_round_trip(self):
        particle = ChargedParticle(1.5, -1.0, [0.1, 0.2, 0.3, 0.4], [0.1, -0.2, 0.3])
        restored = ChargedParticle.from_dict(particle.to_dict())
        assert np.array_equal(restored.position, particle.position)
        assert np.array_equal(restored.velocity3, particle.velocity3)


class TestMomentRelation:
    """测试 M^μν = (e/2m′) L^μν"""

    def test_random_single_particles(self):
        """1000 个随机单粒子状态"""
        rng = np.random.default_rng(get_settings().seed)
        for _ in range(1000):
            system = ParticleSystem((_random_particle(rng),))
            assert verify_moment_relation(system) < 1e-12

    def test_homogeneous_ring(self):
        system = charge_ring(8, radius=1.5, speed=0.7, charge=-1.0, mass=2.0)
        assert verify_moment_relation(system) < 1e-12
        assert relativistic_mass(system) == pytest.approx(2.0 / np.sqrt(1.0 - 0.49))

    def test_mixed_charges_rejected(self):
        with pytest.raises(MixedSystemError):
            verify_moment_relation(dipole_pair(1.0, 1.0))

    def test_mixed_masses_rejected(self):
        system = ParticleSystem((
            ChargedParticle(1.0, 1.0, [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
            ChargedParticle(2.0, 1.0, [0.0, -1.0, 0.0, 0.0], [0.0, 0.0, 0.0]),
        ))
        with pytest.raises(MixedSystemError):
            verify_moment_relation(system)

    def test_tensors_are_antisymmetric(self):
        system = charge_ring(5, radius=1.0, speed=0.3)
        m = moment_tensor(system).m
        l = orbital_tensor(system).l
        assert np.array_equal(m, -m.T)
        assert np.array_equal(l, -l.T)

    def test_circling_charge_magnetic_moment(self):
        """½ e v r，沿 z 方向"""
        system = charge_ring(1, radius=2.0, speed=0.5)
        assert np.allclose(magnetic_moment(moment_tensor(system)), [0.0, 0.0, 0.5], atol=1e-15)

    def test_dipole_electric_moment(self):
        """静止偶极子：M^0i = −½ Σ e xⁱ"""
        tensor = moment_tensor(dipole_pair(1.0, 1.0))
        assert np.allclose(electric_moment(tensor), [0.0, 0.0, -0.5], atol=1e-15)
        assert np.allclose(magnetic_moment(tensor), 0.0, atol=0.0)


class TestBoost:
    """测试体系的 boost"""

    def test_boost_resynchronises_times(self):
        system = ParticleSystem((
            ChargedParticle(1.0, 1.0, [1.0, 1.0, 0.0, 0.0], [0.1, 0.0, 0.0]),
            ChargedParticle(1.0, 1.0, [1.0, -2.0, 0.5, 0.0], [0.0, 0.2, 0.0]),
            ChargedParticle(1.0, 1.0, [1.0, 0.0, 0.0, 3.0], [0.0, 0.0, -0.3]),
        ))
        boosted = boost_system(system, [0.5, 0.0, 0.0])
        assert boosted.common_time == pytest.approx(np.cosh(0.5))
        assert len(boosted) == 3

    def test_boost_preserves_relation(self):
        rng = np.random.default_rng(get_settings().seed)
        for _ in range(20):
            system = ParticleSystem((_random_particle(rng),))
            boosted = boost_system(system, rng.uniform(-1.0, 1.0, size=3))
            assert verify_moment_relation(boosted) < 1e-12

    def test_boost_preserves_rest_mass(self):
        particle = ChargedParticle(1.0, 1.0, [0.0, 0.0, 0.0, 0.0], [0.3, 0.1, 0.0])
        boosted = boost_system(ParticleSystem((particle,)), [0.2, 0.4, -0.1]).particles[0]
        p = boosted.four_momentum
        assert p[0] ** 2 - p[1:] @ p[1:] == pytest.approx(1.0, rel=1e-12)

    def test_boost_induces_electric_moment(self):
        """纯磁矩的电流环在垂直于轴的 boost 下出现电矩"""
        ring = charge_ring(8, 1.0, 0.5)
        before = electric_moment(moment_tensor(ring))
        after = electric_moment(moment_tensor(boost_system(ring, [0.6, 0.0, 0.0])))
        assert np.linalg.norm(before) < 1e-12
        assert np.linalg.norm(after) > 0.1
        assert abs(after[0]) < 1e-12
        assert abs(after[2]) < 1e-12

    def test_merge_systems(self):
        merged = merge_systems([dipole_pair(1.0, 1.0), charge_ring(3, 1.0, 0.2)])
        assert len(merged) == 5


class TestMultipole:
    """测试多极展开与直接求和"""

    def test_dipole_pair_far_field(self):
        """|x|/d = 10 时相对误差 < 1.5%"""
        error = multipole_relative_error(dipole_pair(1.0, 1.0), [0.0, 0.0, 10.0])
        assert error < 1.5e-2
        assert error == pytest.approx(0.25 / 100.0, rel=0.05)

    def test_dipole_error_scaling(self):
        """距离加倍误差约降为 1/4"""
        system = dipole_pair(1.0, 1.0)
        near = multipole_relative_error(system, [0.0, 3.0, 6.0])
        far = multipole_relative_error(system, [0.0, 6.0, 12.0])
        assert 3.0 <= near / far <= 5.0

    def test_point_charge_is_exact(self):
        system = ParticleSystem((ChargedParticle(1.0, 2.0, [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0]),))
        exact = exact_potential_oracle(system, [1.0, 2.0, 2.0])
        approx = multipole_potential(system, [1.0, 2.0, 2.0])
        assert exact[0] == pytest.approx(2.0 / (4.0 * np.pi * 3.0))
        assert np.allclose(approx, exact, atol=1e-15)

    def test_moving_charges_carry_vector_potential(self):
        system = ParticleSystem((ChargedParticle(1.0, 1.0, [0.0, 0.1, 0.0, 0.0], [0.0, 0.5, 0.0]),))
        potential = multipole_potential(system, [0.0, 0.0, 20.0])
        assert potential[2] == pytest.approx(0.5 * potential[0])

    def test_inside_source_radius_rejected(self):
        with pytest.raises(SourceRadiusError):
            multipole_potential(dipole_pair(1.0, 1.0), [0.0, 0.0, 1.0])
        assert source_radius(dipole_pair(1.0, 1.0)) == pytest.approx(0.5)

    def test_coincident_point_rejected(self):
        system = ParticleSystem((ChargedParticle(1.0, 1.0, [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0]),))
        with pytest.raises(CoincidentPointError):
            exact_potential_oracle(system, [0.0, 0.0, 1.0])

    def test_unknown_order_rejected(self):
        with pytest.raises(BoostkitError):
            multipole_potential(dipole_pair(1.0, 1.0), [0.0, 0.0, 10.0], order="quadrupole")

    def test_square_loop_far_field(self):
        """|x| = 20a 处方形回路远场误差 < 1%"""
        loop = square_loop(1.0, current=1.0, segments_per_side=10)
        assert multipole_relative_error(loop, [12.0, 16.0, 0.0]) < 1e-2
        assert multipole_relative_error(loop, [20.0, 5.0, 3.0]) < 1e-2

    def test_closed_loop_has_no_monopole(self):
        loop = square_loop(2.0)
        potential = multipole_potential(loop, [0.0, 30.0, 0.0], order="monopole")
        assert np.allclose(potential, 0.0, atol=1e-15)


class TestCurrentLoops:
    """测试稳恒回路"""

    @pytest.mark.parametrize("loop", [square_loop(1.0), circular_loop(0.7, segments=90)])
    def test_antisymmetry_identity(self, loop):
        assert loop.is_closed
        assert check_antisymmetry_identity(loop) < 1e-10

    def test_open_loop_breaks_identity(self):
        loop = open_loop(square_loop(1.0, segments_per_side=10))
        assert not loop.is_closed
        assert check_antisymmetry_identity(loop) > 1e-2

    def test_square_loop_moment_is_area(self):
        """M^12 = I·A"""
        moment = magnetic_moment(loop_moment_tensor(square_loop(2.0, current=3.0)))
        assert np.allclose(moment, [0.0, 0.0, 12.0], atol=1e-12)

    def test_circle_moment(self):
        moment = magnetic_moment(loop_moment_tensor(circular_loop(1.0, current=1.0, segments=720)))
        assert moment[2] == pytest.approx(np.pi, rel=1e-4)

    def test_segments_round_trip(self):
        loop = square_loop(1.0, segments_per_side=2)
        rebuilt = type(loop).from_segments(loop.segments)
        assert np.array_equal(rebuilt.midpoints, loop.midpoints)
        assert len(rebuilt) == 8
