"""场景运行器：读取场景文件、分派到各服务模块、写出报告与谱"""

import asyncio
import os
from dataclasses import dataclass
from glob import glob
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import ValidationError

from config.settings import get_settings
from src.models.fields import FieldConfig, Grid1D
from src.models.particles import ChargedParticle, ParticleSystem
from src.models.scenario import (
    SCENARIO_ADAPTER,
    AlgebraCheckScenario,
    CompareNonrelScenario,
    Dirac1dScenario,
    MomentsScenario,
    ParticleSpec,
    Report,
    Scenario,
    SplittingScenario,
)
from src.services import clifford, dirac_grid, moments, pauli
from src.utils.exceptions import MixedSystemError, ScenarioParseError, ScenarioValidationError
from src.utils.files import (
    load_loop_csv,
    load_particles_csv,
    write_json_report,
    write_spectrum_csv,
)
from src.utils.validators import load_scenario_data, validate_scenario_data

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2


@dataclass
class RunOutcome:
    """单个场景的运行结果"""
    path: str
    exit_code: int
    report: Optional[Report] = None
    report_path: Optional[str] = None
    error: Optional[str] = None

    @property
    def name(self) -> str:
        return os.path.basename(self.path)

    @property
    def status(self) -> str:
        if self.report is not None:
            return self.report.status
        return "invalid" if self.exit_code == EXIT_INVALID else "error"


def _describe_validation_error(error: ValidationError) -> str:
    messages = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "(顶层)"
        if item["type"] == "missing":
            messages.append(f"缺少参数: {location}")
        elif item["type"] == "extra_forbidden":
            messages.append(f"未知参数: {location}")
        else:
            messages.append(f"{location}: {item['msg']}")
    return "; ".join(messages)


class ScenarioRunner:
    """场景运行器"""

    def __init__(self, output_dir: Optional[str] = None):
        self.settings = get_settings()
        self.output_dir = output_dir or self.settings.output_dir

    # ---- 解析 ----

    def load(self, path: str) -> Scenario:
        """解析并验证场景文件"""
        if not os.path.isfile(path):
            raise ScenarioParseError(f"场景文件不存在: {path}")
        try:
            data = load_scenario_data(path)
        except Exception as e:
            raise ScenarioParseError(f"无法解析 {path}: {e}") from e

        check = validate_scenario_data(data)
        if not check["valid"]:
            raise ScenarioValidationError(f"{path}: " + "; ".join(check["errors"]))
        for warning in check["warnings"]:
            logger.debug(f"{os.path.basename(path)}: {warning}")

        try:
            return SCENARIO_ADAPTER.validate_python(data)
        except ValidationError as e:
            raise ScenarioValidationError(f"{path}: {_describe_validation_error(e)}") from e

    def _output_path(self, configured: Optional[str], default_name: str) -> str:
        path = configured or default_name
        if os.path.isabs(path):
            return path
        return os.path.join(self.output_dir, path)

    @staticmethod
    def _input_path(scenario_path: str, configured: str) -> str:
        if os.path.isabs(configured):
            return configured
        return os.path.join(os.path.dirname(os.path.abspath(scenario_path)), configured)

    # ---- 各类场景 ----

    def _run_algebra(self, scenario: AlgebraCheckScenario, report: Report, path: str) -> None:
        checks, extras = clifford.run_algebra_suite(
            representation=scenario.representation,
            samples=scenario.samples,
            max_rapidity=scenario.max_rapidity,
            seed=self.settings.seed,
            tolerance=scenario.tolerance,
            covariance_tolerance=scenario.covariance_tolerance,
        )
        report.add_result("representation", scenario.representation)
        report.add_result("seed", self.settings.seed)
        for name, value in extras.items():
            report.add_result(name, value)
        report.residuals.extend(checks)

    def _particle_source(self, scenario: MomentsScenario, path: str) -> Optional[ParticleSystem]:
        if scenario.particles_file:
            return load_particles_csv(self._input_path(path, scenario.particles_file))
        if scenario.particles:
            return _system_from_specs(scenario.particles)
        return None

    def _loop_source(self, scenario: MomentsScenario, path: str):
        if scenario.loop_file:
            return load_loop_csv(self._input_path(path, scenario.loop_file))
        spec = scenario.loop
        if spec is None:
            return None
        if spec.shape == "square":
            return moments.square_loop(spec.size, spec.current, segments_per_side=max(1, spec.segments // 4))
        return moments.circular_loop(spec.size, spec.current, segments=spec.segments)

    def _run_moments(self, scenario: MomentsScenario, report: Report, path: str) -> None:
        system = self._particle_source(scenario, path)
        if system is not None:
            if scenario.boost is not None:
                system = moments.boost_system(system, scenario.boost)
                report.add_result("boosted_time", system.common_time)
            tensor = moments.moment_tensor(system)
            report.add_result("particle_count", len(system))
            report.add_result("moment_tensor", tensor.m)
            report.add_result("magnetic_moment", moments.magnetic_moment(tensor))
            report.add_result("electric_moment", moments.electric_moment(tensor))
            try:
                residual = moments.verify_moment_relation(system)
                report.add_result("relativistic_mass", moments.relativistic_mass(system))
                report.add_residual("moment_relation", residual, scenario.relation_tolerance)
            except MixedSystemError as e:
                logger.warning(f"跳过 M–L 关系检查: {e}")
                report.add_result("moment_relation_skipped", str(e))
            if scenario.field_point is not None:
                report.add_result(
                    "multipole_potential", moments.multipole_potential(system, scenario.field_point, scenario.order)
                )
                report.add_result("exact_potential", moments.exact_potential_oracle(system, scenario.field_point))
                report.add_residual(
                    "multipole_relative_error",
                    moments.multipole_relative_error(system, scenario.field_point, scenario.order),
                    scenario.multipole_tolerance,
                )

        loop = self._loop_source(scenario, path)
        if loop is not None:
            tensor = moments.loop_moment_tensor(loop)
            report.add_result("loop_segments", len(loop))
            report.add_result("loop_closure_residual", loop.closure_residual)
            report.add_result("loop_magnetic_moment", moments.magnetic_moment(tensor))
            report.add_residual(
                "loop_antisymmetry", moments.check_antisymmetry_identity(loop), scenario.antisymmetry_tolerance
            )
            if scenario.field_point is not None:
                report.add_residual(
                    "loop_far_field_relative_error",
                    moments.multipole_relative_error(loop, scenario.field_point, scenario.order),
                    scenario.loop_tolerance,
                )

    def _run_splitting(self, scenario: SplittingScenario, report: Report, path: str) -> None:
        cfg = FieldConfig(
            e_field=scenario.e_field, b_field=scenario.b_field, charge=scenario.charge, mass=scenario.mass
        )
        basis = pauli.make_basis(scenario.basis.model_dump())
        result = pauli.splitting_spectrum(cfg, basis, scenario.hermitian_tolerance)
        doubled = pauli.splitting_spectrum(
            FieldConfig(e_field=2.0 * cfg.e_field, charge=cfg.charge, mass=cfg.mass), basis,
            scenario.hermitian_tolerance,
        )
        expected = abs(cfg.charge_to_mass) * float(np.linalg.norm(cfg.e_field))

        for name, value in result.to_dict().items():
            report.add_result(name, value)
        report.add_result("expected_splitting_magnitude", expected)
        report.add_result(
            f"splitting_magnitude_{scenario.energy_unit}", result.splitting_magnitude * scenario.energy_scale
        )

        h0 = pauli.build_h0(cfg, basis)
        full = pauli.build_full_pauli(cfg, basis)
        report.add_residual("h0_hermiticity", h0.hermiticity_residual, scenario.hermitian_tolerance)
        report.add_residual(
            "h1_anti_hermiticity", pauli.build_h1(cfg, basis).anti_hermiticity_residual, scenario.hermitian_tolerance
        )
        report.add_residual(
            "splitting", abs(result.splitting_magnitude - expected), scenario.splitting_tolerance
        )
        report.add_residual(
            "max_splitting",
            float(np.max(np.abs(np.abs(result.splittings) - expected))),
            scenario.splitting_tolerance,
        )
        report.add_residual(
            "splitting_linearity",
            abs(doubled.splitting_magnitude - 2.0 * result.splitting_magnitude),
            scenario.splitting_tolerance,
        )
        report.add_residual(
            "block_diagonal", pauli.off_block_residual(pauli.pm_transform(full)), scenario.block_tolerance
        )
        report.add_residual("commutation", pauli.check_commutation(cfg, basis), scenario.commutation_tolerance)

        if scenario.spectrum_path:
            branches = ["plus"] * len(result.plus) + ["minus"] * len(result.minus)
            write_spectrum_csv(
                self._output_path(scenario.spectrum_path, "spectrum.csv"), result.eigenvalues, branches
            )

    def _run_dirac1d(self, scenario: Dirac1dScenario, report: Report, path: str) -> None:
        cfg = FieldConfig(
            scalar_potential=scenario.scalar_potential,
            vector_potential=(scenario.vector_potential, 0.0, 0.0),
            charge=scenario.charge,
            mass=scenario.mass,
        )
        grid = Grid1D(n_points=scenario.n_points, spacing=scenario.spacing)
        op = dirac_grid.build_dirac_1d(grid, cfg, scenario.wilson_r)
        values = dirac_grid.spectrum(op)
        shift = float(op.potential[0])

        positive = values[values - shift > 0.0]
        report.add_result("dimension", op.matrix.shape[0])
        report.add_result("lowest_positive", float(positive[0]))
        report.add_result(
            "analytic_first_mode",
            float(dirac_grid.lattice_dispersion(2.0 * np.pi / grid.length, cfg.mass, grid.spacing, op.wilson_r)),
        )
        report.add_result("low_modes", dirac_grid.count_low_modes(op, 2.0 * np.pi / grid.length))

        report.add_residual("hermiticity", op.hermiticity_residual, scenario.hermitian_tolerance)
        report.add_residual("dispersion", dirac_grid.free_dispersion_residual(op), scenario.dispersion_tolerance)

        fine = Grid1D(n_points=scenario.continuum_points, spacing=scenario.continuum_spacing)
        fine_op = dirac_grid.build_dirac_1d(fine, cfg, scenario.wilson_r)
        report.add_residual(
            "continuum", dirac_grid.continuum_deviation(fine_op, scenario.max_ka), scenario.continuum_tolerance
        )

        q = dirac_grid.second_order_operator(grid, cfg, scenario.wilson_r)
        report.add_result("spin_field_norm", q.spin_field_norm)
        report.add_residual(
            "second_order", dirac_grid.second_order_residual(op, q), scenario.second_order_tolerance
        )
        report.add_residual(
            "squared_spectrum", dirac_grid.squared_spectrum_residual(op, q), scenario.second_order_tolerance
        )

        gauge = dirac_grid.gauge_covariance_residual(op, scenario.gauge_winding)
        report.add_residual("gauge_spectrum", gauge["spectrum"], scenario.gauge_tolerance)
        report.add_residual("gauge_eigenvectors", gauge["eigenvectors"], scenario.gauge_tolerance)

        if scenario.spectrum_path:
            branches = ["positive" if v - shift > 0.0 else "negative" for v in values]
            write_spectrum_csv(self._output_path(scenario.spectrum_path, "spectrum.csv"), values, branches)

    def _run_compare_nonrel(self, scenario: CompareNonrelScenario, report: Report, path: str) -> None:
        grid = Grid1D(n_points=scenario.n_points, spacing=scenario.spacing)
        comparison = dirac_grid.nonrel_limit_compare(
            scenario.well_depth, scenario.well_width, scenario.mass,
            grid=grid, wilson_r=scenario.wilson_r, charge=scenario.charge,
        )
        for name, value in comparison.to_dict().items():
            report.add_result(name, value)
        box_decay = comparison.extras.get("box_decay", float("inf"))
        if box_decay < get_settings().lattice.nonrel_box_decay:
            logger.warning(f"格点盒子偏小: 基态尾部只衰减了 κ·(L − w) = {box_decay:.2f}，周期像会影响比较结果")

        if scenario.well_depth == 0.0:
            report.add_residual(
                "absolute_discrepancy", comparison.absolute_discrepancy, scenario.zero_depth_tolerance
            )
            report.add_residual(
                "doubled_absolute_discrepancy", comparison.doubled_absolute_discrepancy, scenario.zero_depth_tolerance
            )
            return

        relative = comparison.relative_discrepancy
        ratio = comparison.ratio
        report.add_residual(
            "relative_discrepancy", float("nan") if relative is None else relative, scenario.discrepancy_tolerance
        )
        low, high = scenario.ratio_window
        report.add_residual("mass_doubling_ratio", float("nan") if ratio is None else ratio, high, lower=low)

    # ---- 入口 ----

    def execute(self, scenario: Scenario, path: str) -> Report:
        """对已验证的场景进行计算，不写文件"""
        report = Report(
            kind=scenario.kind,
            source=os.path.basename(path),
            scenario=scenario.model_dump(mode="json"),
        )
        handlers = {
            "algebra-check": self._run_algebra,
            "moments": self._run_moments,
            "splitting": self._run_splitting,
            "dirac1d": self._run_dirac1d,
            "compare-nonrel": self._run_compare_nonrel,
        }
        handlers[scenario.kind](scenario, report, path)
        return report

    def run(self, path: str) -> RunOutcome:
        """运行单个场景并写出报告；返回退出码 0 / 1 / 2"""
        name = os.path.basename(path)
        logger.info(f"运行场景: {name}")
        try:
            scenario = self.load(path)
        except (ScenarioParseError, ScenarioValidationError) as e:
            logger.error(f"场景无效: {e}")
            return RunOutcome(path=path, exit_code=EXIT_INVALID, error=str(e))

        try:
            report = self.execute(scenario, path)
        except (ScenarioParseError, ScenarioValidationError) as e:
            logger.error(f"场景输入无效: {e}")
            return RunOutcome(path=path, exit_code=EXIT_INVALID, error=str(e))
        except Exception as e:
            logger.error(f"场景 {name} 计算失败: {type(e).__name__}: {e}")
            return RunOutcome(path=path, exit_code=EXIT_FAIL, error=f"{type(e).__name__}: {e}")

        stem = os.path.splitext(name)[0]
        report_path = self._output_path(scenario.output_path, f"{stem}.json")
        write_json_report(report_path, report.to_dict())

        if report.passed:
            logger.info(f"场景 {name} 通过（{len(report.residuals)} 项检查）")
        else:
            failed = ", ".join(check.name for check in report.failed_checks)
            logger.warning(f"场景 {name} 未通过: {failed}")
        return RunOutcome(
            path=path,
            exit_code=EXIT_PASS if report.passed else EXIT_FAIL,
            report=report,
            report_path=report_path,
        )

    def discover(self, directory: str) -> List[str]:
        """目录下的场景文件，按文件名排序"""
        if not os.path.isdir(directory):
            raise ScenarioParseError(f"场景目录不存在: {directory}")
        paths = set()
        for pattern in self.settings.runner.scenario_patterns:
            paths.update(glob(os.path.join(directory, pattern)))
        return sorted(paths, key=os.path.basename)

    async def run_all_async(self, directory: str) -> List[RunOutcome]:
        """并发运行目录下的全部场景，结果顺序与文件名顺序一致"""
        paths = self.discover(directory)
        if not paths:
            logger.warning(f"目录中没有场景文件: {directory}")
            return []

        logger.info(f"开始批量运行 {len(paths)} 个场景")
        semaphore = asyncio.Semaphore(self.settings.runner.max_concurrent)
        loop = asyncio.get_running_loop()

        async def _run_one(path: str) -> RunOutcome:
            async with semaphore:
                return await loop.run_in_executor(None, self.run, path)

        results = await asyncio.gather(*[_run_one(path) for path in paths], return_exceptions=True)

        outcomes = []
        for path, result in zip(paths, results):
            if isinstance(result, Exception):
                logger.error(f"场景 {os.path.basename(path)} 异常: {result}")
                outcomes.append(RunOutcome(path=path, exit_code=EXIT_FAIL, error=str(result)))
            else:
                outcomes.append(result)

        passed = sum(1 for outcome in outcomes if outcome.exit_code == EXIT_PASS)
        logger.info(f"批量运行完成: 通过 {passed}, 未通过 {len(outcomes) - passed}")
        return outcomes

    def run_all(self, directory: str) -> Tuple[List[RunOutcome], int]:
        """同步包装；返回 (结果列表, 最差退出码)"""
        outcomes = asyncio.run(self.run_all_async(directory))
        return outcomes, worst_exit_code(outcomes)


def worst_exit_code(outcomes: List[RunOutcome]) -> int:
    return max((outcome.exit_code for outcome in outcomes), default=EXIT_PASS)


def _system_from_specs(specs: List[ParticleSpec]) -> ParticleSystem:
    return ParticleSystem(tuple(ChargedParticle.from_dict(spec.model_dump()) for spec in specs))


def run_scenario(path: str, output_dir: Optional[str] = None) -> RunOutcome:
    """运行单个场景文件"""
    return ScenarioRunner(output_dir=output_dir).run(path)
