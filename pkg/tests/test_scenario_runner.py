"""场景运行器与命令行测试"""

import json
import os
import sys

import pytest
from click.testing import CliRunner

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.settings import get_settings
from src import main
from src.models.scenario import AlgebraCheckScenario, SplittingScenario
from src.services.scenario_runner import (
    EXIT_FAIL,
    EXIT_INVALID,
    EXIT_PASS,
    ScenarioRunner,
    run_scenario,
    worst_exit_code,
)
from src.utils.exceptions import ScenarioParseError, ScenarioValidationError

BUNDLED_SCENARIOS = os.path.join(os.path.dirname(__file__), '..', 'config', 'scenarios')

ALGEBRA = {"kind": "algebra-check", "samples": 10}


def _write(directory, name, data):
    path = os.path.join(str(directory), name)
    with open(path, "w", encoding="utf-8") as f:
        if isinstance(data, str):
            f.write(data)
        else:
            json.dump(data, f)
    return path


@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / "output"
    path.mkdir()
    return str(path)


@pytest.fixture
def runner(output_dir):
    return ScenarioRunner(output_dir=output_dir)


class TestLoad:
    """测试场景解析与验证"""

    def test_load_json(self, runner, tmp_path):
        scenario = runner.load(_write(tmp_path, "a.json", ALGEBRA))
        assert isinstance(scenario, AlgebraCheckScenario)
        assert scenario.samples == 10
        assert scenario.tolerance == get_settings().tolerances.algebra

    def test_load_yaml(self, runner, tmp_path):
        text = "kind: splitting\ne_field: [0.0, 0.0, 0.001]\nbasis:\n  type: lattice\n  n_points: 32\n"
        scenario = runner.load(_write(tmp_path, "s.yaml", text))
        assert isinstance(scenario, SplittingScenario)
        assert scenario.basis.spacing == get_settings().lattice.default_spacing

    def test_missing_file(self, runner, tmp_path):
        with pytest.raises(ScenarioParseError):
            runner.load(str(tmp_path / "missing.json"))

    def test_bad_json(self, runner, tmp_path):
        with pytest.raises(ScenarioParseError):
            runner.load(_write(tmp_path, "bad.json", "{not json"))

    def test_missing_kind(self, runner, tmp_path):
        with pytest.raises(ScenarioValidationError, match="kind"):
            runner.load(_write(tmp_path, "nokind.json", {"samples": 3}))

    def test_missing_required_field(self, runner, tmp_path):
        with pytest.raises(ScenarioValidationError, match="e_field"):
            runner.load(_write(tmp_path, "split.json", {"kind": "splitting"}))

    def test_unknown_field(self, runner, tmp_path):
        with pytest.raises(ScenarioValidationError, match="未知参数"):
            runner.load(_write(tmp_path, "extra.json", {**ALGEBRA, "colour": "red"}))

    def test_non_positive_tolerance(self, runner, tmp_path):
        with pytest.raises(ScenarioValidationError):
            runner.load(_write(tmp_path, "tol.json", {**ALGEBRA, "tolerance": 0.0}))

    def test_moments_requires_source(self, runner, tmp_path):
        with pytest.raises(ScenarioValidationError):
            runner.load(_write(tmp_path, "m.json", {"kind": "moments", "field_point": [0.0, 0.0, 10.0]}))

    def test_wilson_parameter_range(self, runner, tmp_path):
        with pytest.raises(ScenarioValidationError):
            runner.load(_write(tmp_path, "d.json", {"kind": "dirac1d", "wilson_r": 0.0}))


class TestRun:
    """测试单个场景的运行与输出"""

    def test_algebra_passes(self, runner, tmp_path, output_dir):
        outcome = runner.run(_write(tmp_path, "algebra.json", ALGEBRA))
        assert outcome.exit_code == EXIT_PASS
        assert outcome.status == "pass"
        assert outcome.report_path == os.path.join(output_dir, "algebra.json")
        with open(outcome.report_path, encoding="utf-8") as f:
            report = json.load(f)
        assert list(report)[:3] == ["kind", "source", "status"]
        assert report["status"] == "pass"
        assert report["source"] == "algebra.json"

    def test_reports_are_reproducible(self, runner, tmp_path):
        path = _write(tmp_path, "algebra.json", ALGEBRA)
        with open(runner.run(path).report_path, "rb") as f:
            first = f.read()
        with open(runner.run(path).report_path, "rb") as f:
            second = f.read()
        assert first == second
        assert first.endswith(b"\n")

    def test_tolerance_failure(self, runner, tmp_path):
        outcome = runner.run(_write(tmp_path, "strict.json", {**ALGEBRA, "covariance_tolerance": 1e-30}))
        assert outcome.exit_code == EXIT_FAIL
        assert outcome.status == "fail"
        assert "boost_covariance" in [check.name for check in outcome.report.failed_checks]
        with open(outcome.report_path, encoding="utf-8") as f:
            assert json.load(f)["status"] == "fail"

    def test_invalid_scenario_writes_nothing(self, runner, tmp_path, output_dir):
        outcome = runner.run(_write(tmp_path, "broken.json", {"kind": "splitting"}))
        assert outcome.exit_code == EXIT_INVALID
        assert outcome.status == "invalid"
        assert outcome.report is None
        assert os.listdir(output_dir) == []

    def test_precondition_failure_writes_nothing(self, runner, tmp_path, output_dir):
        data = {"kind": "splitting", "e_field": [0.0, 0.0, 0.001], "b_field": [0.0, 0.0, 0.1]}
        outcome = runner.run(_write(tmp_path, "magnetic.json", data))
        assert outcome.exit_code == EXIT_FAIL
        assert outcome.status == "error"
        assert "PreconditionError" in outcome.error
        assert os.listdir(output_dir) == []

    def test_splitting_spectrum_csv(self, runner, tmp_path, output_dir):
        data = {
            "kind": "splitting",
            "e_field": [0.0, 0.0, 0.001],
            "basis": {"type": "plane_wave", "box_length": 10.0, "n_modes": 5, "dimension": 1},
            "spectrum_path": "levels.csv",
        }
        outcome = runner.run(_write(tmp_path, "split.json", data))
        assert outcome.exit_code == EXIT_PASS
        with open(os.path.join(output_dir, "levels.csv"), encoding="utf-8") as f:
            lines = f.read().splitlines()
        assert lines[0] == "index,re,im,branch"
        assert len(lines) == 1 + 2 * 10
        assert lines[1].endswith(",plus")
        assert lines[-1].endswith(",minus")

    def test_output_paths(self, runner, tmp_path, output_dir):
        relative = runner.run(_write(tmp_path, "rel.json", {**ALGEBRA, "output_path": "nested/rel_report.json"}))
        assert relative.report_path == os.path.join(output_dir, "nested", "rel_report.json")
        assert os.path.isfile(relative.report_path)

        target = str(tmp_path / "elsewhere" / "abs_report.json")
        absolute = runner.run(_write(tmp_path, "abs.json", {**ALGEBRA, "output_path": target}))
        assert absolute.report_path == target
        assert os.path.isfile(target)

    def test_particles_file_relative_to_scenario(self, runner, tmp_path):
        scenario_dir = tmp_path / "scenarios"
        scenario_dir.mkdir()
        _write(
            scenario_dir, "pair.csv",
            "mass,charge,t,x,y,z,vx,vy,vz\n"
            "1.0,1.0,0.0,0.5,0.0,0.0,0.0,0.3,0.0\n"
            "1.0,1.0,0.0,-0.5,0.0,0.0,0.0,-0.3,0.0\n",
        )
        data = {"kind": "moments", "particles_file": "pair.csv", "field_point": [0.0, 0.0, 10.0]}
        outcome = runner.run(_write(scenario_dir, "pair.json", data))
        assert outcome.exit_code == EXIT_PASS
        names = [check.name for check in outcome.report.residuals]
        assert names == ["moment_relation", "multipole_relative_error"]

    def test_mixed_system_skips_relation(self, runner, tmp_path):
        data = {
            "kind": "moments",
            "particles": [
                {"mass": 1.0, "charge": 1.0, "x": 0.0, "y": 0.0, "z": 0.5},
                {"mass": 1.0, "charge": -1.0, "x": 0.0, "y": 0.0, "z": -0.5},
            ],
            "field_point": [0.0, 0.0, 10.0],
        }
        outcome = runner.run(_write(tmp_path, "dipole.json", data))
        assert outcome.exit_code == EXIT_PASS
        results = {item.name for item in outcome.report.results}
        assert "moment_relation_skipped" in results

    def test_bad_csv_header_is_invalid(self, runner, tmp_path):
        _write(tmp_path, "bad.csv", "m,q,t,x,y,z,vx,vy,vz\n1,1,0,1,0,0,0,0,0\n")
        data = {"kind": "moments", "particles_file": "bad.csv", "field_point": [0.0, 0.0, 10.0]}
        outcome = runner.run(_write(tmp_path, "badcsv.json", data))
        assert outcome.exit_code == EXIT_INVALID

    def test_compare_nonrel_defaults_pass(self, runner, tmp_path):
        """只给出 kind 时使用默认的比较网格与势阱"""
        outcome = runner.run(_write(tmp_path, "nonrel.json", {"kind": "compare-nonrel"}))
        assert outcome.exit_code == EXIT_PASS
        results = {item.name: item.value for item in outcome.report.results}
        assert results["box_decay"] > get_settings().lattice.nonrel_box_decay
        assert 0.35 <= results["ratio"] <= 0.65

    def test_run_scenario_helper(self, tmp_path, output_dir):
        outcome = run_scenario(_write(tmp_path, "helper.json", ALGEBRA), output_dir=output_dir)
        assert outcome.exit_code == EXIT_PASS


class TestRunAll:
    """测试批量运行"""

    def test_empty_directory(self, runner, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        assert runner.run_all(str(empty)) == ([], EXIT_PASS)

    def test_missing_directory(self, runner, tmp_path):
        with pytest.raises(ScenarioParseError):
            runner.run_all(str(tmp_path / "missing"))

    def test_worst_exit_code(self, runner, tmp_path):
        batch = tmp_path / "batch"
        batch.mkdir()
        _write(batch, "b_strict.json", {**ALGEBRA, "covariance_tolerance": 1e-30})
        _write(batch, "a_ok.json", ALGEBRA)
        _write(batch, "notes.txt", "ignored")
        outcomes, exit_code = runner.run_all(str(batch))
        assert [outcome.name for outcome in outcomes] == ["a_ok.json", "b_strict.json"]
        assert exit_code == EXIT_FAIL
        assert worst_exit_code(outcomes) == EXIT_FAIL

    def test_invalid_dominates(self, runner, tmp_path):
        batch = tmp_path / "batch"
        batch.mkdir()
        _write(batch, "a_ok.json", ALGEBRA)
        _write(batch, "b_broken.json", {"kind": "dirac1d", "bogus": 1})
        _, exit_code = runner.run_all(str(batch))
        assert exit_code == EXIT_INVALID

    def test_bundled_scenarios_pass(self, runner):
        outcomes, exit_code = runner.run_all(BUNDLED_SCENARIOS)
        failed = {outcome.name: outcome.error or [c.name for c in outcome.report.failed_checks]
                  for outcome in outcomes if outcome.exit_code != EXIT_PASS}
        assert len(outcomes) == 12
        assert failed == {}
        assert exit_code == EXIT_PASS


class TestCli:
    """测试命令行入口"""

    @pytest.fixture(autouse=True)
    def quiet(self, monkeypatch, tmp_path):
        settings = get_settings()
        monkeypatch.setattr(settings, "log_dir", str(tmp_path / "logs"))
        monkeypatch.setattr(settings, "output_dir", str(tmp_path / "output"))
        monkeypatch.setattr(main, "setup_logger", lambda: None)

    def test_run_command(self, tmp_path):
        path = _write(tmp_path, "cli.json", ALGEBRA)
        result = CliRunner().invoke(main.cli, ["run", path, "--output-dir", str(tmp_path / "out")])
        assert result.exit_code == EXIT_PASS
        assert "pass" in result.output
        assert os.path.isfile(str(tmp_path / "out" / "cli.json"))

    def test_run_invalid(self, tmp_path):
        path = _write(tmp_path, "cli.json", {"kind": "unknown"})
        result = CliRunner().invoke(main.cli, ["run", path])
        assert result.exit_code == EXIT_INVALID

    def test_run_all_command(self, tmp_path):
        batch = tmp_path / "batch"
        batch.mkdir()
        _write(batch, "one.json", ALGEBRA)
        result = CliRunner().invoke(main.cli, ["run-all", str(batch)])
        assert result.exit_code == EXIT_PASS
        assert "one.json" in result.output

    def test_run_all_missing_directory(self, tmp_path):
        result = CliRunner().invoke(main.cli, ["run-all", str(tmp_path / "nowhere")])
        assert result.exit_code == EXIT_INVALID

    def test_check_command(self):
        result = CliRunner().invoke(main.cli, ["check", "--representation", "weyl", "--samples", "5"])
        assert result.exit_code == 0
        assert "lorentz_algebra" in result.output
