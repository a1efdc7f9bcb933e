"""业务服务模块"""

from .scenario_runner import ScenarioRunner, run_scenario

__all__ = ["ScenarioRunner", "run_scenario"]
