"""工具函数模块"""

from .logger import setup_logger
from .validators import validate_scenario_file, validate_csv_header

__all__ = ["setup_logger", "validate_scenario_file", "validate_csv_header"]
