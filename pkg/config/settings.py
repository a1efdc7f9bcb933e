"""应用配置管理"""
from typing import Tuple
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict
import os


class TolerancesConfig(BaseModel):
    """各类场景的默认容差"""
    algebra: float = Field(default=1e-12)
    covariance: float = Field(default=1e-9)
    moment_relation: float = Field(default=1e-12)
    multipole: float = Field(default=1.5e-2)
    loop_far_field: float = Field(default=1e-2)
    block: float = Field(default=1e-12)
    splitting: float = Field(default=1e-10)
    commutation: float = Field(default=1e-12)
    dispersion: float = Field(default=1e-10)
    continuum: float = Field(default=5e-3)
    second_order: float = Field(default=1e-9)
    nonrel_discrepancy: float = Field(default=2e-2)
    nonrel_ratio_window: Tuple[float, float] = Field(default=(0.35, 0.65))
    hermitian: float = Field(default=1e-12)
    antisymmetry: float = Field(default=1e-10)
    gauge: float = Field(default=1e-10)
    field_consistency: float = Field(default=1e-6)


class LatticeConfig(BaseModel):
    """格点求解配置"""
    wilson_r: float = Field(default=1.0)
    max_points: int = Field(default=1024)
    default_points: int = Field(default=256)
    default_spacing: float = Field(default=0.1)
    nonrel_points: int = Field(default=1024)
    nonrel_spacing: float = Field(default=0.04)
    nonrel_wilson_r: float = Field(default=0.02)
    nonrel_box_decay: float = Field(default=5.0)
    continuum_points: int = Field(default=256)
    continuum_spacing: float = Field(default=0.002)


class PlaneWaveConfig(BaseModel):
    """平面波基组配置"""
    box_length: float = Field(default=10.0)
    n_modes: int = Field(default=5)
    dimension: int = Field(default=3)


class RunnerConfig(BaseModel):
    """场景运行配置"""
    max_concurrent: int = Field(default=4)
    scenario_patterns: Tuple[str, ...] = Field(default=("*.json", "*.yaml", "*.yml"))


class ReportConfig(BaseModel):
    """报告输出配置"""
    significant_digits: int = Field(default=17)
    indent: int = Field(default=2)


class Settings(BaseSettings):
    """应用主配置"""
    # 基础配置
    app_name: str = Field(default="boostkit")
    debug: bool = Field(default=False)
    log_level: str = Field(default="INFO")
    seed: int = Field(default=20240917)

    # 模块配置
    tolerances: TolerancesConfig = Field(default_factory=TolerancesConfig)
    lattice: LatticeConfig = Field(default_factory=LatticeConfig)
    plane_wave: PlaneWaveConfig = Field(default_factory=PlaneWaveConfig)
    runner: RunnerConfig = Field(default_factory=RunnerConfig)
    report: ReportConfig = Field(default_factory=ReportConfig)

    # 文件路径
    scenario_dir: str = Field(default="./config/scenarios")
    output_dir: str = Field(default="./output")
    log_dir: str = Field(default="./logs")

    model_config = SettingsConfigDict(
        env_prefix="BOOSTKIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        extra="ignore",
    )


# 全局设置实例
settings = Settings()


def get_settings() -> Settings:
    """获取设置实例"""
    return settings


def ensure_directories():
    """确保必要的目录存在"""
    for directory in [settings.output_dir, settings.log_dir]:
        os.makedirs(directory, exist_ok=True)
