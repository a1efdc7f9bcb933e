"""场景与报告模型"""

from typing import Annotated, Any, List, Literal, Optional, Tuple, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    PositiveInt,
    TypeAdapter,
    field_validator,
    model_validator,
)

from config.settings import get_settings

Vector3 = Tuple[float, float, float]


def _tol(name: str):
    return Field(default_factory=lambda: getattr(get_settings().tolerances, name))


def _lattice(name: str):
    return Field(default_factory=lambda: getattr(get_settings().lattice, name))


class _ScenarioModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ParticleSpec(_ScenarioModel):
    """内联粒子描述，字段与 CSV 列一致"""
    mass: PositiveFloat
    charge: float
    t: float = 0.0
    x: float
    y: float
    z: float
    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0


class LoopSpec(_ScenarioModel):
    """内置电流回路"""
    shape: Literal["square", "circle"]
    size: PositiveFloat
    current: float = 1.0
    segments: PositiveInt = 40


class BasisSpec(_ScenarioModel):
    """空间基组描述"""
    type: Literal["plane_wave", "lattice"] = "plane_wave"
    box_length: PositiveFloat = Field(default_factory=lambda: get_settings().plane_wave.box_length)
    n_modes: PositiveInt = Field(default_factory=lambda: get_settings().plane_wave.n_modes)
    dimension: Literal[1, 2, 3] = Field(default_factory=lambda: get_settings().plane_wave.dimension)
    n_points: PositiveInt = _lattice("default_points")
    spacing: PositiveFloat = _lattice("default_spacing")
    wilson_r: float = _lattice("wilson_r")


class AlgebraCheckScenario(_ScenarioModel):
    """Clifford 代数与协变性检查"""
    kind: Literal["algebra-check"]
    representation: Literal["dirac", "weyl"] = "dirac"
    samples: PositiveInt = 100
    max_rapidity: PositiveFloat = 2.0
    tolerance: PositiveFloat = _tol("algebra")
    covariance_tolerance: PositiveFloat = _tol("covariance")
    output_path: Optional[str] = None


class MomentsScenario(_ScenarioModel):
    """矩张量与多极展开"""
    kind: Literal["moments"]
    particles_file: Optional[str] = None
    particles: Optional[List[ParticleSpec]] = None
    loop_file: Optional[str] = None
    loop: Optional[LoopSpec] = None
    field_point: Optional[Vector3] = None
    order: Literal["monopole", "dipole"] = "dipole"
    boost: Optional[Vector3] = None
    relation_tolerance: PositiveFloat = _tol("moment_relation")
    multipole_tolerance: PositiveFloat = _tol("multipole")
    loop_tolerance: PositiveFloat = _tol("loop_far_field")
    antisymmetry_tolerance: PositiveFloat = _tol("antisymmetry")
    output_path: Optional[str] = None

    @model_validator(mode="after")
    def _check_sources(self):
        if self.particles_file and self.particles:
            raise ValueError("particles_file 与 particles 不能同时给出")
        if self.loop_file and self.loop:
            raise ValueError("loop_file 与 loop 不能同时给出")
        if not any([self.particles_file, self.particles, self.loop_file, self.loop]):
            raise ValueError("缺少源: 需要 particles、particles_file、loop 或 loop_file 之一")
        return self


class SplittingScenario(_ScenarioModel):
    """静电场下的能级分裂"""
    kind: Literal["splitting"]
    e_field: Vector3
    b_field: Vector3 = (0.0, 0.0, 0.0)
    charge: float = 1.0
    mass: PositiveFloat = 1.0
    basis: BasisSpec = Field(default_factory=BasisSpec)
    hermitian_tolerance: PositiveFloat = _tol("hermitian")
    splitting_tolerance: PositiveFloat = _tol("splitting")
    block_tolerance: PositiveFloat = _tol("block")
    commutation_tolerance: PositiveFloat = _tol("commutation")
    energy_scale: PositiveFloat = 1.0
    energy_unit: str = "natural"
    spectrum_path: Optional[str] = None
    output_path: Optional[str] = None


class Dirac1dScenario(_ScenarioModel):
    """一维格点 Dirac 谱"""
    kind: Literal["dirac1d"]
    n_points: PositiveInt = _lattice("default_points")
    spacing: PositiveFloat = _lattice("default_spacing")
    mass: PositiveFloat = 1.0
    charge: float = 1.0
    wilson_r: float = _lattice("wilson_r")
    vector_potential: float = 0.0
    scalar_potential: float = 0.0
    gauge_winding: int = 1
    continuum_points: PositiveInt = _lattice("continuum_points")
    continuum_spacing: PositiveFloat = _lattice("continuum_spacing")
    max_ka: PositiveFloat = 0.3
    hermitian_tolerance: PositiveFloat = _tol("hermitian")
    dispersion_tolerance: PositiveFloat = _tol("dispersion")
    continuum_tolerance: PositiveFloat = _tol("continuum")
    second_order_tolerance: PositiveFloat = _tol("second_order")
    gauge_tolerance: PositiveFloat = _tol("gauge")
    spectrum_path: Optional[str] = None
    output_path: Optional[str] = None

    @field_validator("wilson_r")
    @classmethod
    def _check_wilson(cls, value: float) -> float:
        if not 0.0 < value <= 1.0:
            raise ValueError(f"wilson_r 必须在 (0, 1] 内，收到 {value}")
        return value


class CompareNonrelScenario(_ScenarioModel):
    """非相对论极限比较"""
    kind: Literal["compare-nonrel"]
    well_depth: NonNegativeFloat = 0.04
    well_width: PositiveFloat = 5.0
    mass: PositiveFloat = 1.0
    charge: float = 1.0
    n_points: PositiveInt = _lattice("nonrel_points")
    spacing: PositiveFloat = _lattice("nonrel_spacing")
    wilson_r: float = _lattice("nonrel_wilson_r")
    discrepancy_tolerance: PositiveFloat = _tol("nonrel_discrepancy")
    ratio_window: Tuple[float, float] = Field(
        default_factory=lambda: tuple(get_settings().tolerances.nonrel_ratio_window)
    )
    zero_depth_tolerance: PositiveFloat = 1e-6
    output_path: Optional[str] = None

    @field_validator("ratio_window")
    @classmethod
    def _check_window(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        if not 0.0 < value[0] < value[1]:
            raise ValueError(f"ratio_window 必须满足 0 < 下限 < 上限，收到 {value}")
        return value


Scenario = Annotated[
    Union[
        AlgebraCheckScenario,
        MomentsScenario,
        SplittingScenario,
        Dirac1dScenario,
        CompareNonrelScenario,
    ],
    Field(discriminator="kind"),
]

SCENARIO_ADAPTER = TypeAdapter(Scenario)


class ResidualCheck(BaseModel):
    """带容差的残差；给出 lower 时要求 lower ≤ value ≤ tolerance"""
    name: str
    value: float
    tolerance: float
    lower: Optional[float] = None

    @property
    def passed(self) -> bool:
        if self.value != self.value:
            return False
        if self.lower is not None and self.value < self.lower:
            return False
        return self.value <= self.tolerance


class NamedValue(BaseModel):
    """报告中的命名结果（可为复数或列表）"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    value: Any


class Report(BaseModel):
    """场景报告"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: str
    source: str
    scenario: dict
    results: List[NamedValue] = Field(default_factory=list)
    residuals: List[ResidualCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.residuals)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def add_result(self, name: str, value: Any) -> None:
        self.results.append(NamedValue(name=name, value=value))

    def add_residual(self, name: str, value: float, tolerance: float, lower: Optional[float] = None) -> None:
        self.residuals.append(
            ResidualCheck(name=name, value=float(value), tolerance=float(tolerance), lower=lower)
        )

    @property
    def failed_checks(self) -> List[ResidualCheck]:
        return [check for check in self.residuals if not check.passed]

    def to_dict(self) -> dict:
        """固定字段顺序的报告字典"""
        residuals = []
        for check in self.residuals:
            entry = {"name": check.name, "value": check.value, "tolerance": check.tolerance}
            if check.lower is not None:
                entry["lower"] = check.lower
            entry["passed"] = check.passed
            residuals.append(entry)
        return {
            "kind": self.kind,
            "source": self.source,
            "status": self.status,
            "scenario": self.scenario,
            "results": [{"name": item.name, "value": item.value} for item in self.results],
            "residuals": residuals,
        }
