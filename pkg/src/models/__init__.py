"""数据模型模块"""

from .lorentz import GammaSet, RapidityVector, ResidualReport, SpinorTransform, SpinTensor, VectorTransform
from .particles import ChargedParticle, MomentTensor, OrbitalTensor, ParticleSystem, StaticCurrentLoop
from .fields import FieldConfig, Grid1D, LatticeBasis, PlaneWaveBasis
from .operators import LatticeDiracOperator, NonRelComparison, PauliOperator, SecondOrderOperator, SpectrumResult
from .scenario import Report, ResidualCheck, SCENARIO_ADAPTER

__all__ = [
    "GammaSet", "RapidityVector", "ResidualReport", "SpinorTransform", "SpinTensor", "VectorTransform",
    "ChargedParticle", "MomentTensor", "OrbitalTensor", "ParticleSystem", "StaticCurrentLoop",
    "FieldConfig", "Grid1D", "LatticeBasis", "PlaneWaveBasis",
    "LatticeDiracOperator", "NonRelComparison", "PauliOperator", "SecondOrderOperator", "SpectrumResult",
    "Report", "ResidualCheck", "SCENARIO_ADAPTER",
]
