"""Value types for ring configurations, matching systems, spectra and solutions."""

from .matching import DetValue, MatchMatrix, Region
from .oracle import ShootingResult, StateVector
from .ring import BasisEval, DimensionlessParams, PhysicalParams, RingConfig, WavenumberPair
from .spectrum import EnergyLevel, EnergyWindow, SymmetryReport
from .wavefunction import RadialSolution, SampledWavefunction

__all__ = [
    "BasisEval",
    "DetValue",
    "DimensionlessParams",
    "EnergyLevel",
    "EnergyWindow",
    "MatchMatrix",
    "PhysicalParams",
    "RadialSolution",
    "Region",
    "RingConfig",
    "SampledWavefunction",
    "ShootingResult",
    "StateVector",
    "SymmetryReport",
    "WavenumberPair",
]
