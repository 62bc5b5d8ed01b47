"""Numerical services: kernel, model, matching, spectrum, wavefunction, oracle."""

from src.services.spectrum import find_levels, level_count, spectrum_symmetry_check
from src.services.wavefunction import build_solution

__all__ = [
    "build_solution",
    "find_levels",
    "level_count",
    "spectrum_symmetry_check",
]
