"""Value types for the ODE-integration oracle."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.domain.matching import DetValue


class OracleRegion(str, Enum):
    """Potential seen by the radial equations."""

    BARRIER = "barrier"  # V = v, regions 1 and 3
    WELL = "well"  # V = 0


@dataclass(frozen=True)
class StateVector:
    """(u, u', w, w') at one radius."""

    u: float
    du: float
    w: float
    dw: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.du, self.w, self.dw], dtype=float)

    @classmethod
    def from_array(cls, values: np.ndarray) -> "StateVector":
        u, du, w, dw = (float(x) for x in values)
        return cls(u=u, du=du, w=w, dw=dw)


@dataclass(frozen=True)
class ShootingResult:
    """Junction determinant of two outward and two inward fundamental solutions.

    Attributes:
        matching_determinant: det of the 4x4 matrix [outward | inward] at the junction
        junction: Matching radius inside the well
        steps: Accepted integrator steps over all four solutions
    """

    matching_determinant: DetValue
    junction: float
    steps: int = 0

    @property
    def value(self) -> float:
        return self.matching_determinant.value
