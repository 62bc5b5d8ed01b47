"""Value types for radial solutions and their samples."""

from dataclasses import dataclass, field, replace

import numpy as np

from src.domain.matching import COLUMN_LABELS
from src.domain.ring import RingConfig
from src.utils.error_handling import InvalidParameterError


@dataclass(frozen=True)
class RadialSolution:
    """Piecewise radial solution (u, w) at one bound energy.

    Attributes:
        cfg: Ring configuration
        e: Bound energy
        coefficients: Unit-norm null vector in COLUMN_LABELS order
        norm: Factor applied to every region so that the probability integral is 1
        r_tail: Radius beyond which the closed-form asymptote replaces K
        normalized: True once norm came from a probability integral
        max_order: Bessel order cap used for evaluation
    """

    cfg: RingConfig
    e: float
    coefficients: np.ndarray
    norm: float
    r_tail: float
    normalized: bool = False
    max_order: int = 64

    def __post_init__(self) -> None:
        if self.coefficients.shape != (len(COLUMN_LABELS),):
            raise InvalidParameterError(
                "coefficients must hold eight entries",
                details={"shape": self.coefficients.shape},
            )
        if not self.norm > 0:
            raise InvalidParameterError("norm must be positive", details={"norm": self.norm})

    def coefficient(self, label: str) -> float:
        return float(self.coefficients[COLUMN_LABELS.index(label)])

    def with_norm(self, norm: float) -> "RadialSolution":
        return replace(self, norm=norm, normalized=True)


@dataclass(frozen=True)
class RegionProbabilities:
    """Share of the probability integral in each radial interval."""

    inner_barrier: float
    well: float
    outer_barrier: float
    tail: float

    @property
    def total(self) -> float:
        return self.inner_barrier + self.well + self.outer_barrier + self.tail


@dataclass(frozen=True)
class SampledWavefunction:
    """u(r) and w(r) on a strictly increasing grid holding r_i and 1 exactly."""

    r: np.ndarray
    u: np.ndarray
    w: np.ndarray
    cfg: RingConfig
    e: float
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.r.size)
