"""Value types for bound-state spectra."""

from dataclasses import dataclass, field
from typing import Optional

from src.domain.ring import RingConfig


@dataclass(frozen=True)
class EnergyWindow:
    """Scan interval inside the bound window (-beta^2/4, v - beta^2/4)."""

    e_min: float
    e_max: float

    @property
    def is_empty(self) -> bool:
        return not self.e_min < self.e_max

    @property
    def width(self) -> float:
        return max(0.0, self.e_max - self.e_min)


@dataclass(frozen=True)
class EnergyLevel:
    """One refined bound-state energy.

    Attributes:
        e: Energy (bracket midpoint)
        index: Position in the ascending spectrum, starting at 0
        bracket: (lo, hi) with opposite secular signs and hi - lo <= tol
        residual_logdet_gap: log|D| at e minus the larger log|D| at the two scan
            points that bracketed it; strongly negative for a genuine zero
    """

    e: float
    index: int
    bracket: tuple[float, float]
    residual_logdet_gap: float


@dataclass
class SymmetryReport:
    """Comparison of a spectrum with its image under (m, beta) -> (-(m+1), -beta)."""

    cfg: RingConfig
    levels: list[float]
    mirrored_levels: list[float]
    max_abs_delta: float
    m_only_delta: Optional[float] = None
    beta_only_delta: Optional[float] = None
    notes: list[str] = field(default_factory=list)

    @property
    def counts_match(self) -> bool:
        return len(self.levels) == len(self.mirrored_levels)
