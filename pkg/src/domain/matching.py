"""Value types for the continuity (matching) system."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.domain.ring import RingConfig

ROW_LABELS = (
    "u(r_i)",
    "u'(r_i)",
    "w(r_i)",
    "w'(r_i)",
    "u(1)",
    "u'(1)",
    "w(1)",
    "w'(1)",
)

COLUMN_LABELS = ("c1", "d1", "c21", "d21", "c22", "d22", "c3", "d3")


class Region(str, Enum):
    """Radial regions and the coefficient columns that belong to each."""

    INNER_BARRIER = "region1"  # 0 <= r < r_i
    WELL = "region2"  # r_i <= r <= 1
    OUTER_BARRIER = "region3"  # r > 1

    @property
    def columns(self) -> slice:
        return _REGION_COLUMNS[self]


_REGION_COLUMNS = {
    Region.INNER_BARRIER: slice(0, 2),
    Region.WELL: slice(2, 6),
    Region.OUTER_BARRIER: slice(6, 8),
}


@dataclass(frozen=True)
class MatchMatrix:
    """The 8x8 continuity matrix at one energy.

    Rows follow ROW_LABELS (region-1 minus region-2 at r_i, region-2 minus
    region-3 at r = 1). Columns follow COLUMN_LABELS. The region-3 columns
    vanish in the r_i rows and the region-1 columns vanish in the r = 1 rows.
    """

    entries: np.ndarray
    cfg: RingConfig
    e: float


@dataclass(frozen=True)
class DetValue:
    """Determinant as sign and natural-log magnitude.

    sign is 0 only for an exactly singular factorization, in which case
    log_magnitude is -inf.
    """

    sign: int
    log_magnitude: float

    @property
    def value(self) -> float:
        """sign * exp(log_magnitude); may overflow to +-inf."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_magnitude)
        except OverflowError:
            return self.sign * math.inf

    def scaled(self, factor: float) -> "DetValue":
        """The determinant multiplied by a real factor."""
        if factor == 0.0 or self.sign == 0:
            return DetValue(sign=0, log_magnitude=-math.inf)
        sign = self.sign if factor > 0 else -self.sign
        return DetValue(sign=sign, log_magnitude=self.log_magnitude + math.log(abs(factor)))
