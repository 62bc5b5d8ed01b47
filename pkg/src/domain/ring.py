"""Problem definition and region-basis value types for the Rashba ring."""

import math
from dataclasses import dataclass
from enum import Enum

from scipy import constants

from src.utils.error_handling import InvalidParameterError

ComplexValue = complex
"""Complex scalar used for Bessel arguments, wavenumbers and kernel results."""


class BesselFamily(str, Enum):
    """The four integer-order cylinder function kinds."""

    J = "J"
    Y = "Y"
    I = "I"  # noqa: E741
    K = "K"


class RegionKind(str, Enum):
    """Where a wavenumber pair applies."""

    OUTER = "outer"  # barrier regions 0 < r < r_i and r > 1
    WELL = "well"  # r_i < r < 1


class BasisLabel(str, Enum):
    """Which region basis a BasisEval belongs to."""

    REGION1 = "region1"
    REGION2_J = "region2-J"
    REGION2_Y = "region2-Y"
    REGION3 = "region3"


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise InvalidParameterError(
                f"{name} must be finite, got {value}", details={name: value}
            )


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional description of the ring in SI units.

    Attributes:
        effective_mass: Effective electron mass mu (kg)
        inner_radius: Inner well radius rho_i (m)
        outer_radius: Outer well radius rho_o (m)
        well_depth: Barrier height V (J); zero is allowed
        rashba_strength: Rashba coupling beta_R divided by hbar (m/s); any sign
        hbar: Reduced Planck constant (J s)
    """

    effective_mass: float
    inner_radius: float
    outer_radius: float
    well_depth: float
    rashba_strength: float
    hbar: float = constants.hbar

    def __post_init__(self) -> None:
        _require_finite(
            effective_mass=self.effective_mass,
            inner_radius=self.inner_radius,
            outer_radius=self.outer_radius,
            well_depth=self.well_depth,
            rashba_strength=self.rashba_strength,
            hbar=self.hbar,
        )
        for name in ("effective_mass", "inner_radius", "outer_radius", "hbar"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(
                    f"{name} must be strictly positive", details={name: getattr(self, name)}
                )
        if self.well_depth < 0:
            raise InvalidParameterError(
                "well_depth must be non-negative", details={"well_depth": self.well_depth}
            )
        if self.inner_radius >= self.outer_radius:
            raise InvalidParameterError(
                "inner_radius must be smaller than outer_radius",
                details={"inner_radius": self.inner_radius, "outer_radius": self.outer_radius},
            )

    @property
    def energy_unit(self) -> float:
        """hbar^2 / (2 mu rho_o^2): one dimensionless energy unit in joules."""
        return self.hbar**2 / (2.0 * self.effective_mass * self.outer_radius**2)


@dataclass(frozen=True)
class RingConfig:
    """Dimensionless problem definition.

    Attributes:
        m: Total angular quantum number; the spinor channels carry m and m+1
        v: Barrier height in units of hbar^2/(2 mu rho_o^2), strictly positive
        beta: Rashba coupling, any sign
        r_i: Inner radius as a fraction of the outer radius, in (0, 1)
    """

    m: int
    v: float
    beta: float
    r_i: float

    def __post_init__(self) -> None:
        if isinstance(self.m, bool) or not isinstance(self.m, int):
            raise InvalidParameterError(
                f"m must be an integer, got {self.m!r}", details={"m": repr(self.m)}
            )
        _require_finite(v=self.v, beta=self.beta, r_i=self.r_i)
        if self.v <= 0:
            raise InvalidParameterError("v must be strictly positive", details={"v": self.v})
        if not 0.0 < self.r_i < 1.0:
            raise InvalidParameterError("r_i must lie in (0, 1)", details={"r_i": self.r_i})

    @property
    def relative_width(self) -> float:
        """Ring width relative to the outer radius, 1 - r_i."""
        return 1.0 - self.r_i

    def mirrored(self) -> "RingConfig":
        """The configuration under the composed replacement m -> -(m+1), beta -> -beta."""
        return RingConfig(m=-(self.m + 1), v=self.v, beta=-self.beta, r_i=self.r_i)

    def label(self) -> str:
        return f"m={self.m} v={self.v:g} beta={self.beta:g} r_i={self.r_i:g}"


@dataclass(frozen=True)
class DimensionlessParams:
    """Output of nondimensionalization: the RingConfig fields plus the energy."""

    v: float
    beta: float
    r_i: float
    e: float

    def to_ring_config(self, m: int) -> RingConfig:
        return RingConfig(m=m, v=self.v, beta=self.beta, r_i=self.r_i)


@dataclass(frozen=True)
class WavenumberPair:
    """Channel wavenumbers k+ and k- of one region kind.

    Outer pairs are complex conjugates with non-negative real part. Well pairs
    are real; one of them is negative when the energy is below zero.
    """

    k_plus: ComplexValue
    k_minus: ComplexValue
    region_kind: RegionKind

    def __post_init__(self) -> None:
        if self.region_kind is RegionKind.OUTER:
            if self.k_minus != self.k_plus.conjugate() or self.k_plus.real < 0:
                raise InvalidParameterError(
                    "outer wavenumbers must be a conjugate pair with Re(k+) >= 0",
                    details={"k_plus": str(self.k_plus), "k_minus": str(self.k_minus)},
                )
        elif self.k_plus.imag != 0.0 or self.k_minus.imag != 0.0:
            raise InvalidParameterError(
                "well wavenumbers must be real",
                details={"k_plus": str(self.k_plus), "k_minus": str(self.k_minus)},
            )

    @property
    def decay_rate(self) -> float:
        """Re(k+), the exponential decay rate of an outer pair."""
        return self.k_plus.real


@dataclass(frozen=True)
class BasisEval:
    """Values and radial derivatives of one region basis pair (f, g) at one radius."""

    f: float
    g: float
    df: float
    dg: float
    label: BasisLabel


@dataclass(frozen=True)
class TailPhase:
    """Phase offset gamma of the oscillating-decaying tail, in radians."""

    gamma: float

    @property
    def cos(self) -> float:
        return math.cos(self.gamma)

    @property
    def sin(self) -> float:
        return math.sin(self.gamma)
