"""Input and output schemas for the command-line front end."""

import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from src.domain.ring import RingConfig


class OutputFormat(str, Enum):
    """Serialization of command output."""

    CSV = "csv"
    JSON = "json"
    MARKDOWN = "markdown"


class RunConfig(BaseModel):
    """One solver run as given by flags or by an entry of a --config file.

    Attributes:
        m: Total angular quantum number
        v: Dimensionless barrier height (> 0)
        beta: Dimensionless Rashba coupling
        r_i: Inner radius over outer radius, in (0, 1)
        grid_points: Scan resolution; settings default when omitted
        tol: Root bracket width; settings default when omitted
        output_format: csv, json or markdown
        output_path: File to write; stdout when omitted
    """

    m: int = Field(..., description="Total angular quantum number")
    v: float = Field(..., gt=0, description="Barrier height in units of hbar^2/(2 mu rho_o^2)")
    beta: float = Field(0.0, description="Rashba coupling 2 mu rho_o beta_R / hbar")
    r_i: float = Field(..., gt=0, lt=1, description="Inner radius over outer radius")
    grid_points: Optional[int] = Field(default=None, ge=16)
    tol: Optional[float] = Field(default=None, gt=0)
    output_format: OutputFormat = OutputFormat.CSV
    output_path: Optional[str] = None

    @field_validator("v", "beta", "r_i")
    @classmethod
    def validate_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    def ring_config(self) -> RingConfig:
        return RingConfig(m=self.m, v=self.v, beta=self.beta, r_i=self.r_i)


class RunBatch(BaseModel):
    """Sweep file contents: ``{"runs": [...]}``."""

    runs: list[RunConfig] = Field(..., min_length=1)


class LevelRecord(BaseModel):
    """One bound level with its refinement diagnostics."""

    index: int
    e: float
    bracket_lo: float
    bracket_hi: float
    residual_logdet_gap: float


class SpectrumResult(BaseModel):
    """Levels of one configuration."""

    m: int
    v: float
    beta: float
    r_i: float
    levels: list[LevelRecord]


class SpectrumReport(BaseModel):
    """JSON document emitted by the spectrum command."""

    results: list[SpectrumResult]


class DetScanRecord(BaseModel):
    """Regularized secular value at one energy; sign 0 and no log|det| where it failed."""

    e: float
    sign: int
    log_abs_det: Optional[float] = None


class WavefunctionRecord(BaseModel):
    r: float
    u: float
    w: float


class VerifyRecord(BaseModel):
    """Per-level comparison of the matching solver with the ODE oracle."""

    index: int
    e_matching: Optional[float]
    e_oracle: Optional[float]
    abs_delta: Optional[float]


class TableRow(BaseModel):
    """One row of a reproduced level table: a (m, r_i, beta) cell list."""

    m: int
    r_i: float
    beta: float
    levels: list[float]
    display: list[str]


class NondimRecord(BaseModel):
    """Dimensionless parameters derived from physical inputs."""

    v: float
    beta: float
    r_i: float
    e: Optional[float] = None
    energy_unit_mev: float


class SpectrumRow(BaseModel):
    """Flat spectrum row for CSV and markdown."""

    m: int
    v: float
    beta: float
    r_i: float
    index: int
    e: float
    bracket_lo: float
    bracket_hi: float
    residual_logdet_gap: float


class TableCellRecord(BaseModel):
    """One level of a reproduced table, raw and rounded for display."""

    m: int
    r_i: float
    beta: float
    index: int
    e: float
    display: str


class BesselProbeRecord(BaseModel):
    family: str
    n: int
    z_real: float
    z_imag: float
    value_real: float
    value_imag: float
