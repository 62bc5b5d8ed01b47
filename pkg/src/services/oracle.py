"""
Independent eigenvalue check by direct integration of the radial equations.

The coupled system for one angular channel pair is

    u'' = -u'/r + (m^2/r^2 + V - e) u + beta (w' + (m+1) w / r)
    w'' = -w'/r + ((m+1)^2/r^2 + V - e) w - beta (u' - m u / r)

with V = v in the barriers and V = 0 in the well. Two regular solutions are
integrated outward from a small radius, two decaying solutions inward from
beyond the well, and the 4x4 determinant of their states at a junction
inside the well vanishes at a bound energy. No Bessel function is used.
"""

import cmath
import logging
import math
from typing import Optional

import numpy as np
from scipy import integrate

from src.domain.matching import DetValue
from src.domain.oracle import OracleRegion, ShootingResult, StateVector
from src.domain.ring import RingConfig
from src.domain.spectrum import EnergyWindow
from src.services import ring_model, spectrum
from src.utils.error_handling import (
    InvalidParameterError,
    SingularityError,
    StiffnessError,
)

logger = logging.getLogger(__name__)

DEFAULT_START_OFFSET = 1e-4
DEFAULT_RTOL = 1e-11
DEFAULT_ATOL = 1e-14
DEFAULT_SCAN_POINTS = 200
DEFAULT_MAX_STEPS = 200_000
DEFAULT_ORACLE_TOL = 1e-7
DEFAULT_REORTHOGONALIZE_RATIO = 1e8

INWARD_DECAY_LENGTHS = 16.0
MAX_INWARD_START = 61.0
# Energies this far below v - beta^2/4 keep kappa >= 16 / (MAX_INWARD_START - 1)
ORACLE_WINDOW_INSET = (INWARD_DECAY_LENGTHS / (MAX_INWARD_START - 1.0)) ** 2


def _potential(region: OracleRegion, cfg: RingConfig) -> float:
    return cfg.v if region is OracleRegion.BARRIER else 0.0


def _field(r: float, y: np.ndarray, m: int, potential: float, e: float, beta: float) -> np.ndarray:
    # y holds the rows u, u', w, w' of one or more solutions, flattened row-major
    u, du, w, dw = np.reshape(y, (4, -1))
    inv_r = 1.0 / r
    d2u = -du * inv_r + (m * m * inv_r * inv_r + potential - e) * u + beta * (
        dw + (m + 1) * w * inv_r
    )
    d2w = -dw * inv_r + ((m + 1) ** 2 * inv_r * inv_r + potential - e) * w - beta * (
        du - m * u * inv_r
    )
    return np.stack([du, d2u, dw, d2w]).ravel()


def rhs(
    region: OracleRegion, cfg: RingConfig, e: float, r: float, s: StateVector
) -> StateVector:
    """
    Derivative of (u, u', w, w') with respect to r.

    Raises:
        SingularityError: r <= 0, where the 1/r terms diverge
    """
    if not r > 0.0:
        raise SingularityError(
            "radial equations are singular at r = 0", details={"r": r}
        )
    values = _field(r, s.as_array(), cfg.m, _potential(region, cfg), e, cfg.beta)
    return StateVector.from_array(values)


class _Integrator:
    """Carries two fundamental solutions across one interval at a time."""

    def __init__(
        self,
        cfg: RingConfig,
        e: float,
        *,
        rtol: float,
        atol: float,
        max_steps: int,
        reorthogonalize_ratio: float,
    ):
        self.cfg = cfg
        self.e = e
        self.rtol = rtol
        self.atol = atol
        self.max_steps = max_steps
        self.reorthogonalize_ratio = reorthogonalize_ratio
        self.steps = 0
        self.reorthogonalizations = 0

    def _chunk_length(self, region: OracleRegion) -> float:
        rate = math.sqrt(abs(_potential(region, self.cfg) - self.e) + 0.25 * self.cfg.beta**2)
        return 1.0 / max(1.0, rate)

    def _rescale(self, columns: np.ndarray) -> np.ndarray:
        columns = columns / np.linalg.norm(columns, axis=0)
        if np.linalg.cond(columns) > self.reorthogonalize_ratio:
            q, r = np.linalg.qr(columns)
            columns = q * np.sign(np.diag(r))
            self.reorthogonalizations += 1
        return columns

    def propagate(
        self, region: OracleRegion, columns: np.ndarray, start: float, stop: float
    ) -> np.ndarray:
        """Integrate the (4, 2) state block from ``start`` to ``stop`` (either direction)."""
        potential = _potential(region, self.cfg)
        pieces = max(1, math.ceil(abs(stop - start) / self._chunk_length(region)))
        edges = np.linspace(start, stop, pieces + 1)
        args = (self.cfg.m, potential, self.e, self.cfg.beta)
        for a, b in zip(edges[:-1], edges[1:]):
            result = integrate.solve_ivp(
                _field,
                (float(a), float(b)),
                columns.ravel(),
                method="DOP853",
                rtol=self.rtol,
                atol=self.atol,
                args=args,
            )
            if result.status != 0:
                raise StiffnessError(
                    "radial integration failed",
                    details={
                        "e": self.e,
                        "interval": (float(a), float(b)),
                        "message": result.message,
                    },
                )
            self.steps += len(result.t) - 1
            if self.steps > self.max_steps:
                raise StiffnessError(
                    "integrator step count exceeded the cap",
                    details={"e": self.e, "steps": self.steps, "max_steps": self.max_steps},
                )
            columns = self._rescale(np.reshape(result.y[:, -1], (4, 2)))
        return columns


def _outward_seeds(m: int, offset: float) -> np.ndarray:
    # u ~ r^|m| with w = 0, and w ~ r^|m+1| with u = 0
    a, b = abs(m), abs(m + 1)
    seeds = np.array(
        [
            [offset**a, 0.0],
            [a * offset ** (a - 1) if a else 0.0, 0.0],
            [0.0, offset**b],
            [0.0, b * offset ** (b - 1) if b else 0.0],
        ]
    )
    return seeds / np.linalg.norm(seeds, axis=0)


def _inward_seeds(cfg: RingConfig, e: float, r: float) -> np.ndarray:
    # leading large-r form of K(k+ r): S = sqrt(pi / 2z) exp(-z)
    k = ring_model.outer_wavenumbers(e, cfg.v, cfg.beta).k_plus
    z = k * r
    value = cmath.sqrt(math.pi / (2.0 * z)) * cmath.exp(-z)
    slope = -(k + 1.0 / (2.0 * r)) * value
    u, du, w, dw = value, slope, -1j * value, -1j * slope
    seeds = np.array(
        [
            [u.real, u.imag],
            [du.real, du.imag],
            [w.real, w.imag],
            [dw.real, dw.imag],
        ]
    )
    return seeds / np.linalg.norm(seeds, axis=0)


def inward_start(cfg: RingConfig, e: float) -> float:
    """Starting radius of the inward integration, 16 decay lengths past the well."""
    kappa = ring_model.outer_wavenumbers(e, cfg.v, cfg.beta).decay_rate
    return min(1.0 + INWARD_DECAY_LENGTHS / kappa, MAX_INWARD_START)


def oracle_window(
    cfg: RingConfig, *, threshold_epsilon: float = ring_model.DEFAULT_THRESHOLD_EPSILON
) -> EnergyWindow:
    """
    The scan window of the oracle.

    The top is pulled down by ORACLE_WINDOW_INSET so that the capped inward
    start still lies 16 decay lengths past the well. Closer to the barrier
    threshold the truncated tail would turn the junction determinant into a
    spurious sign change.
    """
    window = spectrum.energy_window(cfg, threshold_epsilon=threshold_epsilon)
    _, upper = ring_model.bound_window(cfg.v, cfg.beta)
    return EnergyWindow(e_min=window.e_min, e_max=min(window.e_max, upper - ORACLE_WINDOW_INSET))


def default_junction(cfg: RingConfig) -> float:
    return 0.5 * (cfg.r_i + 1.0)


def shoot(
    cfg: RingConfig,
    e: float,
    junction: Optional[float] = None,
    *,
    start_offset: float = DEFAULT_START_OFFSET,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    max_steps: int = DEFAULT_MAX_STEPS,
    reorthogonalize_ratio: float = DEFAULT_REORTHOGONALIZE_RATIO,
    threshold_epsilon: float = ring_model.DEFAULT_THRESHOLD_EPSILON,
) -> ShootingResult:
    """
    Junction determinant at energy e.

    Raises:
        ThresholdError: e outside the bound window
        InvalidParameterError: junction outside (r_i, 1) or start_offset outside (0, r_i)
        StiffnessError: the integrator failed or exceeded max_steps
    """
    junction = default_junction(cfg) if junction is None else junction
    if not cfg.r_i < junction < 1.0:
        raise InvalidParameterError(
            "junction must lie inside the well", details={"junction": junction, "r_i": cfg.r_i}
        )
    if not 0.0 < start_offset < cfg.r_i:
        raise InvalidParameterError(
            "start_offset must lie in (0, r_i)", details={"start_offset": start_offset}
        )
    ring_model.check_bound_energy(e, cfg.v, cfg.beta, threshold_epsilon=threshold_epsilon)

    integrator = _Integrator(
        cfg,
        e,
        rtol=rtol,
        atol=atol,
        max_steps=max_steps,
        reorthogonalize_ratio=reorthogonalize_ratio,
    )
    outward = integrator.propagate(
        OracleRegion.BARRIER, _outward_seeds(cfg.m, start_offset), start_offset, cfg.r_i
    )
    outward = integrator.propagate(OracleRegion.WELL, outward, cfg.r_i, junction)

    r_start = inward_start(cfg, e)
    inward = integrator.propagate(
        OracleRegion.BARRIER, _inward_seeds(cfg, e, r_start), r_start, 1.0
    )
    inward = integrator.propagate(OracleRegion.WELL, inward, 1.0, junction)

    sign, log_magnitude = np.linalg.slogdet(np.hstack([outward, inward]))
    det = (
        DetValue(sign=int(sign), log_magnitude=float(log_magnitude))
        if sign != 0
        else DetValue(sign=0, log_magnitude=-math.inf)
    )
    return ShootingResult(matching_determinant=det, junction=junction, steps=integrator.steps)


def oracle_levels(
    cfg: RingConfig,
    tol: float = DEFAULT_ORACLE_TOL,
    *,
    scan_points: int = DEFAULT_SCAN_POINTS,
    junction: Optional[float] = None,
    refine_factor: int = spectrum.DEFAULT_REFINE_FACTOR,
    workers: int = 1,
    threshold_epsilon: float = ring_model.DEFAULT_THRESHOLD_EPSILON,
    start_offset: float = DEFAULT_START_OFFSET,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    max_steps: int = DEFAULT_MAX_STEPS,
    reorthogonalize_ratio: float = DEFAULT_REORTHOGONALIZE_RATIO,
) -> list[float]:
    """
    Bound energies from sign changes of the junction determinant.

    Args:
        cfg: Ring configuration
        tol: Final bracket width
        scan_points: Uniform scan resolution across oracle_window
        junction: Matching radius; defaults to the middle of the well

    Returns:
        Ascending list of energies
    """

    def evaluate(e: float) -> DetValue:
        return shoot(
            cfg,
            e,
            junction,
            start_offset=start_offset,
            rtol=rtol,
            atol=atol,
            max_steps=max_steps,
            reorthogonalize_ratio=reorthogonalize_ratio,
            threshold_epsilon=threshold_epsilon,
        ).matching_determinant

    levels = spectrum.locate_roots(
        evaluate,
        oracle_window(cfg, threshold_epsilon=threshold_epsilon),
        grid_points=scan_points,
        tol=tol,
        refine_factor=refine_factor,
        workers=workers,
    )
    energies = [level.e for level in levels]
    logger.info(
        "Oracle levels found",
        extra={"config": cfg.label(), "count": len(energies), "scan_points": scan_points},
    )
    return energies
