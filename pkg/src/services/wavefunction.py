"""
Radial solutions from the coefficient null vector.

A solution stores the unit null vector and one overall factor. Evaluation picks
the region basis by radius; past r_tail the closed-form tail replaces K.
Normalization integrates (u^2 + w^2) r region by region with QUADPACK and
adds the analytic tail.
"""

import cmath
import logging
import math
import time
from dataclasses import replace
from typing import Optional

import numpy as np
from scipy import integrate

from src.domain.matching import ROW_LABELS, Region
from src.domain.oracle import StateVector
from src.domain.ring import RingConfig
from src.domain.wavefunction import RadialSolution, RegionProbabilities, SampledWavefunction
from src.services import matching, ring_model
from src.services.bessel_kernel import DEFAULT_MAX_ORDER
from src.utils.error_handling import InvalidParameterError, QuadratureError

logger = logging.getLogger(__name__)

DEFAULT_TAIL_DECADES = 14.0
DEFAULT_MAX_TAIL_RADIUS = 500.0
DEFAULT_QUAD_ABS_TOL = 1e-10
DEFAULT_QUAD_LIMIT = 200
DEFAULT_SAMPLE_POINTS = 512
MIN_SAMPLE_POINTS = 16
SAMPLE_MAX_RADIUS = 3.0

_TRAPEZOID_POINTS = (4001, 8001, 16001)
_ESTIMATE_POINTS = 401


def tail_radius(
    cfg: RingConfig,
    e: float,
    *,
    tail_decades: float = DEFAULT_TAIL_DECADES,
    max_tail_radius: float = DEFAULT_MAX_TAIL_RADIUS,
) -> float:
    """Radius where the envelope exp(-kappa (r - 1)) has fallen by tail_decades decades."""
    kappa = ring_model.outer_wavenumbers(e, cfg.v, cfg.beta).decay_rate
    return min(1.0 + tail_decades * math.log(10.0) / kappa, max_tail_radius)


def _canonical(coefficients: np.ndarray) -> np.ndarray:
    x = np.asarray(coefficients, dtype=float)
    x = x / np.linalg.norm(x)
    if x[np.argmax(np.abs(x))] < 0:
        x = -x
    return x


def build_solution(
    cfg: RingConfig,
    e: float,
    *,
    normalize: bool = True,
    threshold_epsilon: float = ring_model.DEFAULT_THRESHOLD_EPSILON,
    rank_threshold: float = matching.DEFAULT_RANK_THRESHOLD,
    max_order: int = DEFAULT_MAX_ORDER,
    tail_decades: float = DEFAULT_TAIL_DECADES,
    max_tail_radius: float = DEFAULT_MAX_TAIL_RADIUS,
    quad_abs_tol: float = DEFAULT_QUAD_ABS_TOL,
    quad_limit: int = DEFAULT_QUAD_LIMIT,
) -> RadialSolution:
    """
    Radial solution at a converged level energy.

    Args:
        cfg: Ring configuration
        e: Level energy from find_levels
        normalize: Compute the probability normalization (otherwise norm = 1)

    Raises:
        RankDeficiencyError: The matching matrix is not rank 7 at e
        QuadratureError: Normalization did not converge
    """
    mat = matching.assemble_matrix(
        cfg, e, threshold_epsilon=threshold_epsilon, max_order=max_order
    )
    x = matching.null_vector(mat, rank_threshold=rank_threshold)
    solution = RadialSolution(
        cfg=cfg,
        e=e,
        coefficients=x,
        norm=1.0,
        r_tail=tail_radius(cfg, e, tail_decades=tail_decades, max_tail_radius=max_tail_radius),
        max_order=max_order,
    )
    if normalize:
        solution = normalize_solution(solution, quad_abs_tol=quad_abs_tol, quad_limit=quad_limit)
    return solution


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------


def region_of(cfg: RingConfig, r: float) -> Region:
    """Region holding radius r; r_i and 1 belong to the well."""
    if r < cfg.r_i:
        return Region.INNER_BARRIER
    if r <= 1.0:
        return Region.WELL
    return Region.OUTER_BARRIER


def _context(sol: RadialSolution) -> matching.MatchingContext:
    return matching.matching_context(sol.cfg, sol.e, threshold_epsilon=0.0, max_order=sol.max_order)


def _check_radius(r: float) -> None:
    if not (math.isfinite(r) and r >= 0.0):
        raise InvalidParameterError(f"radius must be finite and >= 0, got {r}", details={"r": r})


def radial_state(
    sol: RadialSolution, r: float, *, region: Optional[Region] = None
) -> StateVector:
    """
    (u, u', w, w') at r from the Bessel basis of ``region`` (default: the region holding r).

    Forcing the region evaluates a basis outside its home interval, which is
    how the two sides of a boundary are compared.
    """
    _check_radius(r)
    region = region or region_of(sol.cfg, r)
    block = matching.column_block(_context(sol), region, r)
    values = sol.norm * (block @ sol.coefficients[region.columns])
    return StateVector.from_array(values)


def _tail_values(sol: RadialSolution, r: float) -> tuple[float, float]:
    f, g = ring_model.tail_asymptote(sol.cfg.m, r, sol.e, sol.cfg.v, sol.cfg.beta)
    c3, d3 = sol.coefficients[Region.OUTER_BARRIER.columns]
    return sol.norm * (c3 * f + d3 * g), sol.norm * (c3 * g - d3 * f)


def evaluate(sol: RadialSolution, r: float) -> tuple[float, float]:
    """(u(r), w(r)); past r_tail the closed-form tail is used."""
    _check_radius(r)
    if r > sol.r_tail:
        return _tail_values(sol, r)
    state = radial_state(sol, r)
    return state.u, state.w


def spinor(sol: RadialSolution, r: float, phi: float) -> tuple[complex, complex]:
    """(u(r) e^{i m phi}, w(r) e^{i (m+1) phi})."""
    u, w = evaluate(sol, r)
    m = sol.cfg.m
    return u * cmath.exp(1j * m * phi), w * cmath.exp(1j * (m + 1) * phi)


# --------------------------------------------------------------------------
# Continuity
# --------------------------------------------------------------------------


def continuity_report(sol: RadialSolution) -> dict[str, float]:
    """
    Relative mismatch of u, u', w, w' across r_i and across 1.

    Each residual is scaled by the largest of the eight values compared at
    that boundary. Keys follow the matching matrix row labels.
    """
    report: dict[str, float] = {}
    for labels, r, left, right in (
        (ROW_LABELS[0:4], sol.cfg.r_i, Region.INNER_BARRIER, Region.WELL),
        (ROW_LABELS[4:8], 1.0, Region.WELL, Region.OUTER_BARRIER),
    ):
        a = radial_state(sol, r, region=left).as_array()
        b = radial_state(sol, r, region=right).as_array()
        scale = float(np.max(np.abs(np.concatenate([a, b]))))
        diff = np.abs(a - b)
        for label, d in zip(labels, diff):
            report[label] = float(d / scale) if scale > 0 else 0.0
    return report


def continuity_residuals(sol: RadialSolution) -> float:
    """Largest of the eight relative continuity residuals."""
    return max(continuity_report(sol).values())


# --------------------------------------------------------------------------
# Normalization
# --------------------------------------------------------------------------


def _density(sol: RadialSolution, r: float) -> float:
    u, w = evaluate(sol, r)
    return (u * u + w * w) * r


def _intervals(sol: RadialSolution) -> tuple[tuple[float, float], ...]:
    return (0.0, sol.cfg.r_i), (sol.cfg.r_i, 1.0), (1.0, sol.r_tail)


def _analytic_tail(sol: RadialSolution) -> float:
    c3, d3 = sol.coefficients[Region.OUTER_BARRIER.columns]
    return sol.norm**2 * ring_model.tail_integral(
        c3, d3, sol.r_tail, sol.e, sol.cfg.v, sol.cfg.beta
    )


def _coarse_estimate(sol: RadialSolution) -> float:
    total = 0.0
    for a, b in _intervals(sol):
        r = np.linspace(a, b, _ESTIMATE_POINTS)
        total += float(integrate.trapezoid([_density(sol, x) for x in r], r))
    return total


def region_probabilities(
    sol: RadialSolution,
    *,
    quad_abs_tol: float = DEFAULT_QUAD_ABS_TOL,
    quad_limit: int = DEFAULT_QUAD_LIMIT,
) -> RegionProbabilities:
    """
    Integral of (u^2 + w^2) r over [0, r_i], [r_i, 1], [1, r_tail] and beyond.

    For a normalized solution the four parts sum to 1.

    Raises:
        QuadratureError: QUADPACK did not reach the requested accuracy
    """
    scale = _coarse_estimate(sol)
    if not (math.isfinite(scale) and scale > 0.0):
        raise QuadratureError(
            "probability density vanishes or is not finite", details={"estimate": scale}
        )
    epsabs = quad_abs_tol * scale
    parts = []
    for a, b in _intervals(sol):
        result = integrate.quad(
            lambda r: _density(sol, r),
            a,
            b,
            epsabs=epsabs,
            epsrel=1e-12,
            limit=quad_limit,
            full_output=1,
        )
        value, abserr = result[0], result[1]
        if len(result) > 3 and abserr > 10.0 * max(epsabs, 1e-12 * abs(value)):
            raise QuadratureError(
                "adaptive quadrature did not converge",
                details={"interval": (a, b), "abserr": abserr, "message": str(result[3])},
            )
        parts.append(value)
    return RegionProbabilities(
        inner_barrier=parts[0], well=parts[1], outer_barrier=parts[2], tail=_analytic_tail(sol)
    )


def probability_integral(
    sol: RadialSolution,
    *,
    quad_abs_tol: float = DEFAULT_QUAD_ABS_TOL,
    quad_limit: int = DEFAULT_QUAD_LIMIT,
) -> float:
    """Integral of (u^2 + w^2) r from 0 to infinity."""
    return region_probabilities(sol, quad_abs_tol=quad_abs_tol, quad_limit=quad_limit).total


def trapezoid_probability(
    sol: RadialSolution, points: tuple[int, int, int] = _TRAPEZOID_POINTS
) -> float:
    """Fixed-grid trapezoid version of probability_integral, independent of QUADPACK."""
    total = _analytic_tail(sol)
    for (a, b), n in zip(_intervals(sol), points):
        r = np.linspace(a, b, n)
        total += float(integrate.trapezoid([_density(sol, x) for x in r], r))
    return total


def normalize_solution(
    sol: RadialSolution,
    *,
    quad_abs_tol: float = DEFAULT_QUAD_ABS_TOL,
    quad_limit: int = DEFAULT_QUAD_LIMIT,
) -> RadialSolution:
    """
    Rescale so that the probability integral is 1.

    The coefficients are first brought back to unit norm with the largest
    component positive, so any rescaled copy of a solution normalizes to the
    same result.
    """
    started = time.perf_counter()
    unit = replace(sol, coefficients=_canonical(sol.coefficients), norm=1.0, normalized=False)
    integral = probability_integral(unit, quad_abs_tol=quad_abs_tol, quad_limit=quad_limit)
    result = unit.with_norm(1.0 / math.sqrt(integral))
    logger.debug(
        "Solution normalized",
        extra={
            "config": sol.cfg.label(),
            "e": sol.e,
            "integral": integral,
            "r_tail": sol.r_tail,
            "elapsed_s": round(time.perf_counter() - started, 4),
        },
    )
    return result


normalize = normalize_solution


# --------------------------------------------------------------------------
# Sampling
# --------------------------------------------------------------------------


def sample(sol: RadialSolution, n_points: int = DEFAULT_SAMPLE_POINTS) -> SampledWavefunction:
    """
    u and w on [0, min(r_tail, 3)] with r_i and 1 inserted exactly.

    Raises:
        InvalidParameterError: n_points below 16
    """
    if isinstance(n_points, bool) or not isinstance(n_points, int) or n_points < MIN_SAMPLE_POINTS:
        raise InvalidParameterError(
            f"n_points must be an integer >= {MIN_SAMPLE_POINTS}", details={"n_points": n_points}
        )
    upper = min(sol.r_tail, SAMPLE_MAX_RADIUS)
    grid = np.unique(np.concatenate([np.linspace(0.0, upper, n_points), [sol.cfg.r_i, 1.0]]))
    values = np.array([evaluate(sol, float(r)) for r in grid])
    return SampledWavefunction(
        r=grid,
        u=values[:, 0],
        w=values[:, 1],
        cfg=sol.cfg,
        e=sol.e,
        metadata={"normalized": sol.normalized, "r_tail": sol.r_tail},
    )
