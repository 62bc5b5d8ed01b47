"""
Bound-state spectrum: window, scan, bracket and refine.

The scan samples the regularized secular function (det M times e) on a
uniform grid across the bound window. Sign changes give brackets. Two kinds
of intervals are re-scanned at higher density: local minima of log|D| with no
sign change on either side (a close pair may hide there) and runs of grid
points whose evaluation failed. Each bracket is refined by Brent's method on
a clamped, sign-carrying exponential of the log-gap. Plain sign bisection is
the fallback.
"""

import functools
import logging
import math
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional

import numpy as np
from scipy import optimize

from src.domain.matching import DetValue
from src.domain.ring import RingConfig
from src.domain.spectrum import EnergyLevel, EnergyWindow, SymmetryReport
from src.services import matching, ring_model
from src.services.bessel_kernel import DEFAULT_MAX_ORDER
from src.utils.error_handling import (
    InvalidParameterError,
    KernelDomainError,
    ThresholdError,
)

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 2000
DEFAULT_TOL = 1e-10
DEFAULT_REFINE_FACTOR = 10

Evaluator = Callable[[float], DetValue]

_LOG_CLAMP = 700.0
_BRENT_RTOL = 4.0 * np.finfo(float).eps


def energy_window(
    cfg: RingConfig, *, threshold_epsilon: float = ring_model.DEFAULT_THRESHOLD_EPSILON
) -> EnergyWindow:
    """The bound window inset by threshold_epsilon at both ends; empty when v <= 2 epsilon."""
    lower, upper = ring_model.bound_window(cfg.v, cfg.beta)
    return EnergyWindow(e_min=lower + threshold_epsilon, e_max=upper - threshold_epsilon)


# --------------------------------------------------------------------------
# Generic scan / refine machinery, shared with the ODE oracle
# --------------------------------------------------------------------------


def _safe_eval(evaluate: Evaluator, e: float) -> tuple[int, float]:
    try:
        det = evaluate(e)
    except (KernelDomainError, ThresholdError) as exc:
        logger.debug("Skipping energy", extra={"e": e, "reason": exc.error_code})
        return 0, math.nan
    return det.sign, det.log_magnitude


def _sample(
    evaluate: Evaluator, energies: np.ndarray, workers: int
) -> tuple[np.ndarray, np.ndarray]:
    call = functools.partial(_safe_eval, evaluate)
    if workers > 1 and energies.size > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(call, energies.tolist()))
    else:
        results = [call(e) for e in energies.tolist()]
    signs = np.array([s for s, _ in results], dtype=int)
    logs = np.array([log for _, log in results], dtype=float)
    return signs, logs


def _sign_brackets(
    grid: np.ndarray, signs: np.ndarray, logs: np.ndarray
) -> list[tuple[float, float, int, float]]:
    """(lo, hi, sign at lo, larger endpoint log|D|) for adjacent sign changes."""
    brackets = []
    for i in range(grid.size - 1):
        if signs[i] != 0 and signs[i + 1] != 0 and signs[i] != signs[i + 1]:
            brackets.append(
                (float(grid[i]), float(grid[i + 1]), int(signs[i]), max(logs[i], logs[i + 1]))
            )
    return brackets


def _suspicious_intervals(
    grid: np.ndarray, signs: np.ndarray, logs: np.ndarray
) -> list[tuple[int, int]]:
    """Index ranges worth a denser look: sign-preserving dips and failed runs."""
    valid = signs != 0
    intervals = []
    for i in range(1, grid.size - 1):
        if (
            valid[i - 1]
            and valid[i]
            and valid[i + 1]
            and signs[i - 1] == signs[i] == signs[i + 1]
            and logs[i] < logs[i - 1]
            and logs[i] < logs[i + 1]
        ):
            intervals.append((i - 1, i + 1))

    i = 0
    while i < grid.size:
        if valid[i]:
            i += 1
            continue
        start = i
        while i < grid.size and not valid[i]:
            i += 1
        if start > 0 and i < grid.size:
            intervals.append((start - 1, i))
    return intervals


def _bisect_sign(
    evaluate: Evaluator, lo: float, hi: float, sign_lo: int, tol: float
) -> tuple[float, float]:
    while hi - lo > tol:
        for fraction in (0.5, 0.45, 0.55, 0.4, 0.6):
            mid = lo + fraction * (hi - lo)
            sign_mid, _ = _safe_eval(evaluate, mid)
            if sign_mid != 0:
                break
        else:
            raise KernelDomainError(
                "secular function cannot be evaluated inside bracket",
                details={"lo": lo, "hi": hi},
            )
        if sign_mid == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _refine(
    evaluate: Evaluator,
    lo: float,
    hi: float,
    sign_lo: int,
    log_ref: float,
    tol: float,
) -> tuple[float, float]:
    """Shrink a sign-change bracket to width <= tol."""

    def phi(x: float) -> float:
        det = evaluate(x)
        if det.sign == 0:
            return 0.0
        return det.sign * math.exp(max(-_LOG_CLAMP, min(_LOG_CLAMP, det.log_magnitude - log_ref)))

    try:
        root = optimize.brentq(phi, lo, hi, xtol=0.25 * tol, rtol=_BRENT_RTOL, maxiter=200)
    except (ValueError, RuntimeError, KernelDomainError, ThresholdError):
        return _bisect_sign(evaluate, lo, hi, sign_lo, tol)

    a = max(lo, root - 0.5 * tol)
    b = min(hi, root + 0.5 * tol)
    sign_a, _ = _safe_eval(evaluate, a)
    sign_b, _ = _safe_eval(evaluate, b)
    if sign_a != 0 and sign_b != 0 and sign_a != sign_b:
        return a, b
    logger.debug("Brent bracket not confirmed, bisecting", extra={"lo": lo, "hi": hi})
    return _bisect_sign(evaluate, lo, hi, sign_lo, tol)


def locate_roots(
    evaluate: Evaluator,
    window: EnergyWindow,
    *,
    grid_points: int = DEFAULT_GRID_POINTS,
    tol: float = DEFAULT_TOL,
    refine_factor: int = DEFAULT_REFINE_FACTOR,
    workers: int = 1,
) -> list[EnergyLevel]:
    """
    Find every sign change of ``evaluate`` across ``window`` and refine it.

    Args:
        evaluate: Energy -> DetValue; domain and threshold errors mark a point as skipped
        window: Scan interval
        grid_points: Uniform scan resolution
        tol: Final bracket width
        refine_factor: Density multiplier for re-scanned intervals
        workers: Threads used for grid evaluation (results are order-preserving)

    Returns:
        Levels sorted by energy, indexed from 0
    """
    if grid_points < 2:
        raise InvalidParameterError("grid_points must be at least 2", details={"grid": grid_points})
    if not tol > 0:
        raise InvalidParameterError("tol must be positive", details={"tol": tol})
    if window.is_empty:
        return []

    grid = np.linspace(window.e_min, window.e_max, grid_points)
    signs, logs = _sample(evaluate, grid, workers)
    brackets = _sign_brackets(grid, signs, logs)

    intervals = _suspicious_intervals(grid, signs, logs)
    for start, stop in intervals:
        fine = np.linspace(grid[start], grid[stop], refine_factor * (stop - start) + 1)
        fine_signs, fine_logs = _sample(evaluate, fine, workers)
        brackets.extend(_sign_brackets(fine, fine_signs, fine_logs))

    levels: list[EnergyLevel] = []
    for lo, hi, sign_lo, log_ref in sorted(set(brackets)):
        a, b = _refine(evaluate, lo, hi, sign_lo, log_ref, tol)
        e = 0.5 * (a + b)
        sign_e, log_e = _safe_eval(evaluate, e)
        gap = -math.inf if sign_e == 0 and not math.isnan(log_e) else log_e - log_ref
        if gap > 0.0:
            logger.warning(
                "Discarding sign change with growing magnitude (pole)",
                extra={"e": e, "logdet_gap": gap},
            )
            continue
        if levels and e - levels[-1].e <= tol:
            continue
        levels.append(
            EnergyLevel(e=e, index=len(levels), bracket=(a, b), residual_logdet_gap=gap)
        )

    logger.debug(
        "Scan complete",
        extra={"grid_points": grid_points, "rescanned": len(intervals), "levels": len(levels)},
    )
    return levels


# --------------------------------------------------------------------------
# Spectrum operations
# --------------------------------------------------------------------------


def find_levels(
    cfg: RingConfig,
    grid_points: int = DEFAULT_GRID_POINTS,
    tol: float = DEFAULT_TOL,
    *,
    threshold_epsilon: float = ring_model.DEFAULT_THRESHOLD_EPSILON,
    refine_factor: int = DEFAULT_REFINE_FACTOR,
    workers: int = 1,
    max_order: int = DEFAULT_MAX_ORDER,
) -> list[EnergyLevel]:
    """
    All bound-state energies of ``cfg``, ascending.

    Args:
        cfg: Ring configuration
        grid_points: Uniform scan points across the window
        tol: Bracket width at return
        threshold_epsilon: Window inset
        refine_factor: Density multiplier for re-scans
        workers: Threads for scan-grid evaluation
        max_order: Bessel order cap

    Returns:
        List of EnergyLevel; empty when the window holds no level
    """
    started = time.perf_counter()
    evaluate = functools.partial(
        matching.secular_value,
        cfg,
        threshold_epsilon=threshold_epsilon,
        max_order=max_order,
    )
    levels = locate_roots(
        evaluate,
        energy_window(cfg, threshold_epsilon=threshold_epsilon),
        grid_points=grid_points,
        tol=tol,
        refine_factor=refine_factor,
        workers=workers,
    )
    logger.info(
        "Levels found",
        extra={
            "config": cfg.label(),
            "count": len(levels),
            "elapsed_s": round(time.perf_counter() - started, 4),
        },
    )
    return levels


def level_count(cfg: RingConfig, **kwargs: Any) -> int:
    """Number of bound levels; keyword arguments are passed to find_levels."""
    return len(find_levels(cfg, **kwargs))


def _max_delta(first: Sequence[float], second: Sequence[float]) -> float:
    if len(first) != len(second):
        return math.inf
    if not first:
        return 0.0
    return float(np.max(np.abs(np.asarray(first) - np.asarray(second))))


def _energies(cfg: RingConfig, kwargs: dict[str, Any]) -> list[float]:
    return [level.e for level in find_levels(cfg, **kwargs)]


def spectrum_symmetry_check(
    cfg: RingConfig, *, include_single: bool = False, **kwargs: Any
) -> SymmetryReport:
    """
    Compare the spectrum of ``cfg`` with that of (-(m+1), -beta).

    With include_single the m-only and beta-only replacements are measured
    too. They are reported, not enforced.
    """
    levels = _energies(cfg, kwargs)
    mirrored = _energies(cfg.mirrored(), kwargs)
    report = SymmetryReport(
        cfg=cfg,
        levels=levels,
        mirrored_levels=mirrored,
        max_abs_delta=_max_delta(levels, mirrored),
    )
    if not report.counts_match:
        report.notes.append("level counts differ under the composed replacement")

    if include_single:
        m_only = RingConfig(m=-(cfg.m + 1), v=cfg.v, beta=cfg.beta, r_i=cfg.r_i)
        beta_only = RingConfig(m=cfg.m, v=cfg.v, beta=-cfg.beta, r_i=cfg.r_i)
        report.m_only_delta = _max_delta(levels, _energies(m_only, kwargs))
        report.beta_only_delta = _max_delta(levels, _energies(beta_only, kwargs))

    logger.info(
        "Symmetry check",
        extra={
            "config": cfg.label(),
            "max_abs_delta": report.max_abs_delta,
            "m_only_delta": report.m_only_delta,
            "beta_only_delta": report.beta_only_delta,
        },
    )
    return report


def nearest_level(levels: Sequence[EnergyLevel], target: float) -> Optional[EnergyLevel]:
    """The level closest to ``target``, or None for an empty spectrum."""
    if not levels:
        return None
    return min(levels, key=lambda level: abs(level.e - target))
