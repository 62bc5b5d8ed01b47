"""
Continuity matrix assembly, overflow-safe determinant and coefficient null vector.

Column vectors (u, u', w, w') of each basis solution:

    c1  = ( f1(m),  -g1(m+1))     d1  = ( g1(m),  f1(m+1))
    c2x = ( f2x(m),  g2x(m+1))    d2x = ( g2x(m), f2x(m+1))    x = 1 (J), 2 (Y)
    c3  = ( f3(m),   g3(m+1))     d3  = ( g3(m), -f3(m+1))

with the derivative rows built from the same pattern.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import linalg

from src.domain.matching import DetValue, MatchMatrix, Region
from src.domain.ring import BasisEval, RingConfig, WavenumberPair
from src.services import ring_model
from src.services.bessel_kernel import DEFAULT_MAX_ORDER
from src.utils.error_handling import InvalidParameterError, RankDeficiencyError

logger = logging.getLogger(__name__)

DEFAULT_RANK_THRESHOLD = 1e-7
_FLUSH_LEVEL = 64.0 * np.finfo(float).eps


@dataclass(frozen=True)
class MatchingContext:
    """Wavenumbers of one (config, energy) pair, shared by all radii."""

    cfg: RingConfig
    e: float
    outer: WavenumberPair
    well: WavenumberPair
    max_order: int = DEFAULT_MAX_ORDER


def matching_context(
    cfg: RingConfig,
    e: float,
    *,
    threshold_epsilon: float = ring_model.DEFAULT_THRESHOLD_EPSILON,
    max_order: int = DEFAULT_MAX_ORDER,
) -> MatchingContext:
    """Validate the energy against the bound window and compute both wavenumber pairs."""
    ring_model.check_bound_energy(e, cfg.v, cfg.beta, threshold_epsilon=threshold_epsilon)
    return MatchingContext(
        cfg=cfg,
        e=e,
        outer=ring_model.outer_wavenumbers(e, cfg.v, cfg.beta),
        well=ring_model.inner_wavenumbers(e, cfg.beta),
        max_order=max_order,
    )


def _coupled_columns(
    order_m: BasisEval, order_m1: BasisEval, w_sign_c: float, w_sign_d: float
) -> tuple:
    # c: u from f(m), w from g(m+1); d: u from g(m), w from f(m+1)
    c = (order_m.f, order_m.df, w_sign_c * order_m1.g, w_sign_c * order_m1.dg)
    d = (order_m.g, order_m.dg, w_sign_d * order_m1.f, w_sign_d * order_m1.df)
    return c, d


def column_block(ctx: MatchingContext, region: Region, r: float) -> np.ndarray:
    """
    Rows (u, u', w, w') of every basis column belonging to ``region`` at radius r.

    Returns:
        Array of shape (4, 2) for the barrier regions and (4, 4) for the well
    """
    m = ctx.cfg.m
    if region is Region.INNER_BARRIER:
        b_m, b_m1 = ring_model.region1_channel(m, r, ctx.outer, max_order=ctx.max_order)
        columns = _coupled_columns(b_m, b_m1, -1.0, 1.0)
    elif region is Region.OUTER_BARRIER:
        b_m, b_m1 = ring_model.region3_channel(m, r, ctx.outer, max_order=ctx.max_order)
        columns = _coupled_columns(b_m, b_m1, 1.0, -1.0)
    else:
        (j_m, j_m1), (y_m, y_m1) = ring_model.region2_channel(
            m, r, ctx.well, max_order=ctx.max_order
        )
        columns = _coupled_columns(j_m, j_m1, 1.0, 1.0) + _coupled_columns(y_m, y_m1, 1.0, 1.0)
    return np.array(columns, dtype=float).T


def assemble_matrix(
    cfg: RingConfig,
    e: float,
    *,
    threshold_epsilon: float = ring_model.DEFAULT_THRESHOLD_EPSILON,
    max_order: int = DEFAULT_MAX_ORDER,
) -> MatchMatrix:
    """
    Build the 8x8 continuity matrix M(m, e, v, beta).

    Raises:
        ThresholdError: e outside the bound window
        KernelDomainError: a Bessel evaluation failed (e.g. a well wavenumber of zero)
    """
    ctx = matching_context(cfg, e, threshold_epsilon=threshold_epsilon, max_order=max_order)
    entries = np.zeros((8, 8))
    entries[0:4, Region.INNER_BARRIER.columns] = column_block(ctx, Region.INNER_BARRIER, cfg.r_i)
    entries[0:4, Region.WELL.columns] = -column_block(ctx, Region.WELL, cfg.r_i)
    entries[4:8, Region.WELL.columns] = column_block(ctx, Region.WELL, 1.0)
    entries[4:8, Region.OUTER_BARRIER.columns] = -column_block(ctx, Region.OUTER_BARRIER, 1.0)
    return MatchMatrix(entries=entries, cfg=cfg, e=e)


def _as_array(mat: Union[MatchMatrix, np.ndarray]) -> np.ndarray:
    entries = mat.entries if isinstance(mat, MatchMatrix) else np.asarray(mat, dtype=float)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise InvalidParameterError("matrix must be square", details={"shape": entries.shape})
    if not np.all(np.isfinite(entries)):
        raise InvalidParameterError("matrix has non-finite entries")
    return entries


def _equilibrate(entries: np.ndarray):
    """Scale rows, then columns, to unit max-magnitude; None if a row or column is zero."""
    row_scale = np.max(np.abs(entries), axis=1)
    if np.any(row_scale == 0.0):
        return None
    scaled = entries / row_scale[:, None]
    col_scale = np.max(np.abs(scaled), axis=0)
    if np.any(col_scale == 0.0):
        return None
    return scaled / col_scale[None, :], row_scale, col_scale


def log_det(mat: Union[MatchMatrix, np.ndarray]) -> DetValue:
    """
    Sign and log-magnitude of det(mat) by equilibrated, row-pivoted LU.

    The equilibration scales are folded back into log_magnitude, so matrices
    mixing exponentially large and small columns neither overflow nor underflow.
    """
    entries = _as_array(mat)
    equilibrated = _equilibrate(entries)
    if equilibrated is None:
        return DetValue(sign=0, log_magnitude=-math.inf)
    scaled, row_scale, col_scale = equilibrated

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(scaled, check_finite=False)

    pivots = np.diag(lu)
    if np.any(pivots == 0.0):
        return DetValue(sign=0, log_magnitude=-math.inf)

    swaps = int(np.count_nonzero(piv != np.arange(piv.size)))
    sign = -1 if swaps % 2 else 1
    sign *= int(np.prod(np.sign(pivots)))
    log_magnitude = float(
        np.sum(np.log(np.abs(pivots))) + np.sum(np.log(row_scale)) + np.sum(np.log(col_scale))
    )
    return DetValue(sign=sign, log_magnitude=log_magnitude)


def secular_value(
    cfg: RingConfig,
    e: float,
    *,
    threshold_epsilon: float = ring_model.DEFAULT_THRESHOLD_EPSILON,
    max_order: int = DEFAULT_MAX_ORDER,
) -> DetValue:
    """
    det M multiplied by e (= k+_i k-_i), the function whose sign changes mark levels.

    For beta != 0 a well wavenumber passes through zero at e = 0, where det M
    has a simple pole and flips sign. The product with e is continuous there
    and has the same zeros elsewhere.
    """
    mat = assemble_matrix(cfg, e, threshold_epsilon=threshold_epsilon, max_order=max_order)
    det = log_det(mat)
    return det.scaled(e)


def singular_values(mat: Union[MatchMatrix, np.ndarray]) -> np.ndarray:
    """Singular values of the equilibrated matrix, in descending order."""
    entries = _as_array(mat)
    equilibrated = _equilibrate(entries)
    if equilibrated is None:
        return linalg.svd(entries, compute_uv=False)
    return linalg.svd(equilibrated[0], compute_uv=False)


def null_vector(
    mat: Union[MatchMatrix, np.ndarray], *, rank_threshold: float = DEFAULT_RANK_THRESHOLD
) -> np.ndarray:
    """
    Unit coefficient vector X with M X = 0 at a converged level.

    Components that are zero to working precision in equilibrated coordinates
    are set exactly to zero; the largest-magnitude component is positive.

    Raises:
        RankDeficiencyError: Two or more singular values fall below
            rank_threshold times the largest
    """
    entries = _as_array(mat)
    equilibrated = _equilibrate(entries)
    if equilibrated is None:
        raise RankDeficiencyError("matrix has an all-zero row or column")
    scaled, _, col_scale = equilibrated

    _, sigma, vt = linalg.svd(scaled)
    if sigma[-2] <= rank_threshold * sigma[0]:
        raise RankDeficiencyError(
            "null space has dimension above one",
            details={"sigma": sigma.tolist(), "rank_threshold": rank_threshold},
        )

    y = vt[-1].copy()
    y[np.abs(y) < _FLUSH_LEVEL * np.max(np.abs(y))] = 0.0
    x = y / col_scale
    x /= np.linalg.norm(x)
    if x[np.argmax(np.abs(x))] < 0:
        x = -x

    logger.debug(
        "Null vector extracted",
        extra={
            "sigma_min": float(sigma[-1]),
            "sigma_gap": float(sigma[-1] / sigma[-2]),
        },
    )
    return x
