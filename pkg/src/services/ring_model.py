"""
Dimensionless ring model: wavenumbers, region bases and tail asymptotics.

Conventions used throughout:

- Barrier regions (r < r_i and r > 1) use k+ = kappa + i beta/2 with
  kappa = sqrt(v - e - beta^2/4), and k- = conj(k+).
- The well (r_i < r < 1) uses k+- = q +- beta/2 with q = sqrt(e + beta^2/4).
  For e < 0 one of them is negative; cylinder functions of a negative
  wavenumber are taken as C~_n(k r) = (-1)^n C_n(|k| r). This is the analytic
  continuation for J and a real solution with the same recurrences for Y.
- Region 1 uses f = Re I_m(k+ r), g = Im I_m(k+ r); region 3 the same with K.
- Region 2 uses f = (C(k- r) + C(k+ r))/2 and g = (C(k- r) - C(k+ r))/2 for
  C = J (f21, g21) and C = Y (f22, g22).
"""

import math

import numpy as np

from src.domain.ring import (
    BasisEval,
    BasisLabel,
    BesselFamily,
    DimensionlessParams,
    PhysicalParams,
    RegionKind,
    TailPhase,
    WavenumberPair,
)
from src.services.bessel_kernel import DEFAULT_MAX_ORDER, bessel_with_derivatives
from src.utils.error_handling import InvalidParameterError, ThresholdError

DEFAULT_THRESHOLD_EPSILON = 1e-9


# --------------------------------------------------------------------------
# Units
# --------------------------------------------------------------------------


def nondimensionalize(p: PhysicalParams, energy: float) -> DimensionlessParams:
    """
    Convert SI parameters and an energy to dimensionless form.

    e = 2 mu rho_o^2 E / hbar^2, v = 2 mu rho_o^2 V / hbar^2,
    beta = 2 mu rho_o beta_R / hbar, r_i = rho_i / rho_o.

    Args:
        p: Physical parameters (validated on construction)
        energy: Energy E in joules

    Returns:
        DimensionlessParams with v, beta, r_i and e
    """
    if not math.isfinite(energy):
        raise InvalidParameterError("energy must be finite", details={"energy": energy})
    unit = p.energy_unit
    return DimensionlessParams(
        v=p.well_depth / unit,
        beta=2.0 * p.effective_mass * p.outer_radius * p.rashba_strength / p.hbar,
        r_i=p.inner_radius / p.outer_radius,
        e=energy / unit,
    )


def dimensional_energy(p: PhysicalParams, e: float) -> float:
    """Inverse of the energy map: E = e hbar^2 / (2 mu rho_o^2), in joules."""
    return e * p.energy_unit


# --------------------------------------------------------------------------
# Wavenumbers and thresholds
# --------------------------------------------------------------------------


def bound_window(v: float, beta: float) -> tuple[float, float]:
    """Open interval (-beta^2/4, v - beta^2/4) holding all bound energies."""
    shift = 0.25 * beta * beta
    return -shift, v - shift


def check_bound_energy(
    e: float, v: float, beta: float, *, threshold_epsilon: float = DEFAULT_THRESHOLD_EPSILON
) -> None:
    """
    Reject energies at or too close to the edges of the bound window.

    Energies closer than threshold_epsilon / 2 to either edge are refused, so
    the window ends produced by energy_window (inset by threshold_epsilon)
    always evaluate.

    Raises:
        ThresholdError: e outside the accepted interval
    """
    lower, upper = bound_window(v, beta)
    slack = 0.5 * threshold_epsilon
    if not (lower + slack <= e <= upper - slack):
        raise ThresholdError(
            f"energy {e} is not a bound energy for v={v}, beta={beta}",
            details={"e": e, "lower": lower, "upper": upper},
        )


def outer_wavenumbers(e: float, v: float, beta: float) -> WavenumberPair:
    """k+- = sqrt(v - e - beta^2/4) +- i beta/2; requires e < v - beta^2/4."""
    discriminant = v - e - 0.25 * beta * beta
    if not discriminant > 0.0:
        raise ThresholdError(
            "energy at or above the barrier threshold v - beta^2/4",
            details={"e": e, "v": v, "beta": beta},
        )
    k_plus = complex(math.sqrt(discriminant), 0.5 * beta)
    return WavenumberPair(k_plus=k_plus, k_minus=k_plus.conjugate(), region_kind=RegionKind.OUTER)


def inner_wavenumbers(e: float, beta: float) -> WavenumberPair:
    """k+- = sqrt(e + beta^2/4) +- beta/2; requires e > -beta^2/4."""
    discriminant = e + 0.25 * beta * beta
    if not discriminant > 0.0:
        raise ThresholdError(
            "energy at or below the well threshold -beta^2/4",
            details={"e": e, "beta": beta},
        )
    q = math.sqrt(discriminant)
    return WavenumberPair(
        k_plus=complex(q + 0.5 * beta, 0.0),
        k_minus=complex(q - 0.5 * beta, 0.0),
        region_kind=RegionKind.WELL,
    )


def tail_phase(e: float, v: float, beta: float) -> TailPhase:
    """gamma = atan2(beta/2, sqrt(v - e - beta^2/4)), the argument of k+."""
    k = outer_wavenumbers(e, v, beta)
    return TailPhase(gamma=math.atan2(0.5 * beta, k.decay_rate))


def tail_asymptote(m: int, r: float, e: float, v: float, beta: float) -> tuple[float, float]:
    """
    Leading large-r form of the region-3 pair (f, g) of order m.

    f ~ A cos(theta), g ~ -A sin(theta) with
    A = sqrt(pi/2) exp(-kappa r) / ((v - e)^(1/4) sqrt(r)) and
    theta = (beta r + gamma) / 2. The leading term does not depend on m.
    """
    if not r > 0.0:
        raise InvalidParameterError(f"radius must be > 0, got {r}", details={"r": r})
    k = outer_wavenumbers(e, v, beta)
    phase = tail_phase(e, v, beta)
    amplitude = (
        math.sqrt(0.5 * math.pi)
        * math.exp(-k.decay_rate * r)
        / ((v - e) ** 0.25 * math.sqrt(r))
    )
    theta = 0.5 * (beta * r + phase.gamma)
    return amplitude * math.cos(theta), -amplitude * math.sin(theta)


def tail_integral(c3: float, d3: float, r_tail: float, e: float, v: float, beta: float) -> float:
    """
    Closed-form integral of (u^2 + w^2) r from r_tail to infinity.

    Uses the leading tail form, where u^2 + w^2 = A^2 (c3^2 + d3^2):
    (c3^2 + d3^2) (pi/2) (v - e)^(-1/2) exp(-2 kappa r_tail) / (2 kappa).
    """
    kappa = outer_wavenumbers(e, v, beta).decay_rate
    return (
        (c3 * c3 + d3 * d3)
        * 0.5
        * math.pi
        / math.sqrt(v - e)
        * math.exp(-2.0 * kappa * r_tail)
        / (2.0 * kappa)
    )


# --------------------------------------------------------------------------
# Region bases
# --------------------------------------------------------------------------


def _barrier_pairs(
    family: BesselFamily, m: int, r: float, k: WavenumberPair, label: BasisLabel, max_order: int
) -> tuple[BasisEval, BasisEval]:
    if k.region_kind is not RegionKind.OUTER:
        raise InvalidParameterError("barrier bases need an outer wavenumber pair")
    values, derivatives = bessel_with_derivatives(
        family, m, k.k_plus, r, count=2, max_order=max_order
    )
    real_argument = k.k_plus.imag == 0.0
    pairs = []
    for value, derivative in zip(values, derivatives):
        pairs.append(
            BasisEval(
                f=float(value.real),
                g=0.0 if real_argument else float(value.imag),
                df=float(derivative.real),
                dg=0.0 if real_argument else float(derivative.imag),
                label=label,
            )
        )
    return pairs[0], pairs[1]


def _signed_cylinder(
    family: BesselFamily, m: int, k: float, r: float, max_order: int
) -> tuple[np.ndarray, np.ndarray]:
    """Real values and derivatives of C~_m(k r), C~_{m+1}(k r) for a signed real k."""
    values, derivatives = bessel_with_derivatives(
        family, m, abs(k), r, count=2, max_order=max_order
    )
    values = values.real
    derivatives = derivatives.real
    if k < 0.0:
        parity = np.array([(-1.0) ** (m % 2), (-1.0) ** ((m + 1) % 2)])
        values = parity * values
        derivatives = parity * derivatives
    return values, derivatives


def region1_channel(
    m: int, r: float, k: WavenumberPair, *, max_order: int = DEFAULT_MAX_ORDER
) -> tuple[BasisEval, BasisEval]:
    """Region-1 bases of orders m and m+1 from a single kernel call; r may be 0."""
    return _barrier_pairs(BesselFamily.I, m, r, k, BasisLabel.REGION1, max_order)


def region3_channel(
    m: int, r: float, k: WavenumberPair, *, max_order: int = DEFAULT_MAX_ORDER
) -> tuple[BasisEval, BasisEval]:
    """Region-3 bases of orders m and m+1 from a single kernel call."""
    return _barrier_pairs(BesselFamily.K, m, r, k, BasisLabel.REGION3, max_order)


def region2_channel(
    m: int, r: float, k: WavenumberPair, *, max_order: int = DEFAULT_MAX_ORDER
) -> tuple[tuple[BasisEval, BasisEval], tuple[BasisEval, BasisEval]]:
    """
    Region-2 bases of orders m and m+1.

    Returns:
        ((J-pair order m, J-pair order m+1), (Y-pair order m, Y-pair order m+1))
    """
    if k.region_kind is not RegionKind.WELL:
        raise InvalidParameterError("region-2 bases need a well wavenumber pair")
    k_plus, k_minus = k.k_plus.real, k.k_minus.real
    result = []
    for family, label in (
        (BesselFamily.J, BasisLabel.REGION2_J),
        (BesselFamily.Y, BasisLabel.REGION2_Y),
    ):
        plus_values, plus_derivs = _signed_cylinder(family, m, k_plus, r, max_order)
        minus_values, minus_derivs = _signed_cylinder(family, m, k_minus, r, max_order)
        f = 0.5 * (minus_values + plus_values)
        g = 0.5 * (minus_values - plus_values)
        df = 0.5 * (minus_derivs + plus_derivs)
        dg = 0.5 * (minus_derivs - plus_derivs)
        order_m, order_m1 = (
            BasisEval(
                f=float(f[i]), g=float(g[i]), df=float(df[i]), dg=float(dg[i]), label=label
            )
            for i in range(2)
        )
        result.append((order_m, order_m1))
    return result[0], result[1]


def basis_region1(
    m: int, r: float, k: WavenumberPair, *, max_order: int = DEFAULT_MAX_ORDER
) -> BasisEval:
    """f1 = Re I_m(k+ r), g1 = Im I_m(k+ r) with radial derivatives, for 0 < r <= r_i."""
    if not r > 0.0:
        raise InvalidParameterError(f"radius must be > 0, got {r}", details={"r": r})
    return region1_channel(m, r, k, max_order=max_order)[0]


def basis_region2(
    m: int, r: float, k: WavenumberPair, *, max_order: int = DEFAULT_MAX_ORDER
) -> tuple[BasisEval, BasisEval]:
    """(f21, g21) from J and (f22, g22) from Y at order m, with radial derivatives."""
    if not r > 0.0:
        raise InvalidParameterError(f"radius must be > 0, got {r}", details={"r": r})
    j_pairs, y_pairs = region2_channel(m, r, k, max_order=max_order)
    return j_pairs[0], y_pairs[0]


def basis_region3(
    m: int, r: float, k: WavenumberPair, *, max_order: int = DEFAULT_MAX_ORDER
) -> BasisEval:
    """f3 = Re K_m(k+ r), g3 = Im K_m(k+ r) with radial derivatives, for r >= 1."""
    if not r > 0.0:
        raise InvalidParameterError(f"radius must be > 0, got {r}", details={"r": r})
    return region3_channel(m, r, k, max_order=max_order)[0]
