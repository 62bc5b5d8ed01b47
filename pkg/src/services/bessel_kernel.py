"""
Integer-order Bessel functions J, Y, I, K of complex argument.

Values come from scipy.special, whose complex routines (the AMOS library)
switch between ascending series, Miller backward recurrence and large-argument
expansions internally. This module adds the pieces the solver relies on:

- domain checks: Y and K are defined here only for Re(z) > 0;
- an order cap, so runaway orders fail loudly instead of returning noise;
- negative orders routed through the reflection identities
  J_{-n} = (-1)^n J_n, Y_{-n} = (-1)^n Y_n, I_{-n} = I_n, K_{-n} = K_n;
- radial derivatives d/dr C_n(k r) from the recurrence identities, never
  from numerical differencing.
"""

import cmath
import operator
from collections.abc import Sequence
from typing import Union

import numpy as np
from scipy import special

from src.domain.ring import BesselFamily, ComplexValue
from src.utils.error_handling import (
    InvalidParameterError,
    KernelDomainError,
    OrderOverflowError,
)

DEFAULT_MAX_ORDER = 64

_EVALUATORS = {
    BesselFamily.J: special.jv,
    BesselFamily.Y: special.yv,
    BesselFamily.I: special.iv,
    BesselFamily.K: special.kv,
}

# Families whose negative orders pick up (-1)^n
_PARITY_REFLECTED = frozenset({BesselFamily.J, BesselFamily.Y})

FamilyLike = Union[BesselFamily, str]


def _family(family: FamilyLike) -> BesselFamily:
    try:
        return BesselFamily(family)
    except ValueError as e:
        raise InvalidParameterError(
            f"Unknown Bessel family: {family!r}", details={"family": str(family)}
        ) from e


def _check_orders(orders: Sequence[int], max_order: int) -> list[int]:
    try:
        checked = [operator.index(n) for n in orders]
    except TypeError as e:
        raise InvalidParameterError(
            "Bessel orders must be integers", details={"orders": repr(orders)}
        ) from e
    for n in checked:
        if abs(n) > max_order:
            raise OrderOverflowError(
                f"Bessel order {n} exceeds the maximum {max_order}",
                details={"order": n, "max_order": max_order},
            )
    return checked


def _check_argument(family: BesselFamily, z: complex) -> None:
    if not cmath.isfinite(z):
        raise KernelDomainError(
            f"Non-finite argument {z} for {family.value}",
            details={"family": family.value, "z": str(z)},
        )
    if family in (BesselFamily.Y, BesselFamily.K) and z.real <= 0.0:
        raise KernelDomainError(
            f"{family.value} requires Re(z) > 0 (branch cut or origin), got {z}",
            details={"family": family.value, "z": str(z)},
        )


def _evaluate(family: BesselFamily, orders: Sequence[int], z: complex) -> np.ndarray:
    order_array = np.asarray(orders, dtype=np.int64)
    values = _EVALUATORS[family](np.abs(order_array), z).astype(np.complex128)
    if family in _PARITY_REFLECTED:
        flip = (order_array < 0) & (order_array % 2 == 1)
        values = np.where(flip, -values, values)
    if not np.all(np.isfinite(values)):
        raise KernelDomainError(
            f"{family.value} overflowed or is undefined at z = {z}",
            details={"family": family.value, "z": str(z), "orders": list(map(int, orders))},
        )
    return values


def bessel_orders(
    family: FamilyLike,
    orders: Sequence[int],
    z: ComplexValue,
    *,
    max_order: int = DEFAULT_MAX_ORDER,
) -> np.ndarray:
    """
    Evaluate one Bessel family at several integer orders for the same argument.

    Args:
        family: J, Y, I or K
        orders: Integer orders, negative allowed
        z: Complex argument
        max_order: Largest |n| accepted

    Returns:
        Complex array of values, one per order

    Raises:
        KernelDomainError: z non-finite, or Re(z) <= 0 for Y and K
        OrderOverflowError: Some |n| exceeds max_order
    """
    fam = _family(family)
    checked = _check_orders(orders, max_order)
    z = complex(z)
    _check_argument(fam, z)
    return _evaluate(fam, checked, z)


def bessel_eval(
    family: FamilyLike, n: int, z: ComplexValue, *, max_order: int = DEFAULT_MAX_ORDER
) -> complex:
    """Principal-branch value C_n(z) of the requested family."""
    return complex(bessel_orders(family, [n], z, max_order=max_order)[0])


def _recurrence_derivatives(
    family: BesselFamily,
    orders: Sequence[int],
    k: complex,
    r: float,
    values: np.ndarray,
) -> np.ndarray:
    # values holds C_{n-1} .. C_{n+count} for orders = n .. n+count-1
    lower = values[:-2]
    middle = values[1:-1]
    upper = values[2:]
    if r == 0.0:
        if family is BesselFamily.I:
            return 0.5 * k * (lower + upper)
        if family is BesselFamily.K:
            return -0.5 * k * (lower + upper)
        return 0.5 * k * (lower - upper)
    n = np.asarray(orders, dtype=np.float64)
    sign = -1.0 if family is BesselFamily.K else 1.0
    return sign * k * lower - (n / r) * middle


def bessel_with_derivatives(
    family: FamilyLike,
    n: int,
    k: ComplexValue,
    r: float,
    *,
    count: int = 2,
    max_order: int = DEFAULT_MAX_ORDER,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Values and radial derivatives of C_n(k r) .. C_{n+count-1}(k r).

    One kernel call covers every order needed. For r > 0 the derivative is
    k C_{n-1} - (n/r) C_n (leading minus on the first term for K). At r = 0
    the symmetric identities are used instead, which only I and J reach.

    Returns:
        Tuple (values, derivatives), complex arrays of length ``count``
    """
    fam = _family(family)
    if r < 0.0 or not np.isfinite(r):
        raise InvalidParameterError(f"radius must be finite and >= 0, got {r}", details={"r": r})
    requested = _check_orders(range(n, n + count), max_order)
    k = complex(k)
    z = k * r
    _check_argument(fam, z)
    values = _evaluate(fam, range(n - 1, n + count + 1), z)
    derivatives = _recurrence_derivatives(fam, requested, k, r, values)
    return values[1:-1].copy(), derivatives


def bessel_deriv(
    family: FamilyLike,
    n: int,
    k: ComplexValue,
    r: float,
    *,
    max_order: int = DEFAULT_MAX_ORDER,
) -> complex:
    """
    Radial derivative d/dr C_n(k r) from the recurrence identities.

    Args:
        family: J, Y, I or K
        n: Integer order
        k: Complex wavenumber
        r: Radius, strictly positive

    Raises:
        InvalidParameterError: r <= 0
        KernelDomainError, OrderOverflowError: as bessel_eval at z = k r
    """
    if not r > 0.0:
        raise InvalidParameterError(f"radius must be > 0, got {r}", details={"r": r})
    _, derivatives = bessel_with_derivatives(family, n, k, r, count=1, max_order=max_order)
    return complex(derivatives[0])
