"""
Without spin-orbit coupling the two spin components decouple, so the levels
of m are the scalar levels of angular orders |m| and |m+1| together.
"""

import numpy as np
import pytest
from scipy import optimize, special

from src.domain.ring import RingConfig
from src.services import spectrum


def _scalar_det(n: int, v: float, r_i: float, e: float) -> float:
    kappa, q = np.sqrt(v - e), np.sqrt(e)
    matrix = np.array(
        [
            [special.iv(n, kappa * r_i), -special.jv(n, q * r_i), -special.yv(n, q * r_i), 0.0],
            [
                kappa * special.ivp(n, kappa * r_i),
                -q * special.jvp(n, q * r_i),
                -q * special.yvp(n, q * r_i),
                0.0,
            ],
            [0.0, special.jv(n, q), special.yv(n, q), -special.kv(n, kappa)],
            [0.0, q * special.jvp(n, q), q * special.yvp(n, q), -kappa * special.kvp(n, kappa)],
        ]
    )
    return float(np.linalg.det(matrix))


def scalar_levels(n: int, v: float, r_i: float, points: int = 4000) -> list[float]:
    """Bound levels of a spinless particle with angular order n."""
    grid = np.linspace(v * 1e-6, v * (1 - 1e-6), points)
    values = [_scalar_det(n, v, r_i, e) for e in grid]
    roots = []
    for lo, hi, a, b in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if np.sign(a) != np.sign(b):
            roots.append(optimize.brentq(lambda e: _scalar_det(n, v, r_i, e), lo, hi, xtol=1e-13))
    return roots


CASES = [(0, 25.0, 0.2), (1, 25.0, 0.5), (-1, 25.0, 0.8), (0, 100.0, 0.2)]


@pytest.mark.slow
@pytest.mark.parametrize("m,v,r_i", CASES)
def test_levels_are_union_of_scalar_levels(m: int, v: float, r_i: float):
    expected = sorted(scalar_levels(abs(m), v, r_i) + scalar_levels(abs(m + 1), v, r_i))
    found = [level.e for level in spectrum.find_levels(RingConfig(m=m, v=v, beta=0.0, r_i=r_i))]

    assert len(found) == len(expected)
    np.testing.assert_allclose(found, expected, atol=1e-7)


def test_scalar_reference_matches_published_values():
    """Orders 0 and 1 at v=25, r_i=0.2 give 5.58, 22.69 and 10.10."""
    assert scalar_levels(0, 25.0, 0.2) == pytest.approx([5.58, 22.69], abs=0.01)
    assert scalar_levels(1, 25.0, 0.2) == pytest.approx([10.10], abs=0.01)
