"""
Unit tests for continuity-matrix assembly, the log-determinant and null vectors.
"""

import math

import numpy as np
import pytest

from src.domain.matching import COLUMN_LABELS, ROW_LABELS, DetValue, Region
from src.domain.ring import RingConfig
from src.services import matching, ring_model, spectrum
from src.utils.error_handling import (
    InvalidParameterError,
    RankDeficiencyError,
    ThresholdError,
)


class TestDetValue:
    """Tests for the sign/log-magnitude determinant value."""

    def test_value(self):
        assert DetValue(sign=-1, log_magnitude=math.log(2.0)).value == pytest.approx(-2.0)

    def test_value_overflows_to_infinity(self):
        assert DetValue(sign=1, log_magnitude=1e4).value == math.inf

    def test_zero(self):
        assert DetValue(sign=0, log_magnitude=-math.inf).value == 0.0

    def test_scaled(self):
        det = DetValue(sign=1, log_magnitude=0.0).scaled(-3.0)
        assert det.sign == -1
        assert det.log_magnitude == pytest.approx(math.log(3.0))
        assert DetValue(sign=1, log_magnitude=0.0).scaled(0.0).sign == 0


class TestLogDet:
    """Tests for the equilibrated LU determinant."""

    def test_matches_numpy(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            a = rng.standard_normal((8, 8))
            sign, logabs = np.linalg.slogdet(a)
            det = matching.log_det(a)
            assert det.sign == int(sign)
            assert det.log_magnitude == pytest.approx(logabs, abs=1e-10)

    def test_extreme_scales(self):
        """Rows and columns spanning hundreds of decades neither overflow nor underflow."""
        rng = np.random.default_rng(11)
        a = rng.standard_normal((8, 8))
        rows = np.array([1e150, 1e-150, 1.0, 1e200, 1e-200, 1.0, 1e100, 1.0])
        cols = np.array([1e-120, 1.0, 1e120, 1.0, 1e-80, 1e80, 1.0, 1.0])
        scaled = rows[:, None] * a * cols[None, :]
        sign, logabs = np.linalg.slogdet(a)
        expected = logabs + np.sum(np.log(rows)) + np.sum(np.log(cols))
        det = matching.log_det(scaled)
        assert det.sign == int(sign)
        assert det.log_magnitude == pytest.approx(expected, abs=1e-8)

    def test_permutation_sign(self):
        a = np.eye(4)[[1, 0, 2, 3]]
        det = matching.log_det(a)
        assert det.sign == -1
        assert det.log_magnitude == pytest.approx(0.0)

    def test_zero_row_is_singular(self):
        a = np.eye(3)
        a[1] = 0.0
        det = matching.log_det(a)
        assert det.sign == 0
        assert det.log_magnitude == -math.inf

    def test_rejects_non_square(self):
        with pytest.raises(InvalidParameterError, match="square"):
            matching.log_det(np.ones((2, 3)))

    def test_rejects_non_finite(self):
        a = np.eye(2)
        a[0, 0] = math.nan
        with pytest.raises(InvalidParameterError):
            matching.log_det(a)


class TestAssembly:
    """Tests for the 8x8 continuity matrix."""

    def test_shape_and_block_structure(self, ring_v25: RingConfig):
        mat = matching.assemble_matrix(ring_v25, 7.0)
        assert mat.entries.shape == (8, 8)
        assert len(ROW_LABELS) == len(COLUMN_LABELS) == 8
        assert np.all(mat.entries[0:4, Region.OUTER_BARRIER.columns] == 0.0)
        assert np.all(mat.entries[4:8, Region.INNER_BARRIER.columns] == 0.0)
        assert np.all(np.isfinite(mat.entries))

    def test_well_columns_follow_basis(self, ring_v25: RingConfig):
        e, r = 7.0, 0.45
        ctx = matching.matching_context(ring_v25, e)
        block = matching.column_block(ctx, Region.WELL, r)
        (j_m, j_m1), _ = ring_model.region2_channel(ring_v25.m, r, ctx.well)
        np.testing.assert_allclose(block[:, 0], [j_m.f, j_m.df, j_m1.g, j_m1.dg])
        np.testing.assert_allclose(block[:, 1], [j_m.g, j_m.dg, j_m1.f, j_m1.df])

    def test_barrier_column_signs(self, ring_v25: RingConfig):
        e = 7.0
        ctx = matching.matching_context(ring_v25, e)
        inner = matching.column_block(ctx, Region.INNER_BARRIER, 0.2)
        b_m, b_m1 = ring_model.region1_channel(0, 0.2, ctx.outer)
        np.testing.assert_allclose(inner[:, 0], [b_m.f, b_m.df, -b_m1.g, -b_m1.dg])
        outer = matching.column_block(ctx, Region.OUTER_BARRIER, 1.0)
        k_m, k_m1 = ring_model.region3_channel(0, 1.0, ctx.outer)
        np.testing.assert_allclose(outer[:, 1], [k_m.g, k_m.dg, -k_m1.f, -k_m1.df])

    def test_rejects_energy_outside_window(self, ring_v25: RingConfig):
        with pytest.raises(ThresholdError):
            matching.assemble_matrix(ring_v25, 30.0)

    def test_secular_value_is_scaled_determinant(self, ring_v25: RingConfig):
        e = 7.0
        det = matching.log_det(matching.assemble_matrix(ring_v25, e))
        secular = matching.secular_value(ring_v25, e)
        assert secular.sign == det.sign
        assert secular.log_magnitude == pytest.approx(det.log_magnitude + math.log(e))

    def test_secular_continuous_through_zero_energy(self):
        """Multiplying by e removes the pole at e = 0 for beta != 0."""
        cfg = RingConfig(m=0, v=25.0, beta=4.0, r_i=0.2)
        below = matching.secular_value(cfg, -1e-6)
        above = matching.secular_value(cfg, 1e-6)
        assert below.sign == above.sign
        assert below.log_magnitude == pytest.approx(above.log_magnitude, abs=1e-2)


class TestDeterminantProperties:
    """Structural identities of the determinant."""

    U_ROWS, U_COLS = [0, 1, 4, 5], [0, 2, 4, 6]
    W_ROWS, W_COLS = [2, 3, 6, 7], [1, 3, 5, 7]

    def test_uncoupled_determinant_factorizes(self):
        cfg = RingConfig(m=1, v=25.0, beta=0.0, r_i=0.3)
        entries = matching.assemble_matrix(cfg, 7.0).entries
        full = matching.log_det(entries)
        u_part = matching.log_det(entries[np.ix_(self.U_ROWS, self.U_COLS)])
        w_part = matching.log_det(entries[np.ix_(self.W_ROWS, self.W_COLS)])
        assert full.sign == u_part.sign * w_part.sign
        assert full.log_magnitude == pytest.approx(
            u_part.log_magnitude + w_part.log_magnitude, abs=1e-9
        )

    def test_uncoupled_blocks_are_zero(self):
        cfg = RingConfig(m=1, v=25.0, beta=0.0, r_i=0.3)
        entries = matching.assemble_matrix(cfg, 7.0).entries
        assert np.all(entries[np.ix_(self.U_ROWS, self.W_COLS)] == 0.0)
        assert np.all(entries[np.ix_(self.W_ROWS, self.U_COLS)] == 0.0)

    def test_composed_replacement_preserves_determinant(self):
        rng = np.random.default_rng(7)
        for _ in range(12):
            cfg = RingConfig(
                m=int(rng.integers(-5, 6)),
                v=float(rng.uniform(5.0, 100.0)),
                beta=float(rng.uniform(-8.0, 8.0)),
                r_i=float(rng.uniform(0.1, 0.9)),
            )
            window = spectrum.energy_window(cfg)
            e = float(rng.uniform(window.e_min + 0.01, window.e_max - 0.01))
            original = matching.log_det(matching.assemble_matrix(cfg, e))
            mirrored = matching.log_det(matching.assemble_matrix(cfg.mirrored(), e))
            assert mirrored.sign == original.sign
            assert mirrored.log_magnitude == pytest.approx(
                original.log_magnitude, rel=1e-9, abs=1e-9
            )

    def test_column_scaling_keeps_sign(self, ring_v25: RingConfig):
        entries = matching.assemble_matrix(ring_v25, 7.0).entries
        base = matching.log_det(entries)
        scaled = entries.copy()
        scaled[:, 6] *= 1e-30
        scaled[:, 2] *= 4.0
        result = matching.log_det(scaled)
        assert result.sign == base.sign
        assert result.log_magnitude == pytest.approx(
            base.log_magnitude + math.log(4e-30), rel=1e-12
        )


class TestNullVector:
    """Tests for coefficient extraction at a converged level."""

    def test_residual_at_level(self, ring_v25: RingConfig):
        levels = spectrum.find_levels(ring_v25, grid_points=400)
        mat = matching.assemble_matrix(ring_v25, levels[0].e)
        x = matching.null_vector(mat)
        assert np.linalg.norm(x) == pytest.approx(1.0)
        assert x[np.argmax(np.abs(x))] > 0
        scale = np.max(np.abs(mat.entries), axis=1)
        residual = np.max(np.abs(mat.entries @ x) / scale)
        assert residual < 1e-7

    def test_singular_values_descending(self, ring_v25: RingConfig):
        sigma = matching.singular_values(matching.assemble_matrix(ring_v25, 7.0))
        assert sigma.shape == (8,)
        assert np.all(np.diff(sigma) <= 0.0)

    def test_isolated_smallest_singular_value(self):
        """At a converged level one singular value sits far below the other seven."""
        cfg = RingConfig(m=0, v=25.0, beta=5.0, r_i=0.2)
        level = spectrum.nearest_level(spectrum.find_levels(cfg, grid_points=400), -2.42)
        assert level.e == pytest.approx(-2.42, abs=0.02)
        sigma = matching.singular_values(matching.assemble_matrix(cfg, level.e))
        assert sigma[-2] / sigma[-1] >= 1e4

    def test_rank_deficiency(self):
        with pytest.raises(RankDeficiencyError, match="dimension above one"):
            matching.null_vector(np.ones((3, 3)))

    def test_zero_matrix(self):
        with pytest.raises(RankDeficiencyError):
            matching.null_vector(np.zeros((4, 4)))

    def test_simple_null_vector(self):
        a = np.array([[1.0, -1.0], [2.0, -2.0 + 1e-14]])
        x = matching.null_vector(a)
        np.testing.assert_allclose(x, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-8)
