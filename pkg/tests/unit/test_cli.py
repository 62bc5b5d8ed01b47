"""
Unit tests for the command-line schemas, rendering and helpers.
"""

import json
from pathlib import Path
from unittest.mock import patch

import pytest
from pydantic import ValidationError
from scipy import constants

from src.cli import commands, output
from src.cli.main import build_parser, runs_from_args
from src.cli.schemas import (
    DetScanRecord,
    LevelRecord,
    OutputFormat,
    RunBatch,
    RunConfig,
    SpectrumReport,
    SpectrumResult,
    TableRow,
    VerifyRecord,
)
from src.core.settings import AppSettings
from src.domain.matching import DetValue
from src.utils.error_handling import InvalidParameterError, ThresholdError


class TestRunConfig:
    """Tests for run validation."""

    def test_valid(self):
        run = RunConfig(m=1, v=25, beta=1, r_i=0.2)
        cfg = run.ring_config()
        assert (cfg.m, cfg.v, cfg.beta, cfg.r_i) == (1, 25.0, 1.0, 0.2)
        assert run.output_format is OutputFormat.CSV

    @pytest.mark.parametrize(
        "overrides",
        [
            {"r_i": 1.5},
            {"r_i": 0.0},
            {"v": 0.0},
            {"v": -3.0},
            {"beta": float("nan")},
            {"grid_points": 4},
            {"tol": 0.0},
        ],
    )
    def test_invalid(self, overrides):
        data = {"m": 0, "v": 25.0, "beta": 1.0, "r_i": 0.2, **overrides}
        with pytest.raises(ValidationError):
            RunConfig(**data)

    def test_batch_requires_runs(self):
        with pytest.raises(ValidationError):
            RunBatch(runs=[])


class TestRendering:
    """Tests for CSV, JSON and markdown output."""

    RECORDS = [
        DetScanRecord(e=1.5, sign=-1, log_abs_det=-3.25),
        DetScanRecord(e=2.0, sign=1, log_abs_det=0.5),
    ]
    COLUMNS = ["e", "sign", "log_abs_det"]

    def test_csv(self):
        text = output.render(self.RECORDS, self.COLUMNS, OutputFormat.CSV)
        assert text == "e,sign,log_abs_det\n1.5,-1,-3.25\n2.0,1,0.5\n"

    def test_csv_header_only_when_empty(self):
        assert output.render([], self.COLUMNS, OutputFormat.CSV) == "e,sign,log_abs_det\n"

    def test_json_records(self):
        data = json.loads(output.render(self.RECORDS, self.COLUMNS, OutputFormat.JSON))
        assert data == [r.model_dump() for r in self.RECORDS]

    def test_json_document(self):
        level = LevelRecord(
            index=0, e=5.1, bracket_lo=5.1, bracket_hi=5.1, residual_logdet_gap=-20.0
        )
        report = SpectrumReport(
            results=[SpectrumResult(m=0, v=25.0, beta=1.0, r_i=0.2, levels=[level])]
        )
        text = output.render([], [], OutputFormat.JSON, document=report)
        assert SpectrumReport.model_validate_json(text) == report
        assert text.endswith("\n")

    def test_markdown(self):
        text = output.render(self.RECORDS, self.COLUMNS, OutputFormat.MARKDOWN, title="scan")
        assert text == (
            "## scan\n\n"
            "| e | sign | log_abs_det |\n"
            "|---|---|---|\n"
            "| 1.5 | -1 | -3.25 |\n"
            "| 2.0 | 1 | 0.5 |\n"
        )

    def test_markdown_none_cells(self):
        record = VerifyRecord(index=2, e_matching=3.5, e_oracle=None, abs_delta=None)
        text = output.records_to_markdown([record], ["index", "e_matching", "e_oracle"])
        assert "| 2 | 3.5 |  |" in text

    def test_level_table(self):
        row = TableRow(m=0, r_i=0.2, beta=1.0, levels=[5.1, 10.07], display=["5.10", "10.07"])
        text = output.level_table_markdown("Energy levels for v=25", [row])
        assert text.startswith("## Energy levels for v=25\n\n| m | r_i | beta | levels |")
        assert "| 0 | 0.2 | 1.0 | 5.10, 10.07 |" in text

    def test_emit_to_file(self, tmp_path: Path):
        target = tmp_path / "out" / "levels.csv"
        output.emit("a,b\n1,2\n", str(target))
        assert target.read_bytes() == b"a,b\n1,2\n"

    def test_emit_to_stdout(self, capsys):
        output.emit("hello\n")
        assert capsys.readouterr().out == "hello\n"


class TestHelpers:
    """Tests for command helpers."""

    @pytest.mark.parametrize(
        "value,expected",
        [(2.125, "2.13"), (-2.125, "-2.13"), (17.88591, "17.89"), (5.0, "5.00"), (0.004, "0.00")],
    )
    def test_round_half_up(self, value: float, expected: str):
        assert commands.round_half_up(value, 2) == expected

    def test_compare_levels(self):
        records = commands.compare_levels([1.0, 2.0, 3.0], [1.0 + 1e-7, 2.0])
        assert [r.abs_delta is None for r in records] == [False, False, True]
        assert records[0].abs_delta == pytest.approx(1e-7)
        assert not commands.verification_passed(records, 1e-5)
        assert commands.verification_passed(records[:2], 1e-5)

    def test_levels_in_oracle_window(self, settings: AppSettings):
        cfg = RunConfig(m=0, v=25.0, beta=0.0, r_i=0.5).ring_config()
        top = 25.0 - (16.0 / 60.0) ** 2
        kept = commands.levels_in_oracle_window(
            cfg, [3.0, top - 1e-3, top + 1e-3], settings.solver.threshold_epsilon
        )
        assert kept == [3.0, top - 1e-3]

    def test_solver_kwargs(self, settings: AppSettings):
        run = RunConfig(m=0, v=25.0, r_i=0.5, grid_points=300)
        kwargs = commands.solver_kwargs(settings, run)
        assert kwargs["grid_points"] == 300
        assert kwargs["tol"] == settings.solver.tol
        assert kwargs["max_order"] == settings.kernel.max_order

    def test_table_rejects_unknown_table(self, settings: AppSettings):
        with pytest.raises(InvalidParameterError):
            commands.table_rows(3, settings)

    def test_physical_params(self):
        params = commands.physical_params(0.067, 20.0, 100.0, 10.0, 20.0)
        assert params.effective_mass == pytest.approx(0.067 * constants.m_e)
        assert params.inner_radius == pytest.approx(20e-9)
        assert params.well_depth == pytest.approx(10e-3 * constants.eV)
        assert params.rashba_strength * constants.hbar == pytest.approx(
            20e-3 * constants.eV * 1e-9
        )

    def test_det_scan_rejects_zero_points(self, settings: AppSettings, ring_v25):
        with pytest.raises(InvalidParameterError):
            commands.det_scan(ring_v25, 0, settings)

    def test_det_scan_keeps_failed_points(self, settings: AppSettings, ring_v25):
        """A point that fails to evaluate stays in the scan as sign 0 with no log|det|."""
        results = [
            DetValue(sign=1, log_magnitude=2.0),
            ThresholdError("energy too close to the threshold"),
            DetValue(sign=-1, log_magnitude=-1.0),
        ]
        with patch.object(commands.matching, "secular_value", side_effect=results):
            records = commands.det_scan(ring_v25, 3, settings)
        assert [r.sign for r in records] == [1, 0, -1]
        assert records[1].log_abs_det is None
        text = output.render(records, ["e", "sign", "log_abs_det"], OutputFormat.CSV)
        assert text.splitlines()[2].endswith(",0,")


class TestArguments:
    """Tests for argument parsing into runs."""

    def test_flags(self, settings: AppSettings):
        args = build_parser().parse_args(["spectrum", "--m", "1", "--v", "25", "--ri", "0.2"])
        (run,) = runs_from_args(args, settings)
        assert run.beta == 0.0
        assert run.output_format is OutputFormat.CSV

    def test_missing_flags(self, settings: AppSettings):
        args = build_parser().parse_args(["spectrum", "--m", "1"])
        with pytest.raises(InvalidParameterError, match="--v, --ri"):
            runs_from_args(args, settings)

    def test_sweep_file(self, settings: AppSettings, tmp_path: Path):
        sweep = tmp_path / "sweep.json"
        sweep.write_text(
            json.dumps(
                {
                    "runs": [
                        {"m": 0, "v": 25, "beta": 1, "r_i": 0.2},
                        {"m": 1, "v": 25, "beta": 1, "r_i": 0.2, "grid_points": 300},
                    ]
                }
            )
        )
        args = build_parser().parse_args(
            ["spectrum", "--config", str(sweep), "--format", "json"]
        )
        runs = runs_from_args(args, settings)
        assert [run.m for run in runs] == [0, 1]
        assert runs[1].grid_points == 300
        assert all(run.output_format is OutputFormat.JSON for run in runs)

    def test_single_run_file(self, settings: AppSettings, tmp_path: Path):
        single = tmp_path / "run.yaml"
        single.write_text("m: 2\nv: 100\nbeta: 10\nr_i: 0.8\n")
        args = build_parser().parse_args(["verify", "--config", str(single)])
        (run,) = runs_from_args(args, settings)
        assert (run.m, run.v, run.beta, run.r_i) == (2, 100.0, 10.0, 0.8)

    def test_log_level_is_case_insensitive(self):
        args = build_parser().parse_args(["table", "--which", "1", "--log-level", "debug"])
        assert args.log_level == "DEBUG"
