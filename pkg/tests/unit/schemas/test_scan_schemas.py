"""Tests for the run configuration and report schemas."""

import pytest
from pydantic import ValidationError

from app.schemas.scan import CheckRecord, Environment, ScanConfig, ScanReport


def _config(**overrides):
    values = {
        "command": "verify",
        "field": "octonionic-s6",
        "suite": "validate",
        "samples": 3,
        "seed": 7,
        "tolerances": {"algebraic": 1e-12},
    }
    values.update(overrides)
    return ScanConfig(**values)


class TestScanConfig:
    """Test cases for ScanConfig validation."""

    def test_defaults(self):
        config = _config()
        assert config.step is None
        assert config.workers == 1
        assert config.optimize is False
        assert config.field_params == {}

    def test_verify_needs_suite(self):
        with pytest.raises(ValidationError, match="verify requires a suite"):
            _config(suite=None)

    def test_scan_needs_quantity(self):
        with pytest.raises(ValidationError, match="scan requires a quantity"):
            _config(command="scan", suite=None)
        assert _config(command="scan", suite=None, quantity="eta-nu").quantity == "eta-nu"

    @pytest.mark.parametrize("overrides", [{"samples": 0}, {"step": 0.0}, {"step": -1e-3}, {"workers": 0}])
    def test_out_of_range(self, overrides):
        with pytest.raises(ValidationError):
            _config(**overrides)

    def test_tolerances_positive(self):
        with pytest.raises(ValidationError, match="Tolerances must be positive: algebraic, fd"):
            _config(tolerances={"fd": 0.0, "algebraic": -1.0, "metric": 1e-6})

    def test_unknown_command(self):
        with pytest.raises(ValidationError):
            _config(command="plot")


class TestCheckRecord:
    """Test cases for CheckRecord."""

    def test_evaluate(self):
        assert CheckRecord.evaluate("a", 1e-13, 1e-12).passed
        record = CheckRecord.evaluate("b", 2.0, 1.0, {"witness": 3})
        assert not record.passed
        assert record.details == {"witness": 3}

    def test_boundary_passes(self):
        assert CheckRecord.evaluate("edge", 1e-6, 1e-6).passed

    def test_inconsistent_pass_flag(self):
        with pytest.raises(ValidationError, match="pass flag disagrees"):
            CheckRecord(name="c", max_residual=1.0, tolerance=1e-3, passed=True)

    def test_alias(self):
        record = CheckRecord.model_validate({"name": "d", "max_residual": 0.0, "tolerance": 1.0, "pass": True})
        assert record.passed
        dumped = record.model_dump()
        assert dumped["pass"] is True
        assert "passed" not in dumped
        assert '"pass":true' in record.model_dump_json()

    def test_frozen(self):
        record = CheckRecord.evaluate("e", 0.0, 1.0)
        with pytest.raises(ValidationError):
            record.tolerance = 2.0


class TestScanReport:
    """Test cases for ScanReport and Environment."""

    def test_passed_and_failed_checks(self):
        report = ScanReport(
            suite="jrm",
            field="conjugated-s6",
            environment=Environment(seed=1, step=1e-3, samples=2),
            checks=[CheckRecord.evaluate("ok", 0.0, 1.0), CheckRecord.evaluate("bad", 2.0, 1.0)],
        )
        assert not report.passed
        assert report.failed_checks() == ["bad"]

    def test_no_checks_pass(self):
        report = ScanReport(suite="qform-bounds", field="octonionic-s6", environment=Environment(seed=1, step=1e-3, samples=2))
        assert report.passed
        assert report.failed_checks() == []

    def test_field_params_tuples_become_lists(self):
        environment = Environment(
            seed=1, step=1e-3, samples=1, field_params={"f": [(1, 0, 1.0)], "nested": {"pair": (1, 2)}}
        )
        assert environment.field_params == {"f": [[1, 0, 1.0]], "nested": {"pair": [1, 2]}}
