"""Unit tests for report_service.py."""

import json
import math

import pytest

from app.core.exceptions import ConfigurationError, ReportError
from app.schemas.scan import CheckRecord, Environment, ExtremumRecord, ScanReport, Witness
from app.services.report_service import ReportService, dump_value, format_float, parse_fg_coeffs


@pytest.fixture
def report() -> ScanReport:
    witness = Witness(point=[0.0, 0.6, 0.8], direction=[1.0, 0.0, 0.0])
    return ScanReport(
        suite="validate",
        field="standard-s2",
        environment=Environment(
            seed=7, step=1e-3, samples=3, wall_time=0.25, field_params={"f": [[1, 0, 1.0]]}
        ),
        checks=[
            CheckRecord.evaluate("j_squared", 0.1 + 0.2 - 0.3, 1e-12, {"samples": 3}),
            CheckRecord.evaluate("continuity", 2e-3, 1e-6),
        ],
        extrema=[
            ExtremumRecord(quantity="eta_nu", max=0.5, argmax=witness, min=1.0 / 3.0, argmin=witness)
        ],
    )


@pytest.fixture
def write_fg(tmp_path):
    def write(text: str):
        path = tmp_path / "fg.txt"
        path.write_text(text, encoding="utf-8")
        return path

    return write


class TestFormatting:
    """Test cases for float and tree formatting."""

    @pytest.mark.parametrize(
        "value, expected",
        [
            (0.1, "0.10000000000000001"),
            (1.0, "1.0"),
            (-2.0, "-2.0"),
            (float("nan"), "NaN"),
            (float("inf"), "Infinity"),
            (float("-inf"), "-Infinity"),
        ],
    )
    def test_format_float(self, value, expected):
        assert format_float(value) == expected

    def test_seventeen_digits_round_trip(self):
        value = 1.0 / 3.0
        assert float(format_float(value)) == value

    def test_dump_value_scalars(self):
        assert dump_value(True) == "true"
        assert dump_value(None) == "null"
        assert dump_value(3) == "3"
        assert dump_value("a\"b") == '"a\\"b"'

    def test_dump_value_containers(self):
        assert dump_value({}) == "{}"
        assert dump_value([]) == "[]"
        assert json.loads(dump_value({"a": [1, 2.5, (3, 4)]})) == {"a": [1, 2.5, [3, 4]]}

    def test_dump_value_rejects_objects(self):
        with pytest.raises(TypeError, match="Cannot serialise"):
            dump_value(object())


class TestReportService:
    """Test cases for ReportService."""

    def test_to_json_uses_pass_key(self, report):
        payload = json.loads(ReportService.to_json(report))
        assert payload["checks"][0]["pass"] is True
        assert payload["checks"][1]["pass"] is False
        assert "passed" not in payload["checks"][0]
        assert payload["environment"]["seed"] == 7

    def test_non_finite_values(self, report):
        record = CheckRecord.evaluate("blowup", float("inf"), 1.0)
        text = ReportService.to_json(report.model_copy(update={"checks": [record]}))
        assert "Infinity" in text
        assert math.isinf(json.loads(text)["checks"][0]["max_residual"])

    def test_write_and_load(self, report, tmp_path):
        path = ReportService.emit_report(report, tmp_path / "out" / "report.json")
        assert path.exists()
        loaded = ReportService.load_report(path)
        assert loaded == report
        assert loaded.failed_checks() == ["continuity"]

    def test_empty_checks_pass(self, report, tmp_path):
        empty = report.model_copy(update={"checks": [], "extrema": []})
        loaded = ReportService.load_report(ReportService.emit_report(empty, tmp_path / "r.json"))
        assert loaded.passed
        assert loaded.checks == []

    def test_unwritable_path(self, report, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory", encoding="utf-8")
        with pytest.raises(ReportError, match="Failed to write report") as exc_info:
            ReportService.emit_report(report, blocker / "report.json")
        assert exc_info.value.path == str(blocker / "report.json")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ReportError, match="Failed to read report"):
            ReportService.load_report(tmp_path / "missing.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ReportError, match="Invalid report"):
            ReportService.load_report(path)

    def test_wrong_schema(self, tmp_path):
        path = tmp_path / "other.json"
        path.write_text(json.dumps({"suite": "validate"}), encoding="utf-8")
        with pytest.raises(ReportError, match="Invalid report"):
            ReportService.load_report(path)


class TestParseFgCoeffs:
    """Test cases for the coefficient table reader."""

    def test_both_sections(self, write_fg):
        path = write_fg("# planar pair\nf:\n1 0 1.0\n\ng:\n0 0 1.0  # constant\n0 1 -2.0\n")
        pair = parse_fg_coeffs(path)
        assert pair["f"].monomials() == [(1, 0, 1.0)]
        assert pair["g"].monomials() == [(0, 0, 1.0), (0, 1, -2.0)]

    def test_missing_sections_default(self, write_fg):
        pair = parse_fg_coeffs(write_fg("f:\n2 1 0.5\n"))
        assert pair["g"].monomials() == [(0, 0, 1.0)]
        pair = parse_fg_coeffs(write_fg("g:\n0 0 3.0\n"))
        assert pair["f"].monomials() == []

    @pytest.mark.parametrize(
        "text, message",
        [
            ("1 0 1.0\n", "outside an f:/g: section"),
            ("f:\n1 0\n", "expected 'x_deg y_deg coefficient'"),
            ("f:\n1 0 abc\n", "could not convert"),
            ("f:\n-1 0 1.0\n", "non-negative"),
            ("f:\n1 0 1.0\nf:\n0 0 1.0\n", "duplicate section"),
        ],
    )
    def test_malformed(self, write_fg, text, message):
        with pytest.raises(ConfigurationError, match=message):
            parse_fg_coeffs(write_fg(text))

    def test_unreadable(self, tmp_path):
        with pytest.raises(ConfigurationError, match="Cannot read coefficient file"):
            parse_fg_coeffs(tmp_path / "absent.txt")
