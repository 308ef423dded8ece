"""Unit tests for scan_service.py."""

import logging

import numpy as np
import pytest

from app.core.exceptions import ConfigurationError
from app.services.scan_service import (
    COMMUTATOR_OCTONIONIC,
    EXAMPLE24_X_GRID,
    QUANTITIES,
    ScanService,
    commutator_obstruction,
    commutator_trace,
    coordinate_ascent,
    eta_nu,
    example24_bound_gap,
    qform_slacks,
)


def _scan(make_config, **overrides):
    values = {"command": "scan", "suite": None, "quantity": "eta-nu"}
    values.update(overrides)
    return make_config(**values)


class TestFunctionals:
    """Test cases for the scanned functionals."""

    def test_eta_nu_on_round_s2(self, standard_s2, tangent_samples):
        for p, x, _ in tangent_samples(standard_s2, 5):
            assert eta_nu(standard_s2, p, x, standard_s2(p) @ x, 1e-3) == pytest.approx(0.5, abs=1e-9)

    def test_commutator_obstruction_offsets_trace(self, octonionic, tangent_samples):
        p, x, _ = tangent_samples(octonionic, 1)[0]
        trace = commutator_trace(octonionic, p, x, 1e-3)
        assert commutator_obstruction(octonionic, p, x, 1e-3) == pytest.approx(trace - 4.0, abs=1e-12)

    def test_commutator_trace_is_quadratic(self, octonionic, tangent_samples):
        p, x, _ = tangent_samples(octonionic, 1)[0]
        single = commutator_trace(octonionic, p, x, 1e-3)
        assert commutator_trace(octonionic, p, 2.0 * x, 1e-3) == pytest.approx(4.0 * single, rel=1e-6)

    def test_qform_slacks_vanish_on_round_s2(self, standard_s2, tangent_samples):
        p, x, z = tangent_samples(standard_s2, 1)[0]
        inner, norm = qform_slacks(standard_s2, p, z, x, 1e-3)
        assert abs(inner) <= 1e-9
        assert abs(norm) <= 1e-6

    @pytest.mark.parametrize("x_coord", [0.5, 0.8])
    def test_example24_bound_holds_below_one(self, planar, x_coord):
        gap = example24_bound_gap(planar, x_coord, np.pi / 4, 1e-4)
        assert gap["gap"] < 0.0

    def test_example24_bound_fails_above_one(self, planar):
        gap = example24_bound_gap(planar, 2.0, np.pi / 4, 1e-4)
        assert gap["gap"] > 1e-3

    def test_example24_grid_skips_one(self):
        assert 1.0 not in EXAMPLE24_X_GRID
        assert min(EXAMPLE24_X_GRID) == 0.1
        assert max(EXAMPLE24_X_GRID) == 3.0


class TestCoordinateAscent:
    """Test cases for the witness search."""

    def test_climbs_to_pole(self):
        p = np.array([0.0, 0.6, 0.8])
        x = np.array([0.0, 0.8, -0.6])
        result = coordinate_ascent(lambda q, v: float(q[0]), p, x, iterations=100)
        assert result.value >= 0.999
        assert abs(np.linalg.norm(result.point) - 1.0) <= 1e-12
        assert abs(np.linalg.norm(result.direction) - 1.0) <= 1e-12
        assert abs(np.dot(result.point, result.direction)) <= 1e-12

    def test_never_decreases(self):
        p = np.array([1.0, 0.0, 0.0])
        x = np.array([0.0, 1.0, 0.0])
        result = coordinate_ascent(lambda q, v: -float(q[2] ** 2), p, x, iterations=5)
        assert result.value == 0.0
        assert result.sweeps <= 5


class TestScan:
    """Test cases for ScanService.scan."""

    def test_registry(self):
        assert set(QUANTITIES) == {"commutator-obstruction", "eta-nu", "qform-bounds", "example24-bounds"}

    def test_unknown_quantity(self, make_config):
        with pytest.raises(ConfigurationError, match="Unknown quantity"):
            ScanService.scan(_scan(make_config, quantity="ricci"))

    def test_eta_nu_round_s2(self, make_config):
        report = ScanService.scan(_scan(make_config, field="standard-s2", samples=10))
        assert report.suite == "eta-nu"
        assert report.passed, report.failed_checks()
        record = report.extrema[0]
        assert record.max == pytest.approx(0.5, abs=1e-8)
        assert record.min == pytest.approx(0.5, abs=1e-8)

    def test_commutator_obstruction(self, make_config):
        report = ScanService.scan(_scan(make_config, quantity="commutator-obstruction"))
        assert [e.quantity for e in report.extrema] == ["commutator_obstruction", "commutator_trace"]
        check = report.checks[0]
        assert check.name == "obstruction_witness"
        assert check.details["octonionic_threshold"] == COMMUTATOR_OCTONIONIC
        assert len(report.extrema[0].argmax.point) == 7

    @pytest.mark.slow
    def test_commutator_obstruction_optimised(self, make_config):
        report = ScanService.scan(
            _scan(make_config, quantity="commutator-obstruction", samples=5, optimize=True)
        )
        assert report.extrema[0].max >= -1e-3
        assert report.passed

    def test_optimise_on_chart_is_skipped(self, make_config, caplog):
        with caplog.at_level(logging.WARNING, logger="app.services.scan_service"):
            report = ScanService.scan(_scan(make_config, field="example-2-4", optimize=True))
        assert "Optimisation needs a sphere field" in caplog.text
        assert report.checks == []

    def test_qform_bounds(self, make_config):
        report = ScanService.scan(_scan(make_config, quantity="qform-bounds"))
        assert [e.quantity for e in report.extrema] == ["qform_inner_slack", "qform_norm_slack"]
        assert report.checks == []

    def test_example24_bounds(self, make_config):
        report = ScanService.scan(_scan(make_config, field="example-2-4", quantity="example24-bounds"))
        assert report.passed, report.failed_checks()
        assert {c.name for c in report.checks} == {
            "bound_holds_below_one",
            "bound_fails_above_one",
            "norm_form_fails",
        }
        assert report.extrema[0].max > 0.0

    def test_example24_bounds_need_planar_field(self, make_config):
        with pytest.raises(ConfigurationError):
            ScanService.scan(_scan(make_config, quantity="example24-bounds"))
