"""End-to-end tests of the command-line entry point."""

import json

import pytest

from app.main import EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK, run

pytestmark = pytest.mark.integration


def _environment_free(payload):
    payload = dict(payload)
    environment = dict(payload.pop("environment"))
    environment.pop("wall_time")
    environment.pop("workers")
    payload["environment"] = environment
    return payload


class TestVerify:
    """Test cases for the verify command."""

    def test_validate_prints_report(self, capsys):
        status = run(["verify", "--suite", "validate", "--field", "octonionic-s6", "--samples", "2"])
        assert status == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["suite"] == "validate"
        assert payload["field"] == "octonionic-s6"
        assert all(check["pass"] for check in payload["checks"])

    def test_report_file(self, tmp_path, capsys):
        target = tmp_path / "reports" / "validate.json"
        status = run(
            ["verify", "--suite", "validate", "--field", "standard-s2", "--samples", "2", "--report", str(target)]
        )
        assert status == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text(encoding="utf-8"))["environment"]["samples"] == 2

    def test_failed_check_exit_status(self, capsys):
        status = run(
            ["verify", "--suite", "validate", "--field", "octonionic-s6", "--samples", "2", "--tol", "algebraic=1e-300"]
        )
        assert status == EXIT_CHECK_FAILED
        payload = json.loads(capsys.readouterr().out)
        assert not all(check["pass"] for check in payload["checks"])

    @pytest.mark.parametrize(
        "extra",
        [
            ["--suite", "lemma99", "--field", "octonionic-s6"],
            ["--suite", "validate", "--field", "torus"],
            ["--suite", "validate", "--field", "octonionic-s6", "--tol", "nonsense=1"],
            ["--suite", "validate", "--field", "octonionic-s6", "--tol", "algebraic"],
            ["--suite", "validate", "--field", "octonionic-s6", "--tol", "algebraic=big"],
            ["--suite", "validate", "--field", "octonionic-s6", "--samples", "0"],
        ],
    )
    def test_configuration_errors(self, extra, capsys):
        assert run(["verify", *extra]) == EXIT_ERROR
        assert capsys.readouterr().out == ""

    def test_fg_coeffs_need_stereo_field(self, tmp_path):
        coeffs = tmp_path / "fg.txt"
        coeffs.write_text("g:\n0 0 1.0\n", encoding="utf-8")
        status = run(["verify", "--suite", "validate", "--field", "standard-s2", "--fg-coeffs", str(coeffs)])
        assert status == EXIT_ERROR

    def test_s2_criterion_with_coefficient_file(self, tmp_path, capsys):
        coeffs = tmp_path / "fg.txt"
        coeffs.write_text("# f = 0, g = 1\ng:\n0 0 1.0\n", encoding="utf-8")
        status = run(["verify", "--suite", "s2-criterion", "--field", "stereo-fg", "--fg-coeffs", str(coeffs)])
        assert status == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        details = {c["name"]: c for c in payload["checks"]}["criterion_consistency"]["details"]
        assert details["pullback_value"] == pytest.approx(0.5)
        assert details["degenerate"] is False

    def test_missing_field_is_usage_error(self):
        with pytest.raises(SystemExit) as exc_info:
            run(["verify", "--suite", "validate"])
        assert exc_info.value.code == 2

    def test_workers_do_not_change_report(self, tmp_path):
        paths = []
        for workers in ("1", "3"):
            target = tmp_path / f"jrm-{workers}.json"
            args = ["verify", "--suite", "jrm", "--field", "conjugated-s6", "--samples", "4"]
            assert run([*args, "--workers", workers, "--report", str(target)]) == EXIT_OK
            paths.append(target)
        single, threaded = (json.loads(p.read_text(encoding="utf-8")) for p in paths)
        assert _environment_free(single) == _environment_free(threaded)


class TestScan:
    """Test cases for the scan command."""

    def test_eta_nu_on_round_s2(self, capsys):
        status = run(["scan", "--quantity", "eta-nu", "--field", "standard-s2", "--samples", "4"])
        assert status == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["suite"] == "eta-nu"
        assert payload["extrema"][0]["max"] == pytest.approx(0.5, abs=1e-8)

    def test_unknown_quantity(self):
        assert run(["scan", "--quantity", "ricci", "--field", "standard-s2"]) == EXIT_ERROR


ACCEPTANCE_RUNS = [
    ["verify", "--suite", "thm44", "--field", "octonionic-s6", "--samples", "100"],
    ["verify", "--suite", "prop56", "--field", "octonionic-s6", "--samples", "100"],
    ["verify", "--suite", "prop56", "--field", "conjugated-s6", "--samples", "50"],
    ["verify", "--suite", "thm53", "--field", "octonionic-s6", "--samples", "100"],
    ["verify", "--suite", "thm53", "--field", "conjugated-s6", "--samples", "100"],
    ["verify", "--suite", "example24", "--field", "example-2-4"],
    ["verify", "--suite", "jrm", "--field", "conjugated-s6", "--samples", "200"],
    ["verify", "--suite", "prop512", "--field", "octonionic-s6", "--samples", "100"],
    ["verify", "--suite", "prop512", "--field", "example-2-4", "--samples", "100"],
    ["verify", "--suite", "cor47-identity", "--field", "octonionic-s6", "--samples", "100"],
    ["scan", "--quantity", "example24-bounds", "--field", "example-2-4"],
    ["verify", "--suite", "s2-criterion", "--field", "stereo-fg", "--samples", "10"],
    ["verify", "--suite", "taming", "--field", "octonionic-s6", "--samples", "1000", "--seed", "1"],
    ["verify", "--suite", "baselines", "--field", "standard-s2", "--samples", "100"],
    ["scan", "--quantity", "commutator-obstruction", "--field", "octonionic-s6", "--samples", "20", "--optimize"],
]


@pytest.mark.slow
class TestAcceptanceScale:
    """Full-size runs of every suite and bounded scan."""

    @pytest.mark.parametrize("argv", ACCEPTANCE_RUNS, ids=lambda argv: "-".join(argv[1:5]))
    def test_run_passes(self, argv, tmp_path):
        target = tmp_path / "report.json"
        assert run([*argv, "--report", str(target)]) == EXIT_OK
        payload = json.loads(target.read_text(encoding="utf-8"))
        assert all(check["pass"] for check in payload["checks"])

    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "--suite", "thm53", "--field", "conjugated-s6", "--samples", "40"],
            ["verify", "--suite", "taming", "--field", "octonionic-s6", "--samples", "200"],
            ["scan", "--quantity", "eta-nu", "--field", "octonionic-s6", "--samples", "40"],
        ],
        ids=lambda argv: "-".join(argv[1:3]),
    )
    def test_reports_identical_at_one_and_eight_workers(self, argv, tmp_path):
        texts = []
        for workers in ("1", "8"):
            target = tmp_path / f"report-{workers}.json"
            run([*argv, "--workers", workers, "--report", str(target)])
            texts.append(target.read_text(encoding="utf-8"))
        single, threaded = (
            "\n".join(line for line in text.splitlines() if '"wall_time"' not in line and '"workers"' not in line)
            for text in texts
        )
        assert single == threaded
