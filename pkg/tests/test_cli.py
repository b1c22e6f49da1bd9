"""Tests for the h2gov command line interface"""

import json
from unittest.mock import patch

import pytest
import typer
from typer.testing import CliRunner

from src.cli.cli import app
from src.cli.utils import EXIT_CODES, fail
from src.core.params import emit_params, load_params
from src.utils.errors import (
    LpInfeasibleError,
    NumericBlowUpError,
    OperatingPointRangeError,
    ParameterError,
    ScenarioError,
)

runner = CliRunner()


@pytest.fixture
def cached_omega(omega):
    """Keep the CLI away from the user cache directory."""
    with (
        patch("src.cli.commands.simulate.cached_admissible_set", return_value=omega),
        patch("src.cli.commands.compare.cached_admissible_set", return_value=omega),
    ):
        yield omega


class TestFail:
    """Tests for error to exit code mapping."""

    @pytest.mark.parametrize(
        "error,code",
        [
            (ParameterError("operation.p_min_pa", "bad"), 3),
            (ScenarioError("bad"), 4),
            (OperatingPointRangeError("bad"), 5),
            (NumericBlowUpError("bad", t=1.0), 5),
            (LpInfeasibleError("bad"), 7),
            (RuntimeError("bad"), 1),
        ],
        ids=["parameter", "scenario", "electrochem", "simulation", "lp", "unexpected"],
    )
    def test_exit_codes(self, error, code):
        with pytest.raises(typer.Exit) as exc:
            fail(error)
        assert exc.value.exit_code == code

    def test_codes_are_distinct_per_label(self):
        labels = {}
        for _, code, label in EXIT_CODES:
            labels.setdefault(label, code)
            assert labels[label] == code


class TestConfigCommand:
    """Tests for the config command."""

    def test_prints_canonical_document(self, params):
        result = runner.invoke(app, ["config"])
        assert result.exit_code == 0
        assert load_params(result.stdout) == params

    def test_help_states_anode_gain_sign(self):
        result = runner.invoke(app, ["config", "--help"])
        assert result.exit_code == 0
        text = " ".join(result.stdout.split())
        assert "kp_an_per_bar must be negative" in text
        assert "-15" in text

    def test_rejects_invalid_file(self, tmp_path, params_doc):
        params_doc["controllers"]["kp_an_per_bar"] = 5.0
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(params_doc), encoding="utf-8")
        result = runner.invoke(app, ["config", "--config", str(path)])
        assert result.exit_code == 3
        assert "controllers.kp_an_per_bar" in result.stdout
        assert "must be negative" in " ".join(result.stdout.split())

    def test_template(self, tmp_path):
        dest = tmp_path / "template.json"
        result = runner.invoke(app, ["cfg", "--template", "-o", str(dest)])
        assert result.exit_code == 0
        assert "nominal_power_kw" in dest.read_text(encoding="utf-8")

    def test_template_keeps_existing_file(self, tmp_path):
        dest = tmp_path / "template.json"
        dest.write_text("{}", encoding="utf-8")
        result = runner.invoke(app, ["config", "--template", "-o", str(dest)])
        assert result.exit_code == 1
        assert dest.read_text(encoding="utf-8") == "{}"

        result = runner.invoke(app, ["config", "--template", "--force", "-o", str(dest)])
        assert result.exit_code == 0
        assert "nominal_power_kw" in dest.read_text(encoding="utf-8")

    def test_writes_output(self, tmp_path, params):
        dest = tmp_path / "canonical.json"
        result = runner.invoke(app, ["config", "-o", str(dest)])
        assert result.exit_code == 0
        assert dest.read_text(encoding="utf-8") == emit_params(params)


class TestSimulateCommand:
    """Tests for the simulate command."""

    def test_writes_csv(self, tmp_path, cached_omega):
        dest = tmp_path / "constant.csv"
        result = runner.invoke(app, ["simulate", "constant", "-g", "pg", "-o", str(dest)])
        assert result.exit_code == 0
        lines = dest.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,P_req_kW,P_app_kW,pH2_bar,pO2_bar,WH2out_Nm3h,WH2gen_Nm3h,u_exh,kappa"
        assert len(lines) == 3002

    def test_alias_without_governor_column(self, tmp_path):
        dest = tmp_path / "constant.csv"
        result = runner.invoke(app, ["sim", "constant", "--governor", "none", "--output", str(dest)])
        assert result.exit_code == 0
        assert dest.read_text(encoding="utf-8").splitlines()[0].endswith(",u_exh")

    @pytest.mark.parametrize("flag", ["--scenario", "-s"], ids=["long", "short"])
    def test_scenario_option(self, tmp_path, flag):
        dest = tmp_path / "constant.csv"
        result = runner.invoke(app, ["simulate", flag, "constant", "-g", "none", "-o", str(dest)])
        assert result.exit_code == 0
        assert len(dest.read_text(encoding="utf-8").splitlines()) == 3002

    def test_matching_argument_and_option(self, tmp_path):
        dest = tmp_path / "constant.csv"
        result = runner.invoke(app, ["sim", "constant", "-s", "constant", "-g", "none", "-o", str(dest)])
        assert result.exit_code == 0

    def test_conflicting_scenarios(self, tmp_path):
        result = runner.invoke(
            app, ["simulate", "constant", "-s", "small-steps", "-g", "none", "-o", str(tmp_path / "x.csv")]
        )
        assert result.exit_code == 2
        assert not (tmp_path / "x.csv").exists()

    def test_unknown_governor(self, tmp_path):
        result = runner.invoke(app, ["simulate", "constant", "-g", "mpc", "-o", str(tmp_path / "x.csv")])
        assert result.exit_code != 0

    def test_unknown_scenario(self, tmp_path):
        result = runner.invoke(app, ["simulate", "ramp", "-g", "none", "-o", str(tmp_path / "x.csv")])
        assert result.exit_code == 4

    def test_scenario_file(self, tmp_path):
        scenario = {
            "format": "h2gov-scenario",
            "version": 1,
            "name": "hold",
            "governor": "none",
            "duration_s": 5.0,
            "breakpoints": [{"t_s": 0.0, "power_kw": 5.0}],
            "windows": {"tracking": [0.0, 5.0], "production": [0.0, 5.0], "auxiliary": [0.0, 5.0]},
        }
        path = tmp_path / "hold.json"
        path.write_text(json.dumps(scenario), encoding="utf-8")
        dest = tmp_path / "hold.csv"
        result = runner.invoke(app, ["simulate", str(path), "-o", str(dest)])
        assert result.exit_code == 0
        assert len(dest.read_text(encoding="utf-8").splitlines()) == 52


class TestOtherCommands:
    """Tests for the mas, compare and linearize commands."""

    def test_mas(self, tmp_path):
        dest = tmp_path / "omega.json"
        result = runner.invoke(app, ["mas", "--eps", "0.01", "-o", str(dest)])
        assert result.exit_code == 0
        doc = json.loads(dest.read_text(encoding="utf-8"))
        assert doc["format"] == "h2gov-admissible-set"
        assert f"Rows: {len(doc['rows'])}" in result.stdout
        assert doc["y_upper"] == pytest.approx(0.95)

    def test_mas_without_margin(self, tmp_path):
        dest = tmp_path / "omega.json"
        result = runner.invoke(app, ["mas", "--margin", "0", "-o", str(dest)])
        assert result.exit_code == 0
        doc = json.loads(dest.read_text(encoding="utf-8"))
        assert doc["y_upper"] == pytest.approx(1.0)
        assert doc["y_lower"] == pytest.approx(-1.0)

    def test_mas_rejects_oversized_margin(self, tmp_path):
        result = runner.invoke(app, ["mas", "--margin", "1.0", "-o", str(tmp_path / "omega.json")])
        assert result.exit_code == 3

    def test_mas_rejects_inverted_bounds(self, tmp_path):
        result = runner.invoke(app, ["mas", "--p-min", "4.0", "-o", str(tmp_path / "omega.json")])
        assert result.exit_code == 3

    def test_compare(self, tmp_path, cached_omega):
        out_dir = tmp_path / "runs"
        metrics = tmp_path / "metrics.json"
        result = runner.invoke(app, ["compare", "constant", "-o", str(out_dir), "--json", str(metrics)])
        assert result.exit_code == 0
        assert sorted(p.name for p in out_dir.iterdir()) == [
            "constant_lpf.csv",
            "constant_none.csv",
            "constant_pg.csv",
        ]
        doc = json.loads(metrics.read_text(encoding="utf-8"))
        assert [run["governor"] for run in doc["runs"]] == ["pg", "lpf", "none"]
        assert all(run["tracking_mse_kw2"] == 0.0 for run in doc["runs"])
        assert doc["production_gain_pct"] == pytest.approx(0.0, abs=1e-9)
        assert "pg against lpf" in result.stdout

    def test_compare_scenario_option(self, tmp_path, cached_omega):
        metrics = tmp_path / "metrics.json"
        result = runner.invoke(app, ["cmp", "--scenario", "constant", "--json", str(metrics)])
        assert result.exit_code == 0
        assert json.loads(metrics.read_text(encoding="utf-8"))["scenario"] == "constant"

    def test_linearize(self):
        result = runner.invoke(app, ["linearize", "-p", "7"])
        assert result.exit_code == 0
        assert "Numerical linearization" in result.stdout
        assert "Governor model" in result.stdout

    def test_linearize_out_of_range(self):
        result = runner.invoke(app, ["lin", "--power", "10000"])
        assert result.exit_code == 6
