"""Tests for requested power profiles in src/core/scenarios.py"""

import json

import numpy as np
import pytest

from src.core.scenarios import (
    SHIPPED,
    MetricWindows,
    Scenario,
    get_scenario,
    load_scenario_file,
    resolve_scenario,
    scenario_from_document,
    scenario_to_document,
    validate_levels,
)
from src.utils.errors import ScenarioError

FULL = MetricWindows(tracking=(0.0, 10.0), production=(0.0, 10.0), auxiliary=(0.0, 10.0))


def _scenario(**overrides):
    fields = {
        "name": "test",
        "breakpoints": ((0.0, 3000.0), (5.0, 4000.0)),
        "duration": 10.0,
        "governor": "pg",
        "windows": FULL,
    }
    fields.update(overrides)
    return Scenario(**fields)


class TestShippedScenarios:
    """Tests for the built-in profiles."""

    def test_large_step(self, params):
        scenario = get_scenario("large-step", params)
        assert scenario.breakpoints == ((0.0, 3000.0), (200.0, 14000.0), (400.0, 3000.0))
        assert scenario.duration == 600.0
        assert scenario.windows.tracking == (200.0, 600.0)
        assert scenario.windows.production == (200.0, 400.0)
        assert scenario.windows.auxiliary == (400.0, 600.0)

    def test_small_steps(self, params):
        scenario = get_scenario("small-steps", params, "lpf")
        assert scenario.levels == (7000.0, 8000.0, 9000.0, 10000.0, 9000.0, 8000.0, 7000.0)
        assert scenario.duration == 1300.0
        assert scenario.governor == "lpf"
        assert scenario.windows.production == (200.0, 800.0)
        assert scenario.windows.auxiliary == (800.0, 1300.0)

    def test_constant(self, params):
        scenario = get_scenario("constant", params)
        assert scenario.levels == (7000.0,)
        assert scenario.windows.tracking == (0.0, scenario.duration)

    @pytest.mark.parametrize("name", sorted(SHIPPED), ids=sorted(SHIPPED))
    def test_levels_in_range(self, params, name):
        validate_levels(get_scenario(name, params), params)

    def test_unknown_name(self, params):
        with pytest.raises(ScenarioError):
            get_scenario("ramp", params)


class TestProfile:
    """Tests for sampling the requested power."""

    def test_requested_power_grid(self):
        profile = _scenario().requested_power(0.1)
        assert profile.size == 101
        assert np.all(profile[:50] == 3000.0)
        assert np.all(profile[50:] == 4000.0)

    def test_breakpoints_snap_to_samples(self, params):
        profile = get_scenario("large-step", params).requested_power(0.1)
        assert profile.size == 6001
        assert profile[1999] == 3000.0
        assert profile[2000] == 14000.0
        assert profile[3999] == 14000.0
        assert profile[4000] == 3000.0

    def test_with_governor(self):
        assert _scenario().with_governor("none").governor == "none"


class TestValidation:
    """Tests for rejected scenarios."""

    @pytest.mark.parametrize(
        "overrides",
        [
            {"breakpoints": ()},
            {"breakpoints": ((1.0, 3000.0),)},
            {"breakpoints": ((0.0, 3000.0), (5.0, 4000.0), (5.0, 5000.0))},
            {"breakpoints": ((0.0, -1.0),)},
            {"breakpoints": ((0.0, float("nan")),)},
            {"duration": 5.0},
            {"governor": "mpc"},
            {"windows": MetricWindows(tracking=(0.0, 20.0), production=(0.0, 10.0), auxiliary=(0.0, 10.0))},
            {"windows": MetricWindows(tracking=(5.0, 5.0), production=(0.0, 10.0), auxiliary=(0.0, 10.0))},
        ],
        ids=[
            "empty",
            "late_start",
            "repeated_time",
            "negative_level",
            "nan_level",
            "ends_early",
            "unknown_governor",
            "window_past_end",
            "empty_window",
        ],
    )
    def test_invalid_scenarios(self, overrides):
        with pytest.raises(ScenarioError):
            _scenario(**overrides)

    def test_level_outside_stack_range(self, params, suppress_logging):
        scenario = _scenario(breakpoints=((0.0, 3000.0), (5.0, 1.0e7)))
        with pytest.raises(ScenarioError):
            validate_levels(scenario, params)


class TestDocuments:
    """Tests for scenario files."""

    def test_document_round_trip(self, params):
        scenario = get_scenario("small-steps", params)
        doc = json.loads(json.dumps(scenario_to_document(scenario)))
        assert doc["breakpoints"][1] == {"t_s": 200.0, "power_kw": 8.0}
        assert scenario_from_document(doc) == scenario

    def test_load_file(self, tmp_path, params):
        path = tmp_path / "step.json"
        doc = scenario_to_document(_scenario())
        path.write_text(json.dumps(doc), encoding="utf-8")
        assert load_scenario_file(path) == _scenario()
        assert resolve_scenario(str(path), params) == _scenario()

    def test_resolve_shipped_name(self, params):
        assert resolve_scenario("constant", params, "none") == get_scenario("constant", params, "none")

    @pytest.mark.parametrize(
        "doc",
        [
            [],
            {"format": "other"},
            {"breakpoints": [{"t_s": 0.0}], "duration_s": 10.0, "windows": {}},
            {"breakpoints": [{"t_s": 0.0, "power_kw": 3.0}], "duration_s": "long", "windows": {}},
        ],
        ids=["not_object", "wrong_format", "missing_power", "bad_duration"],
    )
    def test_malformed_documents(self, doc):
        with pytest.raises(ScenarioError):
            scenario_from_document(doc)

    def test_missing_file(self, tmp_path, suppress_logging):
        with pytest.raises(ScenarioError):
            load_scenario_file(tmp_path / "missing.json")
