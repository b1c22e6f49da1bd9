"""Requested power profiles and their metric windows."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import numpy as np

from src.core.electrochem import power_bracket
from src.core.params import ParamSet
from src.core.units import kw_to_w, w_to_kw
from src.utils.constants import GOVERNOR_CHOICES, SCENARIO_FORMAT, SCENARIO_VERSION
from src.utils.errors import ElectrochemError, ScenarioError
from src.utils.logger import get_logger

logger = get_logger(__name__)

STEP_SPACING = 200.0
TAIL = 100.0
CONSTANT_DURATION = 300.0


@dataclass(frozen=True)
class MetricWindows:
    """Time windows, in seconds, over which each metric is accumulated."""

    tracking: tuple[float, float]
    production: tuple[float, float]
    auxiliary: tuple[float, float]

    def as_dict(self) -> dict[str, tuple[float, float]]:
        return {
            "tracking": self.tracking,
            "production": self.production,
            "auxiliary": self.auxiliary,
        }


@dataclass(frozen=True)
class Scenario:
    """Piecewise-constant requested power.

    Attributes:
        name: Scenario name.
        breakpoints: (time s, power W) pairs, the first at t = 0; each level
            holds until the next breakpoint.
        duration: Run length, s.
        governor: Default governor, one of ``pg``, ``lpf`` or ``none``.
        windows: Metric windows.
    """

    name: str
    breakpoints: tuple[tuple[float, float], ...]
    duration: float
    governor: str
    windows: MetricWindows

    def __post_init__(self) -> None:
        if not self.breakpoints:
            raise ScenarioError(f"Scenario {self.name!r} has no breakpoints")
        times = [t for t, _ in self.breakpoints]
        if times[0] != 0.0:
            raise ScenarioError(f"Scenario {self.name!r} must start at t=0, starts at {times[0]}")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ScenarioError(f"Scenario {self.name!r} breakpoint times must be strictly increasing")
        if not self.duration > times[-1]:
            raise ScenarioError(f"Scenario {self.name!r} ends before its last breakpoint")
        if any(not np.isfinite(p) or p < 0 for _, p in self.breakpoints):
            raise ScenarioError(f"Scenario {self.name!r} has a negative or non-finite power level")
        if self.governor not in GOVERNOR_CHOICES:
            raise ScenarioError(f"Unknown governor {self.governor!r}, expected one of {', '.join(GOVERNOR_CHOICES)}")
        for label, (start, end) in self.windows.as_dict().items():
            if not 0.0 <= start < end <= self.duration:
                raise ScenarioError(f"Scenario {self.name!r} {label} window [{start}, {end}] is not inside the run")

    @property
    def levels(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.breakpoints)

    def requested_power(self, ts: float) -> np.ndarray:
        """Requested power at every sample ``k·ts``, ``k = 0..duration/ts``.

        Breakpoints are snapped to the nearest sample index so sample times
        never depend on floating point accumulation.
        """
        n = int(round(self.duration / ts))
        profile = np.empty(n + 1)
        indices = [int(round(t / ts)) for t, _ in self.breakpoints] + [n + 1]
        for (start, end), (_, power) in zip(zip(indices, indices[1:]), self.breakpoints):
            profile[start:end] = power
        return profile

    def with_governor(self, governor: str) -> "Scenario":
        return replace(self, governor=governor)


def large_step(params: ParamSet, governor: str = "pg") -> Scenario:
    low, high = params.large_step_low, params.large_step_high
    return Scenario(
        name="large-step",
        breakpoints=((0.0, low), (STEP_SPACING, high), (2 * STEP_SPACING, low)),
        duration=3 * STEP_SPACING,
        governor=governor,
        windows=MetricWindows(
            tracking=(STEP_SPACING, 3 * STEP_SPACING),
            production=(STEP_SPACING, 2 * STEP_SPACING),
            auxiliary=(2 * STEP_SPACING, 3 * STEP_SPACING),
        ),
    )


def small_steps(params: ParamSet, governor: str = "pg") -> Scenario:
    """Staircase up then down: one level every 200 s, the last held for 100 s."""
    levels = params.small_steps_levels
    breakpoints = tuple((k * STEP_SPACING, level) for k, level in enumerate(levels))
    peak = (len(levels) // 2 + 1) * STEP_SPACING
    duration = breakpoints[-1][0] + TAIL
    return Scenario(
        name="small-steps",
        breakpoints=breakpoints,
        duration=duration,
        governor=governor,
        windows=MetricWindows(
            tracking=(STEP_SPACING, duration),
            production=(STEP_SPACING, peak),
            auxiliary=(peak, duration),
        ),
    )


def constant(params: ParamSet, governor: str = "pg") -> Scenario:
    full = (0.0, CONSTANT_DURATION)
    return Scenario(
        name="constant",
        breakpoints=((0.0, params.constant_level),),
        duration=CONSTANT_DURATION,
        governor=governor,
        windows=MetricWindows(tracking=full, production=full, auxiliary=full),
    )


SHIPPED = {
    "large-step": large_step,
    "small-steps": small_steps,
    "constant": constant,
}


def get_scenario(name: str, params: ParamSet, governor: str = "pg") -> Scenario:
    """Look up a shipped scenario by name.

    Raises:
        ScenarioError: If the name is unknown.
    """
    try:
        factory = SHIPPED[name]
    except KeyError:
        raise ScenarioError(f"Unknown scenario {name!r}, expected one of {', '.join(SHIPPED)}") from None
    return factory(params, governor)


def validate_levels(scenario: Scenario, params: ParamSet) -> None:
    """Check every requested level lies in the stack power range.

    Raises:
        ScenarioError: Naming the first level outside the range.
    """
    try:
        p_lo, p_hi = power_bracket(params)
    except ElectrochemError as e:
        raise ScenarioError(f"Cannot determine the stack power range: {e}") from e
    for t, power in scenario.breakpoints:
        if not p_lo <= power <= p_hi:
            logger.error(f"Level {power:.1f} W at t={t}s outside [{p_lo:.1f}, {p_hi:.1f}] W")
            raise ScenarioError(
                f"Requested {w_to_kw(power):.3f} kW at t={t}s is outside the stack range "
                f"[{w_to_kw(p_lo):.3f}, {w_to_kw(p_hi):.3f}] kW"
            )


def scenario_to_document(scenario: Scenario) -> dict[str, Any]:
    return {
        "format": SCENARIO_FORMAT,
        "version": SCENARIO_VERSION,
        "name": scenario.name,
        "governor": scenario.governor,
        "duration_s": scenario.duration,
        "breakpoints": [{"t_s": t, "power_kw": w_to_kw(p)} for t, p in scenario.breakpoints],
        "windows": {label: list(window) for label, window in scenario.windows.as_dict().items()},
    }


def scenario_from_document(doc: Any) -> Scenario:
    """Build a scenario from its JSON document.

    Raises:
        ScenarioError: If the document is malformed.
    """
    if not isinstance(doc, dict):
        raise ScenarioError("Scenario document must be a JSON object")
    if doc.get("format", SCENARIO_FORMAT) != SCENARIO_FORMAT:
        raise ScenarioError(f"Unexpected scenario format {doc.get('format')!r}")
    if doc.get("version", SCENARIO_VERSION) != SCENARIO_VERSION:
        raise ScenarioError(f"Unsupported scenario version {doc.get('version')!r}")

    try:
        breakpoints = tuple(
            (float(bp["t_s"]), kw_to_w(float(bp["power_kw"]))) for bp in doc["breakpoints"]
        )
        windows = doc["windows"]
        return Scenario(
            name=str(doc.get("name", "custom")),
            breakpoints=breakpoints,
            duration=float(doc["duration_s"]),
            governor=str(doc.get("governor", "pg")),
            windows=MetricWindows(
                tracking=_window(windows["tracking"]),
                production=_window(windows["production"]),
                auxiliary=_window(windows["auxiliary"]),
            ),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ScenarioError(f"Malformed scenario document: {e}") from e


def _window(raw: Any) -> tuple[float, float]:
    start, end = raw
    return float(start), float(end)


def load_scenario_file(path: Path) -> Scenario:
    """Load a scenario document from disk.

    Raises:
        ScenarioError: If the file cannot be read or parsed.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Cannot read scenario file {path}: {e}")
        raise ScenarioError(f"Cannot read scenario {path}: {e}") from e
    return scenario_from_document(doc)


def resolve_scenario(name_or_path: str, params: ParamSet, governor: str = "pg") -> Scenario:
    """Shipped scenario by name, or a scenario file when the argument is a path."""
    if name_or_path in SHIPPED:
        return get_scenario(name_or_path, params, governor)
    path = Path(name_or_path)
    if path.suffix == ".json" or path.exists():
        return load_scenario_file(path)
    return get_scenario(name_or_path, params, governor)
