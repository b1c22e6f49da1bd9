"""Performance metrics of a scenario run.

Sums use the left rectangle rule over the governor samples in a half-open
window ``[start, end)``. Applied power is held between samples, so power
integrals are exact on this grid and adjacent windows add up exactly.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Iterable, Optional

import numpy as np

from src.core.params import ParamSet
from src.core.scenarios import MetricWindows
from src.core.simulation import RunRecord
from src.core.units import mass_flow_to_normal_volumetric, pa_to_bar, w_to_kw
from src.utils.constants import SECONDS_PER_HOUR


@dataclass(frozen=True)
class WindowSums:
    """Additive sums over one window, combinable with ``combine_window_metrics``."""

    samples: int
    squared_error_kw2: float
    h2_generated_nm3: float
    h2_delivered_nm3: float
    auxiliary_kwh: float

    @property
    def tracking_mse_kw2(self) -> float:
        return self.squared_error_kw2 / self.samples if self.samples else 0.0


@dataclass(frozen=True)
class MetricsReport:
    scenario: str
    governor: str
    tracking_mse_kw2: float
    tracking_rmse_kw: float
    h2_production_nm3: float
    h2_delivered_nm3: float
    auxiliary_energy_kwh: float
    peak_excursion_bar: float
    violation_duration_s: float
    windows: MetricWindows


def _index_range(record: RunRecord, window: tuple[float, float]) -> slice:
    start, end = window
    lo = int(round(start / record.ts))
    hi = min(int(round(end / record.ts)), record.samples)
    return slice(lo, hi)


def window_sums(record: RunRecord, window: tuple[float, float], params: ParamSet) -> WindowSums:
    """Accumulate the additive quantities over ``[start, end)``."""
    idx = _index_range(record, window)
    ts = record.ts
    error_kw = w_to_kw(record.requested_power[idx] - record.applied_power[idx])
    surplus_kw = np.maximum(0.0, -error_kw)
    generated = mass_flow_to_normal_volumetric(record.w_h2_gen[idx], params.m_h2)
    delivered = mass_flow_to_normal_volumetric(record.w_h2_out[idx], params.m_h2)
    return WindowSums(
        samples=int(error_kw.size),
        squared_error_kw2=float(np.sum(error_kw**2)),
        h2_generated_nm3=float(np.sum(generated) * ts / SECONDS_PER_HOUR),
        h2_delivered_nm3=float(np.sum(delivered) * ts / SECONDS_PER_HOUR),
        auxiliary_kwh=float(np.sum(surplus_kw) * ts / SECONDS_PER_HOUR),
    )


def combine_window_metrics(first: WindowSums, second: WindowSums) -> WindowSums:
    """Sums over the union of two disjoint windows."""
    return WindowSums(
        samples=first.samples + second.samples,
        squared_error_kw2=first.squared_error_kw2 + second.squared_error_kw2,
        h2_generated_nm3=first.h2_generated_nm3 + second.h2_generated_nm3,
        h2_delivered_nm3=first.h2_delivered_nm3 + second.h2_delivered_nm3,
        auxiliary_kwh=first.auxiliary_kwh + second.auxiliary_kwh,
    )


def pressure_violation(record: RunRecord, params: ParamSet) -> tuple[float, float]:
    """Largest excursion beyond the pressure bounds (bar) and time spent outside (s)."""
    above = record.p_h2 - params.p_max
    below = params.p_min - record.p_h2
    excursion = np.maximum(above, below)
    peak = float(max(0.0, excursion.max())) if excursion.size else 0.0
    duration = float(np.count_nonzero(excursion > 0.0) * record.ts)
    return pa_to_bar(peak), duration


def compute_metrics(
    record: RunRecord, params: ParamSet, windows: Optional[MetricWindows] = None
) -> MetricsReport:
    """Tracking, production, auxiliary energy and constraint metrics of a run.

    Args:
        record (RunRecord): The run.
        params (ParamSet): Parameters the run used.
        windows (Optional[MetricWindows]): Overrides the scenario's windows.

    Returns:
        MetricsReport: The metrics.
    """
    windows = windows or record.scenario.windows
    tracking = window_sums(record, windows.tracking, params)
    production = window_sums(record, windows.production, params)
    auxiliary = window_sums(record, windows.auxiliary, params)
    peak, duration = pressure_violation(record, params)
    return MetricsReport(
        scenario=record.scenario.name,
        governor=record.governor,
        tracking_mse_kw2=tracking.tracking_mse_kw2,
        tracking_rmse_kw=float(np.sqrt(tracking.tracking_mse_kw2)),
        h2_production_nm3=production.h2_generated_nm3,
        h2_delivered_nm3=production.h2_delivered_nm3,
        auxiliary_energy_kwh=auxiliary.auxiliary_kwh,
        peak_excursion_bar=peak,
        violation_duration_s=duration,
        windows=windows,
    )


def metrics_to_document(report: MetricsReport) -> dict[str, Any]:
    doc = asdict(report)
    doc["windows"] = {label: list(window) for label, window in report.windows.as_dict().items()}
    return doc


def production_gain_pct(
    reports: Iterable[MetricsReport], governor: str = "pg", baseline: str = "lpf"
) -> Optional[float]:
    """Hydrogen produced by ``governor`` relative to ``baseline``, in percent.

    Returns:
        Optional[float]: ``100·(governor − baseline) / baseline``, or None when
            either run is missing or the baseline produced nothing.
    """
    by_governor = {report.governor: report.h2_production_nm3 for report in reports}
    if governor not in by_governor or not by_governor.get(baseline):
        return None
    return 100.0 * (by_governor[governor] - by_governor[baseline]) / by_governor[baseline]
