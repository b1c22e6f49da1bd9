"""Pressure regulators and the low-pass power filter."""

from __future__ import annotations

import math
from typing import Optional

from src.core.params import ParamSet
from src.core.units import normal_volumetric_to_mass_flow
from src.utils.constants import PA_PER_BAR
from src.utils.logger import get_logger

logger = get_logger(__name__)


def pi_cathode(p_h2: float, q: float, params: ParamSet) -> float:
    """Cathode PI law for the hydrogen outlet flow reference.

    The gains are quoted in Nm³/h per bar, so the pressure error and its
    integral are scaled to bar before the law is applied and the result is
    converted back to a mass flow.

    Args:
        p_h2 (float): Hydrogen pressure, Pa.
        q (float): Integral of the pressure error, Pa·s.
        params (ParamSet): Parameter set.

    Returns:
        float: Outlet flow reference, kg/s. Not clamped.
    """
    error = (params.p_h2_ref - p_h2) / PA_PER_BAR
    flow = params.kp_ca * error + params.ki_ca * q / PA_PER_BAR
    return normal_volumetric_to_mass_flow(flow, params.m_h2)


def p_anode(p_h2: float, p_o2: float, params: ParamSet) -> float:
    """Proportional exhaust valve law, saturated to [0, 1].

    With a negative gain the valve opens as oxygen pressure rises above the
    hydrogen pressure it tracks.
    """
    u = params.kp_an * (p_h2 - p_o2) / PA_PER_BAR
    return min(1.0, max(0.0, u))


def lpf_alpha(dt: float, tau: float) -> float:
    return 1.0 - math.exp(-dt / tau)


def lpf_step(v_prev: float, r: float, dt: float, tau: float) -> float:
    """Advance a first-order lag by one sample of a held input.

    Exact discretization of ``tau·dv/dt = r - v`` for ``r`` constant over ``dt``.
    """
    return v_prev + lpf_alpha(dt, tau) * (r - v_prev)


class LowPassGovernor:
    """Baseline command filter: first-order lag on the requested power."""

    name = "lpf"

    def __init__(self, params: ParamSet, tau: Optional[float] = None):
        self.period = params.governor_period
        self.tau = params.lpf_tau if tau is None else tau
        self.value = 0.0

    def reset(self, requested_power: float) -> None:
        self.value = requested_power

    def step(self, state: object, requested_power: float, t: float) -> tuple[float, Optional[float]]:
        """Return the filter output for this sample and advance it.

        The applied power at a sample equals the continuous filter response
        to the held requests seen so far, the new request enters afterwards.
        """
        applied = self.value
        self.value = lpf_step(self.value, requested_power, self.period, self.tau)
        return applied, None
