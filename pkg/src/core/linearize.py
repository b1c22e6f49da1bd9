"""Numerical linearization of the regulated plant in governor coordinates.

Coordinates match the default governor model: hydrogen pressure [bar], outlet
flow [Nm³/h] and scaled integrator K_i·q [Nm³/h], with power in kW. The anode
pressure is held at its equilibrium value since it does not feed back into
the hydrogen side.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from src.core.electrochem import generation_rates, solve_operating_point
from src.core.lti import DEFAULT_C, DEFAULT_D, DEFAULT_STATE_LABELS, LtiModel
from src.core.params import ParamSet
from src.core.plant import ElectrolyzerPlant, PlantState, plant_for
from src.core.units import (
    mass_flow_to_normal_volumetric,
    molar_to_mass_flow,
    normal_volumetric_to_mass_flow,
)
from src.utils.constants import PA_PER_BAR, W_PER_KW
from src.utils.errors import H2GovError, LinearModelError
from src.utils.logger import get_logger

logger = get_logger(__name__)

STATE_STEP = 1e-6
POWER_STEP = 1e-4
SOLVER_RTOL = 1e-13


class _ReducedField:
    """Regulated hydrogen-side dynamics in governor coordinates."""

    def __init__(self, plant: ElectrolyzerPlant, p_o2: float):
        self.plant = plant
        self.params = plant.params
        self.p_o2 = p_o2

    def to_state(self, xi: np.ndarray) -> PlantState:
        return PlantState(
            p_o2=self.p_o2,
            p_h2=xi[0] * PA_PER_BAR,
            w_h2_out=normal_volumetric_to_mass_flow(xi[1], self.params.m_h2),
            q=xi[2] / self.params.ki_ca * PA_PER_BAR,
        )

    def __call__(self, xi: np.ndarray, power_kw: float) -> np.ndarray:
        op = solve_operating_point(power_kw * W_PER_KW, self.params, rtol=SOLVER_RTOL)
        h2, _ = generation_rates(op.stack_current, op.eta_f, self.params)
        w_gen = molar_to_mass_flow(h2, self.params.m_h2)

        state = self.to_state(xi)
        _, dp_h2, dw, dq = self.plant.closed_loop_field(state.as_tuple(), w_gen, 0.0)
        return np.array(
            [
                dp_h2 / PA_PER_BAR,
                mass_flow_to_normal_volumetric(dw, self.params.m_h2),
                self.params.ki_ca * dq / PA_PER_BAR,
            ]
        )


def numerical_jacobian(params: ParamSet, power: Optional[float] = None) -> LtiModel:
    """Central-difference linearization about the regulated equilibrium.

    Args:
        params (ParamSet): Parameter set.
        power (Optional[float]): Operating power, W; defaults to the nominal power.

    Returns:
        LtiModel: Continuous-time model with the default output map.

    Raises:
        LinearModelError: If the equilibrium or a perturbed point cannot be evaluated.
    """
    power = params.nominal_power if power is None else power
    plant = plant_for(params)
    try:
        eq = plant.find_equilibrium(power)
    except H2GovError as e:
        raise LinearModelError(f"Cannot linearize at {power:.1f} W: {e}") from e

    field = _ReducedField(plant, eq.p_o2)
    xi0 = np.array(
        [
            eq.p_h2 / PA_PER_BAR,
            mass_flow_to_normal_volumetric(eq.w_h2_out, params.m_h2),
            params.ki_ca * eq.q / PA_PER_BAR,
        ]
    )
    p0 = power / W_PER_KW

    a = np.zeros((3, 3))
    for j in range(3):
        h = STATE_STEP * max(1.0, abs(xi0[j]))
        up, down = xi0.copy(), xi0.copy()
        up[j] += h
        down[j] -= h
        a[:, j] = (field(up, p0) - field(down, p0)) / (2.0 * h)

    dp = POWER_STEP * max(1.0, abs(p0))
    try:
        b = (field(xi0, p0 + dp) - field(xi0, p0 - dp)) / (2.0 * dp)
    except H2GovError as e:
        raise LinearModelError(f"Power perturbation left the stack range at {power:.1f} W: {e}") from e

    logger.info(f"Linearized regulated plant at {power:.1f} W")
    return LtiModel(a, b.reshape(3, 1), DEFAULT_C, DEFAULT_D, state_labels=DEFAULT_STATE_LABELS)
