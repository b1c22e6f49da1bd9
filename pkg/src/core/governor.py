"""Power governor: a scalar reference governor on the stack power command.

Each sample the governor moves the applied command from its previous value
toward the requested one by the largest fraction that keeps the predicted
hydrogen pressure admissible for every future sample.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from src.core.lti import LtiModel, default_linear_model, discretize_zoh
from src.core.mas import AdmissibleSet, build_mas
from src.core.params import ParamSet
from src.core.plant import PlantState, find_equilibrium
from src.core.units import mass_flow_to_normal_volumetric, pa_to_bar, w_to_kw
from src.utils.constants import PA_PER_BAR, W_PER_KW
from src.utils.logger import get_logger

logger = get_logger(__name__)

FEASIBILITY_TOL = 1e-9


class GovernorUpdate(NamedTuple):
    v: float
    kappa: float
    feasible: bool


def rg_update(x: np.ndarray, v_prev: float, r: float, omega: AdmissibleSet) -> GovernorUpdate:
    """Largest admissible step toward the request.

    Picks the largest κ in [0, 1] such that ``(x, v_prev + κ(r − v_prev))``
    lies in the admissible set. When the current pair already violates the
    set, the command is held (κ = 0) and the update is flagged infeasible.

    Args:
        x (np.ndarray): Model state deviation.
        v_prev (float): Previous applied command deviation.
        r (float): Requested command deviation.
        omega (AdmissibleSet): Admissible set for the model.

    Returns:
        GovernorUpdate: New command, the step fraction and feasibility of the
            starting pair.
    """
    hx, hv, h = omega.normalized
    hv = hv[:, 0]
    used = hx @ x + hv * v_prev
    if np.any(used > h + FEASIBILITY_TOL):
        worst = float(np.max(used - h))
        logger.warning(f"Governor state outside the admissible set by {worst:.3e}, holding command")
        return GovernorUpdate(v=v_prev, kappa=0.0, feasible=False)

    step = hv * (r - v_prev)
    rising = step > 0.0
    kappa = 1.0
    if np.any(rising):
        kappa = min(1.0, float(np.min((h[rising] - used[rising]) / step[rising])))
    kappa = max(0.0, kappa)

    v = r if kappa == 1.0 else v_prev + kappa * (r - v_prev)
    return GovernorUpdate(v=v, kappa=kappa, feasible=True)


def governor_model(params: ParamSet) -> LtiModel:
    """Default linear model discretized at the governor period."""
    return discretize_zoh(default_linear_model(), params.governor_period)


def output_bounds(params: ParamSet) -> tuple[float, float, float]:
    """Pressure bounds and tightening as deviations in bar from the reference.

    Both bounds are pulled in by ``mismatch_margin``: the governor predicts
    with the linear model while the nonlinear plant responds to large steps
    with a slightly deeper excursion, so the set is built for the narrower
    band and the plant stays inside the real one.

    Returns:
        tuple[float, float, float]: Upper bound, lower bound and epsilon.
    """
    return (
        pa_to_bar(params.p_max - params.p_h2_ref - params.mismatch_margin),
        pa_to_bar(params.p_min - params.p_h2_ref + params.mismatch_margin),
        pa_to_bar(params.epsilon),
    )


@lru_cache(maxsize=4)
def build_default_admissible_set(params: ParamSet) -> AdmissibleSet:
    """Admissible set of the default model with the configured bounds."""
    y_upper, y_lower, epsilon = output_bounds(params)
    return build_mas(governor_model(params), y_upper, y_lower, epsilon, params.horizon_cap)


class PowerGovernor:
    """Reference governor acting on the plant's applied power.

    Model coordinates are deviations from the regulated equilibrium at the
    nominal power: hydrogen pressure in bar, outlet flow and scaled integrator
    in Nm³/h, power in kW.
    """

    name = "pg"

    def __init__(
        self,
        omega: AdmissibleSet,
        params: ParamSet,
        nominal: Optional[PlantState] = None,
    ):
        self.omega = omega
        self.params = params
        self.nominal_power = params.nominal_power
        self.nominal = nominal if nominal is not None else find_equilibrium(params.nominal_power, params)
        self._nominal_x = self._coordinates(self.nominal)
        self.v_prev = 0.0
        self.kappa_last: Optional[float] = None
        self.infeasible_events = 0

    def _coordinates(self, state: PlantState) -> np.ndarray:
        return np.array(
            [
                pa_to_bar(state.p_h2),
                mass_flow_to_normal_volumetric(state.w_h2_out, self.params.m_h2),
                self.params.ki_ca * state.q / PA_PER_BAR,
            ]
        )

    def state_deviation(self, state: PlantState) -> np.ndarray:
        """Plant state mapped to model deviation coordinates."""
        return self._coordinates(state) - self._nominal_x

    def reset(self, requested_power: float) -> None:
        self.v_prev = w_to_kw(requested_power - self.nominal_power)
        self.kappa_last = None
        self.infeasible_events = 0

    def step(self, state: PlantState, requested_power: float, t: float) -> tuple[float, float]:
        """Applied power for this sample.

        Args:
            state (PlantState): Measured plant state.
            requested_power (float): Requested power, W.
            t (float): Sample time, s.

        Returns:
            tuple[float, float]: Applied power in W and the step fraction.
        """
        r = w_to_kw(requested_power - self.nominal_power)
        update = rg_update(self.state_deviation(state), self.v_prev, r, self.omega)
        if not update.feasible:
            self.infeasible_events += 1
            logger.debug(f"Governor held its command at t={t:.1f}s")

        self.v_prev = update.v
        self.kappa_last = update.kappa
        if update.kappa == 1.0:
            return requested_power, 1.0
        return self.nominal_power + update.v * W_PER_KW, update.kappa
