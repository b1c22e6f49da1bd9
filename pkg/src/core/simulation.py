"""Closed-loop scenario runs: governor, regulators and plant on a fixed grid."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Protocol

import numpy as np

from src.core.governor import PowerGovernor, build_default_admissible_set
from src.core.mas import AdmissibleSet
from src.core.params import ParamSet
from src.core.plant import ElectrolyzerPlant, PlantState, outlet_reference, plant_for
from src.core.regulators import LowPassGovernor, p_anode
from src.core.scenarios import Scenario, validate_levels
from src.utils.errors import ScenarioError
from src.utils.logger import get_logger

logger = get_logger(__name__)


class CommandGovernor(Protocol):
    name: str

    def reset(self, requested_power: float) -> None: ...

    def step(
        self, state: PlantState, requested_power: float, t: float
    ) -> tuple[float, Optional[float]]: ...


class PassThrough:
    """No governor: the request is applied unchanged."""

    name = "none"

    def reset(self, requested_power: float) -> None:
        pass

    def step(
        self, state: PlantState, requested_power: float, t: float
    ) -> tuple[float, Optional[float]]:
        return requested_power, None


@dataclass(frozen=True, eq=False)
class GovernorConfig:
    """Run options for the command governor.

    Attributes:
        choice: Overrides the scenario's governor when set.
        admissible_set: Set used by the power governor; built from the
            default model when omitted.
        lpf_tau: Overrides the filter time constant.
    """

    choice: Optional[str] = None
    admissible_set: Optional[AdmissibleSet] = None
    lpf_tau: Optional[float] = None


@dataclass(frozen=True, eq=False)
class RunRecord:
    """Sampled trajectory of one scenario run, SI units.

    One entry per governor sample ``t_k = k·Ts``, ``k = 0..duration/Ts``.
    ``kappa`` is only present for power governor runs.
    """

    scenario: Scenario
    governor: str
    params_digest: str
    ts: float
    t: np.ndarray
    requested_power: np.ndarray
    applied_power: np.ndarray
    p_h2: np.ndarray
    p_o2: np.ndarray
    w_h2_out: np.ndarray
    w_h2_gen: np.ndarray
    u_exh: np.ndarray
    kappa: Optional[np.ndarray] = None
    events: dict[str, int] = field(default_factory=dict)

    @property
    def samples(self) -> int:
        return self.t.size


def make_governor(
    choice: str, params: ParamSet, config: GovernorConfig, plant: ElectrolyzerPlant
) -> CommandGovernor:
    if choice == "none":
        return PassThrough()
    if choice == "lpf":
        return LowPassGovernor(params, tau=config.lpf_tau)
    if choice == "pg":
        omega = config.admissible_set or build_default_admissible_set(params)
        return PowerGovernor(omega, params, nominal=plant.find_equilibrium(params.nominal_power))
    raise ScenarioError(f"Unknown governor {choice!r}")


def run_scenario(
    scenario: Scenario,
    params: ParamSet,
    governor_config: Optional[GovernorConfig] = None,
) -> RunRecord:
    """Simulate a scenario and record one row per governor sample.

    The plant starts at its regulated equilibrium for the first requested
    level. Each sample the governor picks the applied power from the measured
    state, the plant is then integrated over the period with the applied
    power held.

    Args:
        scenario (Scenario): Scenario to run.
        params (ParamSet): Parameter set.
        governor_config (Optional[GovernorConfig]): Governor options.

    Returns:
        RunRecord: The sampled trajectory.

    Raises:
        ScenarioError: If a level is outside the stack range.
        SimulationError: If integration fails.
        EquilibriumError: If the initial equilibrium cannot be found.
    """
    config = governor_config or GovernorConfig()
    choice = config.choice or scenario.governor
    validate_levels(scenario, params)

    plant = plant_for(params)
    ts = params.governor_period
    dt = params.substep
    substeps = params.substeps_per_period
    requested = scenario.requested_power(ts)
    n = requested.size

    governor = make_governor(choice, params, config, plant)
    governor.reset(float(requested[0]))
    state = plant.find_equilibrium(float(requested[0]))

    columns = {name: np.empty(n) for name in ("applied", "p_h2", "p_o2", "w_out", "w_gen", "u_exh")}
    kappa = np.empty(n) if choice == "pg" else None
    clamps = 0

    logger.info(f"Running {scenario.name} with governor {choice} for {scenario.duration:.0f}s")
    start = time.perf_counter()
    for k in range(n):
        t = k * ts
        applied, step_kappa = governor.step(state, float(requested[k]), t)
        if kappa is not None:
            kappa[k] = step_kappa

        columns["applied"][k] = applied
        columns["p_h2"][k] = state.p_h2
        columns["p_o2"][k] = state.p_o2
        columns["w_out"][k] = state.w_h2_out
        columns["w_gen"][k] = plant.generation(applied, t)[0]
        columns["u_exh"][k] = p_anode(state.p_h2, state.p_o2, params)
        if outlet_reference(state, params)[1]:
            clamps += 1

        if k == n - 1:
            break
        for s in range(substeps):
            state = plant.step_closed_loop(state, applied, dt, t + s * dt)

    elapsed = time.perf_counter() - start
    events = {"reference_clamps": clamps}
    if isinstance(governor, PowerGovernor):
        events["governor_holds"] = governor.infeasible_events
        if governor.infeasible_events:
            logger.warning(f"Power governor held its command {governor.infeasible_events} times")
    if clamps:
        logger.warning(f"Outlet flow reference clamped at zero on {clamps} samples")
    logger.info(f"Finished {scenario.name}/{choice}: {n} samples in {elapsed:.2f}s")

    return RunRecord(
        scenario=scenario,
        governor=choice,
        params_digest=params.digest(),
        ts=ts,
        t=np.round(np.arange(n) * ts, 10),
        requested_power=requested,
        applied_power=columns["applied"],
        p_h2=columns["p_h2"],
        p_o2=columns["p_o2"],
        w_h2_out=columns["w_out"],
        w_h2_gen=columns["w_gen"],
        u_exh=columns["u_exh"],
        kappa=kappa,
        events=events,
    )
