"""Nonlinear pressure dynamics of the anode and cathode separators.

State is (p_O2 [Pa], p_H2 [Pa], W_H2_out [kg/s], q [Pa·s]) where q integrates
the hydrogen pressure error for the cathode PI regulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from scipy.optimize import brentq

from src.core.electrochem import generation_rates, solve_operating_point
from src.core.params import ParamSet
from src.core.regulators import p_anode, pi_cathode
from src.core.units import mass_flow_to_normal_volumetric, molar_to_mass_flow
from src.utils.constants import PA_PER_BAR
from src.utils.errors import (
    ElectrochemError,
    EquilibriumError,
    NumericBlowUpError,
    SimulationError,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

Vector = tuple[float, float, float, float]

GENERATION_CACHE_SIZE = 4096
EQUILIBRIUM_MAX_ITER = 200
EQUILIBRIUM_RTOL = 1e-13


@dataclass(frozen=True)
class PlantState:
    p_o2: float
    p_h2: float
    w_h2_out: float
    q: float

    def as_tuple(self) -> Vector:
        return (self.p_o2, self.p_h2, self.w_h2_out, self.q)

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in self.as_tuple())


@dataclass(frozen=True)
class PlantInputs:
    """Inputs held constant over an integration step.

    Attributes:
        power: Applied electrical power, W.
        w_h2_out_ref: Hydrogen outlet flow reference, kg/s.
        u_exh: Exhaust valve opening in [0, 1].
    """

    power: float
    w_h2_out_ref: float
    u_exh: float


def choked_flow_factor(gamma: float) -> float:
    """sqrt(γ)·(2/(γ+1))^((γ+1)/(2(γ−1)))"""
    return math.sqrt(gamma) * (2.0 / (gamma + 1.0)) ** ((gamma + 1.0) / (2.0 * (gamma - 1.0)))


def exhaust_flow(p_o2: float, u_exh: float, params: ParamSet) -> float:
    """Choked oxygen flow through the exhaust valve, kg/s."""
    return (
        u_exh
        * params.c_d
        * params.a_t
        * p_o2
        / math.sqrt(params.r_o2 * params.t_el)
        * choked_flow_factor(params.gamma)
    )


def outlet_reference(state: PlantState, params: ParamSet) -> tuple[float, bool]:
    """Cathode PI output clamped at zero flow.

    Returns:
        tuple[float, bool]: The flow reference in kg/s and whether it was clamped.
    """
    w_ref = pi_cathode(state.p_h2, state.q, params)
    if w_ref < 0.0:
        return 0.0, True
    return w_ref, False


class ElectrolyzerPlant:
    """Closed and open loop integration of the pressure dynamics.

    Gas generation only depends on the applied power, which is piecewise
    constant, so solved operating points are cached per power level.
    """

    def __init__(self, params: ParamSet):
        self.params = params
        self._k_an = params.r_o2 * params.t_el / params.v_an
        self._k_ca = params.r_h2 * params.t_el / params.v_ca
        self._valve = exhaust_flow(1.0, 1.0, params)
        self._generation: dict[float, tuple[float, float]] = {}

    def _solve_generation(self, power: float) -> tuple[float, float]:
        cached = self._generation.get(power)
        if cached is not None:
            return cached

        op = solve_operating_point(power, self.params)
        h2, o2 = generation_rates(op.stack_current, op.eta_f, self.params)
        rates = (
            molar_to_mass_flow(h2, self.params.m_h2),
            molar_to_mass_flow(o2, self.params.m_o2),
        )
        if len(self._generation) >= GENERATION_CACHE_SIZE:
            self._generation.clear()
        self._generation[power] = rates
        return rates

    def generation(self, power: float, t: float | None = None) -> tuple[float, float]:
        """Hydrogen and oxygen generation, kg/s, at an applied power.

        Raises:
            SimulationError: If the operating point cannot be solved, annotated
                with the simulation time.
        """
        try:
            return self._solve_generation(power)
        except ElectrochemError as e:
            logger.error(f"Operating point failure at t={t}: {e}")
            raise SimulationError(str(e), t=t) from e

    def _field(
        self,
        x: Vector,
        w_h2_gen: float,
        w_o2_gen: float,
        w_ref: float,
        u_exh: float,
    ) -> Vector:
        p_o2, p_h2, w_out, _ = x
        return (
            self._k_an * (w_o2_gen - u_exh * self._valve * p_o2),
            self._k_ca * (w_h2_gen - w_out),
            (w_ref - w_out) / self.params.tau_ca,
            self.params.p_h2_ref - p_h2,
        )

    def closed_loop_field(self, x: Vector, w_h2_gen: float, w_o2_gen: float) -> Vector:
        w_ref = max(0.0, pi_cathode(x[1], x[3], self.params))
        u_exh = p_anode(x[1], x[0], self.params)
        return self._field(x, w_h2_gen, w_o2_gen, w_ref, u_exh)

    def derivatives(
        self, state: PlantState, inputs: PlantInputs, t: float | None = None
    ) -> PlantState:
        """Time derivatives of the state for held inputs."""
        if not 0.0 <= inputs.u_exh <= 1.0:
            raise SimulationError(f"Valve opening {inputs.u_exh} outside [0, 1]", t=t)
        w_h2_gen, w_o2_gen = self.generation(inputs.power, t)
        return PlantState(
            *self._field(
                state.as_tuple(), w_h2_gen, w_o2_gen, inputs.w_h2_out_ref, inputs.u_exh
            )
        )

    def closed_loop_derivatives(
        self, state: PlantState, power: float, t: float | None = None
    ) -> PlantState:
        """Time derivatives with both regulators closed around the plant."""
        w_h2_gen, w_o2_gen = self.generation(power, t)
        return PlantState(*self.closed_loop_field(state.as_tuple(), w_h2_gen, w_o2_gen))

    @staticmethod
    def _rk4(field: Callable[[Vector], Vector], x: Vector, dt: float) -> Vector:
        k1 = field(x)
        k2 = field(tuple(xi + 0.5 * dt * ki for xi, ki in zip(x, k1)))
        k3 = field(tuple(xi + 0.5 * dt * ki for xi, ki in zip(x, k2)))
        k4 = field(tuple(xi + dt * ki for xi, ki in zip(x, k3)))
        return tuple(
            xi + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d)
            for xi, a, b, c, d in zip(x, k1, k2, k3, k4)
        )

    def _checked(self, x: Vector, t: float) -> PlantState:
        if not all(math.isfinite(v) for v in x):
            logger.error(f"Non-finite state at t={t:.3f}s: {x}")
            raise NumericBlowUpError("state is no longer finite", t=t)
        if x[0] <= 0.0 or x[1] <= 0.0:
            logger.error(f"Non-positive pressure at t={t:.3f}s: {x}")
            raise NumericBlowUpError("pressure left the positive range", t=t)
        return PlantState(*x)

    def step_rk4(
        self, state: PlantState, inputs: PlantInputs, dt: float, t: float = 0.0
    ) -> PlantState:
        """One classic Runge-Kutta step with the inputs held over ``dt``.

        Raises:
            NumericBlowUpError: If the new state is not finite or a pressure
                is no longer positive.
        """
        if not 0.0 <= inputs.u_exh <= 1.0:
            raise SimulationError(f"Valve opening {inputs.u_exh} outside [0, 1]", t=t)
        w_h2_gen, w_o2_gen = self.generation(inputs.power, t)

        def field(x: Vector) -> Vector:
            return self._field(x, w_h2_gen, w_o2_gen, inputs.w_h2_out_ref, inputs.u_exh)

        return self._checked(self._rk4(field, state.as_tuple(), dt), t + dt)

    def step_closed_loop(
        self, state: PlantState, power: float, dt: float, t: float = 0.0
    ) -> PlantState:
        """One Runge-Kutta step of the regulated plant; only the power is held."""
        w_h2_gen, w_o2_gen = self.generation(power, t)

        def field(x: Vector) -> Vector:
            return self.closed_loop_field(x, w_h2_gen, w_o2_gen)

        return self._checked(self._rk4(field, state.as_tuple(), dt), t + dt)

    def _anode_equilibrium(self, p_h2: float, w_o2_gen: float) -> float:
        if w_o2_gen == 0.0:
            return p_h2

        def excess(p_o2: float) -> float:
            return self._valve * p_anode(p_h2, p_o2, self.params) * p_o2 - w_o2_gen

        # Valve closed at lo, saturated open and draining more than is produced at hi
        lo = p_h2
        hi = 2.0 * max(p_h2 + PA_PER_BAR / abs(self.params.kp_an), w_o2_gen / self._valve)
        try:
            return brentq(
                excess,
                lo,
                hi,
                xtol=EQUILIBRIUM_RTOL * hi,
                rtol=EQUILIBRIUM_RTOL,
                maxiter=EQUILIBRIUM_MAX_ITER,
            )
        except (ValueError, RuntimeError) as e:
            logger.error(f"Anode equilibrium solve failed in [{lo}, {hi}] Pa: {e}")
            raise EquilibriumError(
                f"No anode equilibrium found for an oxygen generation of {w_o2_gen} kg/s"
            ) from e

    def find_equilibrium(self, power: float) -> PlantState:
        """Steady state of the regulated plant at a constant applied power.

        Raises:
            EquilibriumError: If the operating point cannot be solved or no
                anode pressure balances the oxygen generation.
        """
        try:
            w_h2_gen, w_o2_gen = self._solve_generation(power)
        except ElectrochemError as e:
            logger.error(f"No equilibrium at {power:.1f} W: {e}")
            raise EquilibriumError(f"No equilibrium at {power:.1f} W: {e}") from e

        p_h2 = self.params.p_h2_ref
        flow = mass_flow_to_normal_volumetric(w_h2_gen, self.params.m_h2)
        q = flow / self.params.ki_ca * PA_PER_BAR
        p_o2 = self._anode_equilibrium(p_h2, w_o2_gen)

        logger.debug(f"Equilibrium at {power:.1f} W: p_O2={p_o2:.1f} Pa, W_out={flow:.4f} Nm³/h")
        return PlantState(p_o2=p_o2, p_h2=p_h2, w_h2_out=w_h2_gen, q=q)

    def simulate_constant(self, state: PlantState, power: float, duration: float) -> PlantState:
        """Integrate the regulated plant at a constant power for ``duration`` seconds."""
        dt = self.params.substep
        steps = int(round(duration / dt))
        for k in range(steps):
            state = self.step_closed_loop(state, power, dt, k * dt)
        return state


@lru_cache(maxsize=8)
def plant_for(params: ParamSet) -> ElectrolyzerPlant:
    """Shared plant instance for a parameter set."""
    return ElectrolyzerPlant(params)


def find_equilibrium(power: float, params: ParamSet) -> PlantState:
    return plant_for(params).find_equilibrium(power)
