"""Stack electrochemistry: polarization curve, Faraday efficiency and operating point."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from src.core.params import ParamSet
from src.core.units import kelvin_to_celsius
from src.utils.errors import (
    ConvergenceError,
    EfficiencyDomainError,
    ElectrochemError,
    InvalidCoefficientError,
    OperatingPointRangeError,
)
from src.utils.logger import get_logger

logger = get_logger(__name__)

BRACKET_SAMPLES = 257


@dataclass(frozen=True)
class OperatingPoint:
    """Stack operating point for a given electrical input power.

    Attributes:
        i: Current density, A/m².
        stack_current: Stack current, A.
        stack_voltage: Stack voltage, V.
        cell_voltage: Cell voltage, V.
        power: Electrical input power, W.
        eta_f: Faraday efficiency. At zero current the efficiency is not
            defined; ``a1`` is reported there and generation is zero anyway.
    """

    i: float
    stack_current: float
    stack_voltage: float
    cell_voltage: float
    power: float
    eta_f: float


def coefficient_temperature(t_kelvin: float, params: ParamSet) -> float:
    """Temperature as expected by the empirical coefficients."""
    if params.coefficient_temperature == "celsius":
        return kelvin_to_celsius(t_kelvin)
    return t_kelvin


def reversible_voltage(t_kelvin: float) -> float:
    """Reversible cell voltage, V, for a stack temperature in kelvin.

    Raises:
        ElectrochemError: If the temperature is not positive.
    """
    if not t_kelvin > 0:
        raise ElectrochemError(f"Temperature must be positive, got {t_kelvin} K")
    return 1.518 - 1.542e-3 * t_kelvin + 9.523e-5 * t_kelvin * math.log(t_kelvin)


def cell_voltage(i: float, t_kelvin: float, params: ParamSet) -> float:
    """Cell voltage from the empirical polarization curve.

    V = V_rev(T) + (r1 + r2·T)·i + (s1 + s2·T + s3·T²)·log(k·i + 1),
    k = t1 + t2/T + t3/T², with T in the coefficient temperature unit.

    Args:
        i (float): Current density, A/m².
        t_kelvin (float): Stack temperature, K.
        params (ParamSet): Parameter set.

    Returns:
        float: Cell voltage, V.

    Raises:
        ElectrochemError: If the current density is negative.
        InvalidCoefficientError: If the logarithm argument is not positive.
    """
    if i < 0:
        raise ElectrochemError(f"Current density must not be negative, got {i}")

    v_rev = reversible_voltage(t_kelvin)
    t = coefficient_temperature(t_kelvin, params)
    k = params.t1 + params.t2 / t + params.t3 / t**2
    arg = k * i + 1.0
    if not arg > 0:
        logger.error(f"Polarization log argument {arg} at i={i} A/m², T={t_kelvin} K")
        raise InvalidCoefficientError(
            f"Polarization log argument is not positive at i={i} A/m², T={t_kelvin} K"
        )

    log = math.log(arg) if params.log_base == "e" else math.log10(arg)
    ohmic = (params.r1 + params.r2 * t) * i
    activation = (params.s1 + params.s2 * t + params.s3 * t**2) * log
    return v_rev + ohmic + activation


def faraday_efficiency(i: float, t_kelvin: float, params: ParamSet) -> float:
    """Faraday efficiency, clipped to (0, 1] with a warning.

    Raises:
        EfficiencyDomainError: If the current density is not positive.
    """
    if not i > 0:
        raise EfficiencyDomainError(f"Faraday efficiency needs a positive current density, got {i}")

    t = coefficient_temperature(t_kelvin, params)
    exponent = (params.a2 + params.a3 * t) / i + (params.a4 + params.a5 * t) / i**2
    eta = params.a1 * math.exp(exponent) if exponent < 700 else math.inf

    if eta > 1.0:
        logger.warning(f"Faraday efficiency {eta:.6f} above one at i={i}, clipped")
        return 1.0
    if eta <= 0.0:
        logger.warning(f"Faraday efficiency underflow at i={i}, clipped")
        return float(np.finfo(float).tiny)
    return eta


def stack_power(i: float, params: ParamSet) -> float:
    """Electrical stack power, W, at current density ``i`` and the stack temperature."""
    return params.n_cell * cell_voltage(i, params.t_el, params) * i * params.a_cell


@lru_cache(maxsize=16)
def power_bracket(params: ParamSet) -> tuple[float, float]:
    """Power range covered by the current density range ``[0, current_density_max]``.

    Returns:
        tuple[float, float]: Lower and upper power bound, W.

    Raises:
        ElectrochemError: If stack power is not strictly increasing on the range.
    """
    grid = np.linspace(0.0, params.current_density_max, BRACKET_SAMPLES)
    powers = np.array([stack_power(float(i), params) for i in grid])
    if not np.all(np.diff(powers) > 0):
        logger.error("Stack power is not monotonic over the current density range")
        raise ElectrochemError("Stack power is not strictly increasing over the current density range")
    return float(powers[0]), float(powers[-1])


def _operating_point(i: float, params: ParamSet) -> OperatingPoint:
    v_cell = cell_voltage(i, params.t_el, params)
    current = i * params.a_cell
    v_stack = params.n_cell * v_cell
    eta = faraday_efficiency(i, params.t_el, params) if i > 0 else params.a1
    return OperatingPoint(
        i=i,
        stack_current=current,
        stack_voltage=v_stack,
        cell_voltage=v_cell,
        power=v_stack * current,
        eta_f=eta,
    )


def solve_operating_point(
    p_in: float, params: ParamSet, rtol: Optional[float] = None
) -> OperatingPoint:
    """Find the operating point that draws ``p_in`` watts.

    Bisection on the current density until the stack power matches the input
    power to the relative tolerance.

    Args:
        p_in (float): Electrical input power, W.
        params (ParamSet): Parameter set.
        rtol (Optional[float]): Relative power tolerance, defaults to
            ``params.solver_rtol``.

    Returns:
        OperatingPoint: The solved operating point.

    Raises:
        OperatingPointRangeError: If the power lies outside the bracket.
        ConvergenceError: If bisection does not meet the tolerance.
    """
    rtol = params.solver_rtol if rtol is None else rtol
    p_lo, p_hi = power_bracket(params)
    if not p_lo <= p_in <= p_hi:
        logger.error(f"Input power {p_in:.1f} W outside [{p_lo:.1f}, {p_hi:.1f}] W")
        raise OperatingPointRangeError(
            f"Input power {p_in:.1f} W outside the stack range [{p_lo:.1f}, {p_hi:.1f}] W"
        )
    if p_in == 0.0:
        return _operating_point(0.0, params)

    lo, hi = 0.0, params.current_density_max
    for _ in range(params.solver_max_iter):
        mid = 0.5 * (lo + hi)
        power = stack_power(mid, params)
        if abs(power - p_in) <= rtol * p_in:
            return _operating_point(mid, params)
        if power < p_in:
            lo = mid
        else:
            hi = mid

    logger.error(f"Operating point solve did not converge for {p_in:.3f} W")
    raise ConvergenceError(
        f"Operating point solve did not converge for {p_in:.3f} W "
        f"after {params.solver_max_iter} iterations"
    )


def generation_rates(stack_current: float, eta_f: float, params: ParamSet) -> tuple[float, float]:
    """Hydrogen and oxygen generation, mol/s.

    Oxygen is exactly half the hydrogen rate.
    """
    if stack_current == 0.0:
        return 0.0, 0.0
    h2 = eta_f * params.n_cell * stack_current / (2.0 * params.faraday)
    return h2, h2 / 2.0
