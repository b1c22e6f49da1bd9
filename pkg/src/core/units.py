"""Unit conversions between the SI core and the reporting units (bar, kW, Nm³/h)."""

from src.utils.constants import (
    KELVIN_OFFSET,
    NORMAL_MOLAR_VOLUME,
    PA_PER_BAR,
    SECONDS_PER_HOUR,
    W_PER_KW,
)
from src.utils.errors import UnitConversionError


def _check_molar_mass(molar_mass: float) -> None:
    if not molar_mass > 0:
        raise UnitConversionError(f"Molar mass must be positive, got {molar_mass}")


def molar_to_mass_flow(n_dot: float, molar_mass: float) -> float:
    """Convert a molar flow to a mass flow.

    Args:
        n_dot (float): Molar flow, mol/s.
        molar_mass (float): Molar mass, kg/mol.

    Returns:
        float: Mass flow, kg/s.
    """
    _check_molar_mass(molar_mass)
    return n_dot * molar_mass


def mass_flow_to_normal_volumetric(w: float, molar_mass: float) -> float:
    """Convert a mass flow to a normal volumetric flow (0 °C, 1 atm).

    Args:
        w (float): Mass flow, kg/s.
        molar_mass (float): Molar mass, kg/mol.

    Returns:
        float: Volumetric flow at normal conditions, Nm³/h.
    """
    _check_molar_mass(molar_mass)
    return w / molar_mass * NORMAL_MOLAR_VOLUME * SECONDS_PER_HOUR


def normal_volumetric_to_mass_flow(flow: float, molar_mass: float) -> float:
    """Convert a normal volumetric flow (Nm³/h) back to a mass flow (kg/s)."""
    _check_molar_mass(molar_mass)
    return flow / SECONDS_PER_HOUR / NORMAL_MOLAR_VOLUME * molar_mass


def bar_to_pa(p: float) -> float:
    return p * PA_PER_BAR


def pa_to_bar(p: float) -> float:
    return p / PA_PER_BAR


def kw_to_w(p: float) -> float:
    return p * W_PER_KW


def w_to_kw(p: float) -> float:
    return p / W_PER_KW


def celsius_to_kelvin(t: float) -> float:
    return t + KELVIN_OFFSET


def kelvin_to_celsius(t: float) -> float:
    return t - KELVIN_OFFSET
