"""Linearize command for the h2gov CLI"""

from typing import Optional

from rich.console import Console

from src.core.linearize import numerical_jacobian
from src.core.lti import default_linear_model
from src.core.units import kw_to_w
from src.utils.errors import H2GovError

from ..utils import display_model, fail, load_cli_params

console = Console()


def linearize_cmd(power: Optional[float] = None, config: Optional[str] = None) -> None:
    """Linearize the regulated plant and show it next to the shipped governor model.

    Args:
        power (Optional[float]): Operating power, kW; defaults to the nominal power.
        config (Optional[str]): Parameter file.
    """
    try:
        params = load_cli_params(config)
        watts = kw_to_w(power) if power is not None else params.nominal_power
        console.print(f"\n[bold cyan]Linearizing at: [/bold cyan] [magenta]{watts / 1e3:.3f} kW[/magenta]\n")

        display_model(numerical_jacobian(params, watts), "Numerical linearization")
        console.print()
        display_model(default_linear_model(), "Governor model")
        console.print()

    except H2GovError as e:
        fail(e)
