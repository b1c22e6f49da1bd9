"""Sweep the anode valve gain and report the pressure offset it leaves.

Usage: python scripts/tune_anode_gain.py [gain ...]   (gains in 1/bar, negative)
"""

import sys
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from rich import box  # noqa: E402
from rich.console import Console  # noqa: E402
from rich.table import Table  # noqa: E402

from src.core.params import load_default_params  # noqa: E402
from src.core.plant import ElectrolyzerPlant  # noqa: E402
from src.core.units import pa_to_bar  # noqa: E402
from src.utils.errors import H2GovError  # noqa: E402

DEFAULT_GAINS = (-2.0, -5.0, -10.0, -15.0, -25.0, -50.0)
SETTLE_BAND_BAR = 0.05
HORIZON_S = 60.0

console = Console()


def sweep(gains):
    base = load_default_params()
    table = Table(title="Anode gain sweep", title_style="green", box=box.ASCII)
    for header in ("K_p_an [1/bar]", "Offset @ nominal [bar]", "Offset @ max level [bar]", "Settles in 60 s"):
        table.add_column(header, justify="right")

    for gain in gains:
        try:
            params = replace(base, kp_an=gain)
        except H2GovError as e:
            console.print(f"[red]Skipping {gain}: [/red] {e}")
            continue

        plant = ElectrolyzerPlant(params)
        nominal = plant.find_equilibrium(params.nominal_power)
        high = plant.find_equilibrium(params.large_step_high)

        # Start with both separators at the hydrogen reference and let the valve act
        start = replace(nominal, p_o2=nominal.p_h2)
        end = plant.simulate_constant(start, params.nominal_power, HORIZON_S)
        settled = abs(pa_to_bar(end.p_o2 - end.p_h2)) < SETTLE_BAND_BAR

        table.add_row(
            f"{gain:g}",
            f"{pa_to_bar(nominal.p_o2 - nominal.p_h2):.4f}",
            f"{pa_to_bar(high.p_o2 - high.p_h2):.4f}",
            "yes" if settled else "no",
        )

    console.print(table)


if __name__ == "__main__":
    sweep([float(g) for g in sys.argv[1:]] or DEFAULT_GAINS)
