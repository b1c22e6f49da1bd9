"""Simulate command for the h2gov CLI"""

import time
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console

from src.core.metrics import compute_metrics
from src.core.records import write_csv
from src.core.scenarios import resolve_scenario
from src.core.simulation import GovernorConfig, run_scenario
from src.utils.constants import GOVERNOR_CHOICES
from src.utils.errors import H2GovError

from ..utils import (
    cached_admissible_set,
    display_metrics,
    fail,
    load_cli_params,
    validate_and_expand_path,
)

console = Console()


def simulate_cmd(
    scenario: str,
    governor: Optional[str] = None,
    config: Optional[str] = None,
    output: Optional[str] = None,
) -> None:
    """Run one scenario, write its trajectory to CSV and print its metrics.

    Args:
        scenario (str): Shipped scenario name or path to a scenario file.
        governor (Optional[str]): Governor override, ``pg``, ``lpf`` or ``none``.
        config (Optional[str]): Parameter file, defaults to the shipped parameters.
        output (Optional[str]): CSV destination, defaults to ``<scenario>_<governor>.csv``.
    """
    if governor is not None and governor not in GOVERNOR_CHOICES:
        raise typer.BadParameter(
            f"Governor must be one of {', '.join(GOVERNOR_CHOICES)}, got {governor!r}"
        )

    try:
        params = load_cli_params(config)
        run = resolve_scenario(scenario, params)
        if governor is not None:
            run = run.with_governor(governor)

        console.print(
            f"\n[bold cyan]Simulating: [/bold cyan] [magenta]{run.name}[/magenta] "
            f"with governor [magenta]{run.governor}[/magenta]\n"
        )

        omega = cached_admissible_set(params) if run.governor == "pg" else None

        start_time = time.perf_counter()
        record = run_scenario(run, params, GovernorConfig(admissible_set=omega))
        end_time = time.perf_counter()

        dest = validate_and_expand_path(output or f"{run.name}_{run.governor}.csv")
        write_csv(record, params, dest)
        display_metrics([compute_metrics(record, params)])

        console.print(
            f"\n[bold green]Simulation complete - {record.samples} samples in "
            f"{end_time - start_time:.3f}s, written to {Path(dest)}[/bold green]\n"
        )

    except H2GovError as e:
        fail(e)
    except OSError as e:
        console.print(f"\n[red]File error: [/red] {e}\n")
        raise typer.Exit(code=1)
