"""CLI utilities for h2gov"""

from pathlib import Path
from typing import Iterable, NoReturn, Optional

import numpy as np
import typer
from rich import box
from rich.console import Console
from rich.table import Table

from runtime.mas_cache import ensure_admissible_set
from src.core.governor import governor_model, output_bounds
from src.core.lti import LtiModel
from src.core.mas import AdmissibleSet
from src.core.metrics import MetricsReport
from src.core.params import ParamSet, resolve_params
from src.utils.errors import (
    AdmissibleSetFormatError,
    ElectrochemError,
    EquilibriumError,
    LinearModelError,
    LpError,
    MasDeterminationError,
    ParameterError,
    ScenarioError,
    SimulationError,
)

console = Console()

# First match wins, so subclasses come before their parents
EXIT_CODES: tuple[tuple[type[Exception], int, str], ...] = (
    (ParameterError, 3, "Parameter error"),
    (ScenarioError, 4, "Scenario error"),
    (ElectrochemError, 5, "Electrochemistry error"),
    (SimulationError, 5, "Simulation error"),
    (EquilibriumError, 5, "Equilibrium error"),
    (MasDeterminationError, 6, "Admissible set error"),
    (AdmissibleSetFormatError, 6, "Admissible set error"),
    (LinearModelError, 6, "Linear model error"),
    (LpError, 7, "Linear program error"),
)


def fail(e: Exception) -> NoReturn:
    """Print an error and exit with the code for its category.

    Raises:
        typer.Exit: Always.
    """
    for error_type, code, label in EXIT_CODES:
        if isinstance(e, error_type):
            console.print(f"\n[red]{label}: [/red] {e}\n")
            raise typer.Exit(code=code)
    console.print(f"\n[red]Unexpected error: [/red] {e}\n")
    raise typer.Exit(code=1)


def validate_and_expand_path(path_str: str) -> Path:
    """Validate and expand a file path

    Args:
        path_str (str): The path string to validate and expand.

    Returns:
        Path: The expanded, absolute Path object.

    Raises:
        typer.BadParameter: If the path is invalid.
    """
    try:
        return Path(path_str).expanduser().resolve()
    except Exception as e:
        raise typer.BadParameter(f"Invalid path: {e}")


def pick_scenario(
    argument: Optional[str], option: Optional[str], default: str = "large-step"
) -> str:
    """Scenario from the positional argument or ``--scenario``, which may not disagree.

    Raises:
        typer.BadParameter: If both are given with different values.
    """
    if argument and option and argument != option:
        raise typer.BadParameter(f"Scenario given twice: {argument!r} and --scenario {option!r}")
    return option or argument or default


def load_cli_params(config: Optional[str]) -> ParamSet:
    """Parameters from ``--config`` when given, the shipped defaults otherwise."""
    return resolve_params(validate_and_expand_path(config) if config else None)


def cached_admissible_set(params: ParamSet, cache: Optional[Path] = None) -> AdmissibleSet:
    """Admissible set for the configured bounds, from the user cache when current."""
    y_upper, y_lower, epsilon = output_bounds(params)
    return ensure_admissible_set(
        governor_model(params),
        y_upper,
        y_lower,
        epsilon,
        params.horizon_cap,
        path=cache,
    )


def display_metrics(reports: Iterable[MetricsReport]) -> None:
    """Display one row of metrics per governor run.

    Args:
        reports (Iterable[MetricsReport]): Reports to tabulate.
    """
    reports = list(reports)
    table = Table(
        title=f"Metrics - {reports[0].scenario}" if reports else "Metrics",
        title_style="green",
        box=box.ASCII,
    )
    table.add_column("Governor", justify="left", style="cyan", no_wrap=True)
    for header in (
        "MSE [kW²]",
        "RMSE [kW]",
        "H2 gen [Nm³]",
        "H2 out [Nm³]",
        "Aux [kWh]",
        "Peak exc. [bar]",
        "Violation [s]",
    ):
        table.add_column(header, justify="right", style="magenta")

    for r in reports:
        table.add_row(
            r.governor,
            f"{r.tracking_mse_kw2:.4f}",
            f"{r.tracking_rmse_kw:.4f}",
            f"{r.h2_production_nm3:.5f}",
            f"{r.h2_delivered_nm3:.5f}",
            f"{r.auxiliary_energy_kwh:.5f}",
            f"{r.peak_excursion_bar:.4f}",
            f"{r.violation_duration_s:.1f}",
        )

    console.print(table)


def display_model(model: LtiModel, title: str) -> None:
    """Display the A and B matrices of a linear model side by side."""
    table = Table(title=title, title_style="green", box=box.ASCII)
    table.add_column("State", justify="left", style="cyan", no_wrap=True)
    for j in range(model.n_states):
        table.add_column(f"A[:, {j}]", justify="right", style="magenta")
    table.add_column("B", justify="right", style="yellow")

    labels = model.state_labels or tuple(f"x{i}" for i in range(model.n_states))
    for i, label in enumerate(labels):
        table.add_row(
            label,
            *(f"{value:.4f}" for value in model.a[i]),
            f"{model.b[i, 0]:.4f}",
        )

    console.print(table)
    eig = np.linalg.eigvals(model.a)
    console.print(f"[cyan]Eigenvalues:[/cyan] {', '.join(f'{v:.4f}' for v in eig)}")
