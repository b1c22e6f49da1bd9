"""Admissible set command for the h2gov CLI"""

import time
from dataclasses import replace
from typing import Optional

import typer
from rich.console import Console

from src.core.governor import governor_model, output_bounds
from src.core.mas import build_mas, save_admissible_set
from src.core.units import bar_to_pa
from src.utils.constants import REFERENCE_ROW_COUNT
from src.utils.errors import H2GovError
from src.utils.paths import mas_cache

from ..utils import fail, load_cli_params, validate_and_expand_path

console = Console()


def mas_cmd(
    ts: Optional[float] = None,
    epsilon: Optional[float] = None,
    p_min: Optional[float] = None,
    p_max: Optional[float] = None,
    margin: Optional[float] = None,
    config: Optional[str] = None,
    output: Optional[str] = None,
) -> None:
    """Build the admissible set, save it and report its size.

    Args:
        ts (Optional[float]): Governor period, s.
        epsilon (Optional[float]): Steady-state tightening, bar.
        p_min (Optional[float]): Lower hydrogen pressure bound, bar.
        p_max (Optional[float]): Upper hydrogen pressure bound, bar.
        margin (Optional[float]): Model mismatch margin taken off both bounds, bar.
        config (Optional[str]): Parameter file.
        output (Optional[str]): Destination, defaults to the user cache.
    """
    try:
        params = load_cli_params(config)
        overrides = {}
        if ts is not None:
            overrides["governor_period"] = ts
            overrides["substep"] = min(params.substep, ts)
        if epsilon is not None:
            overrides["epsilon"] = bar_to_pa(epsilon)
        if p_min is not None:
            overrides["p_min"] = bar_to_pa(p_min)
        if p_max is not None:
            overrides["p_max"] = bar_to_pa(p_max)
        if margin is not None:
            overrides["mismatch_margin"] = bar_to_pa(margin)
        params = replace(params, **overrides)

        y_upper, y_lower, eps = output_bounds(params)
        console.print(
            f"\n[bold cyan]Building admissible set: [/bold cyan] Ts={params.governor_period}s, "
            f"bounds [{y_lower:+.3f}, {y_upper:+.3f}] bar, epsilon={eps} bar\n"
        )

        start_time = time.perf_counter()
        omega = build_mas(governor_model(params), y_upper, y_lower, eps, params.horizon_cap)
        end_time = time.perf_counter()

        dest = validate_and_expand_path(output) if output else mas_cache
        save_admissible_set(omega, dest)

        console.print(f"[cyan]Horizon j*:[/cyan] {omega.j_star}")
        console.print(
            f"[cyan]Rows:[/cyan] {omega.rows} "
            f"(reference {REFERENCE_ROW_COUNT} for ±1 bar with --margin 0)"
        )
        console.print(
            f"\n[bold green]Admissible set built in {end_time - start_time:.3f}s, "
            f"saved to {dest}[/bold green]\n"
        )

    except H2GovError as e:
        fail(e)
    except OSError as e:
        console.print(f"\n[red]File error: [/red] {e}\n")
        raise typer.Exit(code=1)
