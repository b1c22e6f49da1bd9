"""Compare command for the h2gov CLI"""

import json
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import typer
from rich.console import Console

from src.core.metrics import compute_metrics, metrics_to_document, production_gain_pct
from src.core.records import write_csv
from src.core.scenarios import resolve_scenario
from src.core.simulation import GovernorConfig, RunRecord, run_scenario
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


def compare_cmd(
    scenario: str,
    config: Optional[str] = None,
    output_dir: Optional[str] = None,
    json_path: Optional[str] = None,
) -> None:
    """Run a scenario under every governor and tabulate the metrics side by side.

    Args:
        scenario (str): Shipped scenario name or path to a scenario file.
        config (Optional[str]): Parameter file.
        output_dir (Optional[str]): Directory for one CSV per governor.
        json_path (Optional[str]): Destination for the metrics document.
    """
    try:
        params = load_cli_params(config)
        base = resolve_scenario(scenario, params)
        omega = cached_admissible_set(params)
        runs = [base.with_governor(choice) for choice in GOVERNOR_CHOICES]

        console.print(
            f"\n[bold cyan]Comparing governors on: [/bold cyan] [magenta]{base.name}[/magenta]\n"
        )

        start_time = time.perf_counter()
        config_pg = GovernorConfig(admissible_set=omega)
        with ThreadPoolExecutor(max_workers=len(runs)) as pool:
            records: list[RunRecord] = list(
                pool.map(lambda run: run_scenario(run, params, config_pg), runs)
            )
        end_time = time.perf_counter()

        reports = [compute_metrics(record, params) for record in records]
        display_metrics(reports)
        gain = production_gain_pct(reports)
        if gain is not None:
            console.print(f"[cyan]H2 production, pg against lpf:[/cyan] {gain:+.2f} %")

        if output_dir:
            directory = validate_and_expand_path(output_dir)
            for record in records:
                write_csv(record, params, directory / f"{base.name}_{record.governor}.csv")

        if json_path:
            dest = validate_and_expand_path(json_path)
            dest.parent.mkdir(parents=True, exist_ok=True)
            doc = {
                "scenario": base.name,
                "params_digest": params.digest(),
                "production_gain_pct": gain,
                "runs": [metrics_to_document(report) for report in reports],
            }
            dest.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")

        console.print(
            f"\n[bold green]Comparison complete - {len(records)} runs in "
            f"{end_time - start_time:.3f}s[/bold green]\n"
        )

    except H2GovError as e:
        fail(e)
    except OSError as e:
        console.print(f"\n[red]File error: [/red] {e}\n")
        raise typer.Exit(code=1)
