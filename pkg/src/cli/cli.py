"""CLI interface for the h2gov application"""

import logging
from typing import Optional

import typer
from typer_extensions import ExtendedTyper

from src.utils.logger import configure_logging

from .commands.compare import compare_cmd
from .commands.config import config_cmd
from .commands.linearize import linearize_cmd
from .commands.mas import mas_cmd
from .commands.simulate import simulate_cmd
from .utils import pick_scenario

app = ExtendedTyper(help="h2gov CLI - Pressure-safe power governing for alkaline electrolyzers")

SCENARIO_HELP = (
    "Scenario name (large-step, small-steps, constant) or scenario JSON file, default large-step"
)
CONFIG_HELP = "Parameter JSON file, defaults to the shipped parameters"


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Show progress logs on the console"),
) -> None:
    """Configure logging before any command runs"""
    configure_logging(console_level=logging.INFO if verbose else None)


@app.command_with_aliases(aliases=["sim", "s"])
def simulate(
    scenario: Optional[str] = app.Argument(None, help=SCENARIO_HELP, metavar="SCENARIO"),
    scenario_opt: Optional[str] = typer.Option(None, "--scenario", "-s", help=SCENARIO_HELP),
    governor: Optional[str] = typer.Option(None, "--governor", "-g", help="pg, lpf or none"),
    config: Optional[str] = typer.Option(None, "--config", "-c", help=CONFIG_HELP),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="CSV output file"),
) -> None:
    """Simulate one scenario and write its trajectory to CSV"""
    simulate_cmd(pick_scenario(scenario, scenario_opt), governor, config, output)


@app.command_with_aliases(aliases=["m"])
def mas(
    ts: Optional[float] = typer.Option(None, "--ts", help="Governor period, s"),
    epsilon: Optional[float] = typer.Option(None, "--eps", help="Steady-state tightening, bar"),
    p_min: Optional[float] = typer.Option(None, "--p-min", help="Lower H2 pressure bound, bar"),
    p_max: Optional[float] = typer.Option(None, "--p-max", help="Upper H2 pressure bound, bar"),
    margin: Optional[float] = typer.Option(
        None, "--margin", help="Mismatch margin taken off both bounds, bar (0 keeps the limits)"
    ),
    config: Optional[str] = typer.Option(None, "--config", "-c", help=CONFIG_HELP),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="Admissible set JSON file"),
) -> None:
    """Build the power governor's admissible set and report its size"""
    mas_cmd(ts, epsilon, p_min, p_max, margin, config, output)


@app.command_with_aliases(aliases=["cmp", "c"])
def compare(
    scenario: Optional[str] = app.Argument(None, help=SCENARIO_HELP, metavar="SCENARIO"),
    scenario_opt: Optional[str] = typer.Option(None, "--scenario", "-s", help=SCENARIO_HELP),
    config: Optional[str] = typer.Option(None, "--config", "-c", help=CONFIG_HELP),
    output_dir: Optional[str] = typer.Option(None, "--output-dir", "-o", help="Directory for CSV files"),
    json_path: Optional[str] = typer.Option(None, "--json", help="Metrics JSON output file"),
) -> None:
    """Run a scenario under every governor and compare the metrics"""
    compare_cmd(pick_scenario(scenario, scenario_opt), config, output_dir, json_path)


@app.command_with_aliases(aliases=["lin", "l"])
def linearize(
    power: Optional[float] = typer.Option(None, "--power", "-p", help="Operating power, kW"),
    config: Optional[str] = typer.Option(None, "--config", "-c", help=CONFIG_HELP),
) -> None:
    """Linearize the regulated plant around an operating point"""
    linearize_cmd(power, config)


@app.command_with_aliases(aliases=["cfg"])
def config(
    config: Optional[str] = typer.Option(None, "--config", "-c", help="Parameter file to validate"),
    output: Optional[str] = typer.Option(None, "--output", "-o", help="Write to this file"),
    template: bool = typer.Option(False, "--template", help="Copy the shipped human-unit document"),
    force: bool = typer.Option(False, "--force", "-f", help="Overwrite an existing template file"),
) -> None:
    """Print the canonical parameter document

    controllers.kp_an_per_bar must be negative (default -15 per bar) so the
    exhaust valve opens as p_O2 rises above p_H2. governor.mismatch_margin_bar
    (default 0.05) narrows both pressure bounds of the admissible set.
    """
    config_cmd(config, output, template, force)


if __name__ == "__main__":
    app()
