"""Config command for the h2gov CLI"""

from typing import Optional

import typer
from rich.console import Console

from runtime.extraction import extract_default_params
from src.core.params import emit_params
from src.utils.errors import H2GovError

from ..utils import fail, load_cli_params, validate_and_expand_path

console = Console()


def config_cmd(
    config: Optional[str] = None,
    output: Optional[str] = None,
    template: bool = False,
    force: bool = False,
) -> None:
    """Print or save the effective parameter document.

    Args:
        config (Optional[str]): Parameter file to validate, defaults to the shipped one.
        output (Optional[str]): Write to this file instead of printing.
        template (bool): Copy the shipped, human-unit document instead of the
            canonical SI document.
        force (bool): Replace an existing file when copying the template.
    """
    try:
        if template:
            if not output:
                raise typer.BadParameter("--template needs --output")
            dest = validate_and_expand_path(output)
            extract_default_params(dest, overwrite=force)
            console.print(f"\n[bold green]Parameter template written to {dest}[/bold green]\n")
            return

        params = load_cli_params(config)
        text = emit_params(params)
        if output:
            dest = validate_and_expand_path(output)
            dest.parent.mkdir(parents=True, exist_ok=True)
            dest.write_text(text, encoding="utf-8")
            console.print(
                f"\n[bold green]Parameters {params.digest()[:12]} written to {dest}[/bold green]\n"
            )
        else:
            typer.echo(text, nl=False)

    except H2GovError as e:
        fail(e)
    except OSError as e:
        console.print(f"\n[red]File error: [/red] {e}\n")
        raise typer.Exit(code=1)
