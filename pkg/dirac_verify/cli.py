"""
Command line interface: run scenarios, list checks, print coefficient tables
and evaluate the neutrino cosmological constant.

Exit codes: 0 all passed, 1 a check failed, 2 invalid input.
"""
import json
import logging
from pathlib import Path
from typing import List, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from dirac_verify import __version__
from dirac_verify.config import settings
from dirac_verify.core.lagrangians import BLOCK_ROUTE_DEVIATION, coefficient_rows, lambda_dm
from dirac_verify.generators import ReportGenerator
from dirac_verify.models import CheckStatus, RunReport
from dirac_verify.parsers import MassFileParser, ScenarioParser
from dirac_verify.services import RunService, get_check_registry

app = typer.Typer(help="Verification suite for Clifford modules and Dirac-type operators", add_completion=False)
console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger("dirac_verify")

STATUS_STYLE = {
    CheckStatus.PASSED: "green",
    CheckStatus.FAILED: "red",
    CheckStatus.ERROR: "bold red",
    CheckStatus.SKIPPED: "yellow",
}


def _setup_logging(level: Optional[str]) -> None:
    handler = RichHandler(console=err_console, show_path=False, rich_tracebacks=True)
    logging.basicConfig(level=(level or settings.log_level).upper(), format="%(message)s",
                        handlers=[handler], force=True)


def _fail_input(errors: List[str]) -> None:
    for error in errors:
        err_console.print(f"[red]✗[/red] {error}")
    raise typer.Exit(code=2)


def _report_table(report: RunReport) -> Table:
    table = Table(title=f"{report.scenario} {report.signature} seed={report.seed}")
    table.add_column("check")
    table.add_column("status")
    table.add_column("residual", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("time [s]", justify="right")
    for r in report.results:
        style = STATUS_STYLE[r.status]
        table.add_row(
            r.check_id,
            f"[{style}]{r.status.value}[/{style}]",
            "-" if r.residual is None else f"{r.residual:.2e}",
            "-" if r.tolerance is None else f"{r.tolerance:.0e}",
            f"{r.wall_time:.2f}",
        )
    return table


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override DIRAC_LOG_LEVEL"),
):
    """Dirac Verify command line"""
    _setup_logging(log_level)


@app.command()
def version():
    """Print the package version"""
    console.print(f"{settings.app_name} {__version__}")


@app.command()
def run(
    config: Path = typer.Argument(..., help="Scenario JSON file"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", "-o", help="Report directory"),
    threads: Optional[int] = typer.Option(None, "--threads", "-t", min=1, help="Override DIRAC_THREADS"),
    check: Optional[List[str]] = typer.Option(None, "--check", "-c", help="Run only these ids or patterns"),
    json_output: bool = typer.Option(False, "--json", help="Print a JSON summary instead of tables"),
):
    """Run every scenario in a config file and write JSON + CSV reports"""
    registry = get_check_registry()
    parsed = ScenarioParser(known_checks=[spec.check_id for spec in registry.all()]).parse(str(config))
    if not parsed.success:
        _fail_input(parsed.errors)
    if check:
        unknown = registry.unknown(check)
        if unknown:
            _fail_input([f"unknown check '{pattern}'" for pattern in unknown])

    service = RunService(registry, threads)
    generator = ReportGenerator()
    target = str(output_dir or settings.output_dir)
    summary = []
    all_passed = True
    for scenario in parsed.items:
        report = service.run(scenario, list(check) if check else None)
        paths = generator.write_run_report(report, target)
        all_passed = all_passed and report.passed
        if not report.passed:
            logger.warning("scenario %s: %s", report.scenario, report.counts())
        summary.append({
            "scenario": report.scenario,
            "signature": report.signature,
            "passed": report.passed,
            "counts": report.counts(),
            "reports": paths,
        })
        if not json_output:
            console.print(_report_table(report))
            console.print(f"reports: {paths['json']}, {paths['csv']}")

    if json_output:
        console.print_json(json.dumps({"passed": all_passed, "scenarios": summary}))
    elif all_passed:
        console.print("[green]✓ all checks passed[/green]")
    else:
        console.print("[red]✗ some checks failed[/red]")
    raise typer.Exit(code=0 if all_passed else 1)


@app.command("list-checks")
def list_checks(
    suite: Optional[str] = typer.Option(None, "--suite", help="Only this suite (clifford, operators, ...)"),
    json_output: bool = typer.Option(False, "--json"),
):
    """List every registered check"""
    specs = [s for s in get_check_registry().all() if suite is None or s.suite == suite]
    if json_output:
        console.print_json(json.dumps([{"id": s.check_id, "description": s.description} for s in specs]))
        return
    table = Table(title="checks")
    table.add_column("id")
    table.add_column("description")
    for spec in specs:
        table.add_row(spec.check_id, spec.description)
    console.print(table)


@app.command()
def coefficients(
    n_max: int = typer.Option(8, "--n-max", help="Largest even dimension"),
    epsilon: int = typer.Option(1, "--epsilon", help="Clifford sign, +1 or -1"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", "-o"),
    json_output: bool = typer.Option(False, "--json"),
):
    """Exact coefficient table of the trace identities for n = 2..n_max"""
    if epsilon not in (1, -1):
        _fail_input([f"epsilon must be +1 or -1, got {epsilon}"])
    try:
        rows = coefficient_rows(n_max, epsilon)
    except ValueError as e:
        _fail_input([str(e)])
    path = ReportGenerator().write_coefficient_table(
        rows, str(output_dir or settings.output_dir), f"coefficients_eps{'+' if epsilon > 0 else '-'}.csv"
    )
    if json_output:
        console.print_json(json.dumps(rows))
        return
    table = Table(title=f"coefficients (epsilon = {epsilon:+d})")
    for column in rows[0]:
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(*row.values())
    console.print(table)
    console.print(f"table: {path}")


@app.command("lambda")
def lambda_command(
    mass_file: Path = typer.Argument(..., help="Mass file (JSON or CSV)"),
    n: int = typer.Option(4, "--n", help="Even dimension"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", "-o"),
    json_output: bool = typer.Option(False, "--json"),
):
    """Neutrino-sector cosmological constant with its cross-term decomposition"""
    if n < 2 or n % 2:
        _fail_input([f"n must be even and >= 2, got {n}"])
    parsed = MassFileParser().parse(str(mass_file))
    if not parsed.success or not parsed.items:
        _fail_input(parsed.errors or [f"{mass_file} holds no mass pair"])
    try:
        results = [lambda_dm(m_dirac, m_majorana, n) for m_dirac, m_majorana in parsed.items]
    except ValueError as e:
        _fail_input([str(e)])
    path = ReportGenerator().write_lambda(results, str(output_dir or settings.output_dir))
    agreed = all(r.route_residual <= settings.pointwise_tolerance for r in results)
    header = f"[yellow]known deviation:[/yellow] {BLOCK_ROUTE_DEVIATION}; route residual measures the gap"

    if json_output:
        err_console.print(header)
        console.print_json(json.dumps([r.model_dump() for r in results]))
    else:
        console.print(header)
        for index, r in enumerate(results):
            table = Table(title=f"pair {index}: n={r.n}, a={r.a}")
            table.add_column("quantity")
            table.add_column("value", justify="right")
            table.add_row("Lambda", f"{r.lambda_dm:.12g}")
            for name, value in r.terms.items():
                table.add_row(name, f"{value:.12g}")
            table.add_row("block route", f"{r.lambda_block:.12g}")
            table.add_row("block gap", f"{r.block_gap:.12g}")
            table.add_row("predicted gap", f"{r.predicted_gap:.12g}")
            table.add_row("route residual", f"{r.route_residual:.2e}")
            console.print(table)
        console.print(f"results: {path}")
    raise typer.Exit(code=0 if agreed else 1)


if __name__ == "__main__":
    app()
