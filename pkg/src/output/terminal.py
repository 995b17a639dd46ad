"""Terminal output handler for RoleModel."""

from typing import Sequence

from pydantic import BaseModel
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from .base import OutputHandler
from ..models import BiasTable, CascadeReport, EstimateReport

console = Console()


class TerminalOutput(OutputHandler):
    """Terminal output handler that displays results in the console."""

    def __init__(self, target: Console = console):
        self.console = target

    def write(self, results: Sequence[BaseModel]) -> None:
        """Display results as rich tables.

        Args:
            results: Bias tables, estimate reports or cascade reports
        """
        results = list(results)
        if not results:
            self.console.print("[yellow]No results to display[/yellow]")
            return

        reports = [r for r in results if isinstance(r, EstimateReport)]
        if reports:
            self._show_estimates(reports)
        cascades = [r for r in results if isinstance(r, CascadeReport)]
        if cascades:
            self._show_cascades(cascades)
        for table in results:
            if isinstance(table, BiasTable):
                self._show_bias(table)

    def _show_bias(self, table: BiasTable) -> None:
        """Show the bias of every method at every sweep value."""
        view = Table(title=f"Study {table.study}: bias of rho-hat (rho = {table.rho})")
        view.add_column("Sweep", justify="right", style="cyan")
        methods = table.methods()
        for method in methods:
            view.add_column(method, justify="right")
        for sweep in table.sweeps():
            cells = []
            for method in methods:
                row = table.row(sweep, method)
                cells.append(f"{row.bias:+.4f} ({row.mc_se:.4f})")
            view.add_row(f"{sweep:g}", *cells)
        self.console.print(view)
        if table.resampled:
            self.console.print(f"[yellow]{table.resampled} replicate(s) resampled[/yellow]")

    def _show_estimates(self, reports: Sequence[EstimateReport]) -> None:
        """Show coefficients (standard errors) side by side."""
        view = Table(title="Outcome model estimates")
        view.add_column("Column", style="cyan")
        for report in reports:
            view.add_column(f"{report.specification}\n{report.method}", justify="right")
        labels = []
        for report in reports:
            labels.extend(label for label in report.labels if label not in labels)
        for label in labels:
            cells = []
            for report in reports:
                if label in report.coefficients:
                    cells.append(f"{report.coefficients[label]:.4f} ({report.std_errors[label]:.4f})")
                else:
                    cells.append("")
            style = "bold" if any(label in r.peer_columns for r in reports) else None
            view.add_row(label, *cells, style=style)
        view.add_row("n", *[str(r.n_obs) for r in reports], style="dim")
        self.console.print(view)

    def _show_cascades(self, reports: Sequence[CascadeReport]) -> None:
        """Show the counterfactual summary, one column per run."""
        view = Table(title="Buddy intervention")
        view.add_column("Quantity", style="cyan")
        for report in reports:
            view.add_column(report.label, justify="right")
        view.add_row("Threshold", *[f"{r.threshold:.3f}" for r in reports])
        view.add_row("Targeted", *[str(r.targeted_count) for r in reports])
        view.add_row("Treated", *[str(r.treated_count) for r in reports], style="green")
        view.add_row("True failures", *[str(r.failures_true) for r in reports])
        view.add_row("Below threshold (pre)", *[str(r.below_threshold_pre) for r in reports])
        view.add_row("Below threshold (post)", *[str(r.below_threshold_post) for r in reports])
        self.console.print(view)

        text = Text()
        text.append(f"Residents: {reports[0].n}\n", style="white")
        text.append(f"Buddy weight: {reports[0].buddy_weight:g}", style="magenta")
        self.console.print(Panel(text, title="Settings"))
