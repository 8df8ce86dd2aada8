"""Console formatter using Rich."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from tailcache.models import (
    ComparisonTable,
    MetricsReport,
    MonteCarloReport,
    OracleCheckReport,
    Trace,
)

_PERCENTILE_COLUMNS = (("p50", "P50"), ("p90", "P90"), ("p95", "P95"), ("p99", "P99"))


def _ms(value: float) -> str:
    return f"{value:,.1f}"


def _percent(value: float | None) -> str:
    if value is None:
        return "-"
    style = "green" if value > 0 else "red" if value < 0 else "dim"
    return f"[{style}]{value:+.1f}%[/{style}]"


class ReportFormatter:
    """Formatter for command results using Rich."""

    def __init__(self, console: Console | None = None) -> None:
        self.console = console or Console()

    def error(self, text: str) -> str:
        """Format error message."""
        return f"[red]Error:[/red] {text}"

    def success(self, text: str) -> str:
        """Format success message."""
        return f"[green]{text}[/green]"

    def warning(self, text: str) -> str:
        """Format warning message."""
        return f"[yellow]{text}[/yellow]"

    def print_result(self, text: str, *, title: str = "Result") -> None:
        """Print result in a panel."""
        self.console.print(Panel(Text(text), title=title, border_style="green"))

    def print_error(self, text: str) -> None:
        """Print error in a panel."""
        self.console.print(Panel(text, title="Error", border_style="red"))

    def print_written(self, paths: Sequence[Path]) -> None:
        for path in paths:
            self.console.print(f"  [dim]wrote[/dim] [cyan]{path}[/cyan]")

    def print_trace_summary(self, trace: Trace, *, title: str = "Trace") -> None:
        """Turns, conversations and block totals of a trace."""
        table = Table(title=title, show_header=False)
        table.add_column("field", style="bold")
        table.add_column("value", justify="right")
        table.add_row("turns", str(trace.horizon))
        table.add_row("conversations", str(len(trace.conversation_ids)))
        table.add_row("block size (tokens)", str(trace.block_size))
        table.add_row("mean prompt (blocks)", f"{trace.mean_prompt_blocks():.1f}")
        table.add_row("total blocks", str(trace.total_blocks()))
        table.add_row("termination flags", "yes" if trace.has_termination_flags else "no")
        self.console.print(table)

    def print_report(self, report: MetricsReport, *, title: str = "Replay") -> None:
        """One MetricsReport as a two-column table."""
        table = Table(title=title, show_header=False)
        table.add_column("metric", style="bold")
        table.add_column("value", justify="right")
        table.add_row("requests", str(report.count))
        table.add_row(f"TEL (xi = {report.xi_ms:g} ms)", _ms(report.tel_ms))
        table.add_row("TEL (blocks)", _ms(report.tel_blocks))
        for attribute, label in _PERCENTILE_COLUMNS:
            table.add_row(f"{label} TTFT (ms)", _ms(getattr(report, attribute)))
        table.add_row("mean TTFT (ms)", _ms(report.mean_ttft_ms))
        table.add_row("max TTFT (ms)", _ms(report.max_ttft_ms))
        for result in report.slo:
            table.add_row(
                f"SLO {result.slo_ms:g} ms violations", f"{result.count} ({result.rate:.1%})"
            )
        table.caption = f"latency source: {report.latency_source}"
        self.console.print(table)

    def print_comparison(self, comparison: ComparisonTable) -> None:
        """Tail percentiles per cell, with improvement over the baseline."""
        table = Table(title=f"Comparison (baseline {comparison.baseline})")
        table.add_column("policy", style="cyan")
        table.add_column("C", justify="right")
        table.add_column("xi (ms)", justify="right")
        table.add_column("TEL (ms)", justify="right")
        for _, label in _PERCENTILE_COLUMNS:
            table.add_column(label, justify="right")
        table.add_column("P90 vs base", justify="right")
        table.add_column("TEL vs base", justify="right")

        for cell in comparison.cells:
            report = cell.report
            improvement = comparison.improvement(cell.policy, cell.capacity, cell.xi_ms) or {}
            is_baseline = cell.policy == comparison.baseline
            table.add_row(
                cell.policy,
                str(cell.capacity),
                f"{cell.xi_ms:g}",
                _ms(report.tel_ms),
                *(_ms(getattr(report, attribute)) for attribute, _ in _PERCENTILE_COLUMNS),
                "" if is_baseline else _percent(improvement.get("p90")),
                "" if is_baseline else _percent(improvement.get("tel_ms")),
            )
        self.console.print(table)

    def print_oracle_report(self, report: OracleCheckReport) -> None:
        """Summary of an oracle certification run."""
        status = (
            self.success("no mismatches")
            if report.is_clean
            else self.error(f"{len(report.mismatches)} mismatches")
        )
        skipped = f"{report.skipped_infeasible} skipped as infeasible"
        if report.skipped_infeasible:
            skipped = self.warning(skipped)
        self.console.print(
            f"\n[bold]Oracle check[/bold] ({report.mode.value}, seed {report.seed}): "
            f"{report.checked}/{report.requested} checked, "
            f"{skipped}, {status}"
        )
        if report.mismatches:
            table = Table(title="Mismatches")
            table.add_column("#", justify="right")
            table.add_column("C", justify="right")
            table.add_column("xi", justify="right")
            table.add_column("Belady TEL", justify="right")
            table.add_column("optimal TEL", justify="right")
            for index, mismatch in enumerate(report.mismatches):
                table.add_row(
                    str(index),
                    str(mismatch.instance.capacity),
                    str(mismatch.instance.xi_blocks),
                    str(mismatch.policy_tel_blocks),
                    str(mismatch.optimal_tel_blocks),
                )
            self.console.print(table)

    def print_monte_carlo(self, report: MonteCarloReport) -> None:
        """Mean TEL per policy and paired differences against the reference."""
        stats = Table(
            title=f"Monte-Carlo TEL ({report.runs} runs, C={report.capacity}, "
            f"xi={report.xi_blocks} blocks)"
        )
        stats.add_column("policy", style="cyan")
        stats.add_column("mean TEL (blocks)", justify="right")
        stats.add_column("stderr", justify="right")
        for row in report.policies:
            stats.add_row(row.policy, f"{row.mean_tel_blocks:,.2f}", f"{row.stderr:.2f}")
        self.console.print(stats)

        if not report.comparisons:
            return
        paired = Table(title=f"Paired differences ({report.reference} - comparator)")
        paired.add_column("comparator", style="cyan")
        paired.add_column("mean", justify="right")
        paired.add_column("95% interval", justify="right")
        paired.add_column("holds", justify="center")
        for comparison in report.comparisons:
            paired.add_row(
                comparison.comparator,
                f"{comparison.mean_difference:+.3f}",
                f"[{comparison.ci_low:+.3f}, {comparison.ci_high:+.3f}]",
                self.success("yes") if comparison.holds else "[red]no[/red]",
            )
        self.console.print(paired)
