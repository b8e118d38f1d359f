from dataclasses import dataclass

from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    TextColumn,
    TimeElapsedColumn,
)
from rich.table import Table

from src.logger import console, logger


@dataclass
class Stats:
    trials_ok: int = 0
    trials_no_reconstruction: int = 0
    trials_error: int = 0

    def count(self, status):
        attribute = f"trials_{status}"
        setattr(self, attribute, getattr(self, attribute) + 1)

    @property
    def total(self):
        return self.trials_ok + self.trials_no_reconstruction + self.trials_error


class InteractionUtils:
    """Rich console output: configuration summaries, result tables and progress"""

    @staticmethod
    def print_config_summary(title, rows):
        logger.info("")
        table = Table(title=title, show_header=False, show_lines=False)
        table.add_column("Key", style="cyan", no_wrap=True)
        table.add_column("Value", style="magenta")
        for key, value in rows:
            table.add_row(key, f"{value}")
        console.print(table, justify="center")

    @staticmethod
    def print_summary_table(summary, title="Benchmark Summary"):
        table = Table(title=title, show_lines=False)
        for column in summary.columns:
            table.add_column(column, style="cyan" if column == "algorithm" else None)
        for row in summary.itertuples(index=False):
            table.add_row(
                *[
                    f"{value:.2f}" if isinstance(value, float) else f"{value}"
                    for value in row
                ]
            )
        console.print(table, justify="center")

    @staticmethod
    def progress():
        return Progress(
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=console,
            transient=True,
        )
