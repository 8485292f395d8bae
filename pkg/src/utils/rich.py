"""Rich tables and progress bars for terminal output."""

from contextlib import contextmanager
from typing import Iterator, Mapping, Optional, Sequence

from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from src.nn.training import EpochCallback, EpochStats


def _fmt(value: Optional[float], digits: int = 4) -> str:
    return "–" if value is None else f"{value:.{digits}f}"


def sweep_table(rows: Sequence[Mapping], title: str = "ε sweep") -> Table:
    """Render sweep rows (dicts with epsilon/accuracy/mean_ssim/n_samples, optionally
    per-class accuracy and success rate)."""
    extended = any("accuracy_normal" in row for row in rows)
    table = Table(title=title, header_style="bold bright_blue")
    table.add_column("ε", justify="right")
    table.add_column("accuracy", justify="right")
    table.add_column("mean SSIM", justify="right")
    table.add_column("n", justify="right")
    if extended:
        table.add_column("normal acc.", justify="right")
        table.add_column("cancer acc.", justify="right")
        table.add_column("flip rate", justify="right")

    for row in rows:
        accuracy_style = "red" if row["accuracy"] < rows[0]["accuracy"] else "green"
        cells = [
            f"{row['epsilon']:g}",
            f"[{accuracy_style}]{row['accuracy']:.3f}[/{accuracy_style}]",
            _fmt(row["mean_ssim"]),
            str(row["n_samples"]),
        ]
        if extended:
            cells += [
                _fmt(row.get("accuracy_normal"), 3),
                _fmt(row.get("accuracy_cancer"), 3),
                _fmt(row.get("success_rate"), 3),
            ]
        table.add_row(*cells)
    return table


@contextmanager
def epoch_progress(console: Console, epochs: int) -> Iterator[EpochCallback]:
    """Progress bar advanced by the training loop's per-epoch callback."""
    with Progress(
        TextColumn("[bright_blue]Training"),
        BarColumn(),
        MofNCompleteColumn(),
        TextColumn("{task.fields[status]}"),
        TimeElapsedColumn(),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task("train", total=epochs, status="")

        def on_epoch(stats: EpochStats) -> None:
            progress.update(task, advance=1, status=f"loss {stats.mean_loss:.4f} acc {stats.accuracy:.3f}")

        yield on_epoch
