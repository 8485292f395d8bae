"""Report files: sweep and detail CSVs, JSON summary, charts and adversarial dumps."""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

from src.attack import SweepRecord
from src.data import Dataset, save_pgm
from src.errors import ReportError
from src.nn import EpochStats

from .charts import write_charts
from .panels import write_panels

logger = logging.getLogger(__name__)

SWEEP_HEADER = ("epsilon", "accuracy", "mean_ssim", "n_samples")
DETAIL_HEADER = ("id", "epsilon", "true_label", "clean_label", "adv_label", "flipped", "ssim")

SWEEP_CSV = "sweep.csv"
DETAIL_CSV = "detail.csv"
REPORT_JSON = "report.json"


@dataclass(frozen=True)
class DetailRow:
    id: str
    epsilon: float
    true_label: int
    clean_label: int
    adv_label: int
    flipped: bool
    ssim: float


@dataclass
class ExperimentReport:
    records: List[SweepRecord]
    clean_accuracy: float
    history: List[EpochStats]
    config: Dict[str, Any]
    version: str
    timings: Dict[str, float] = field(default_factory=dict)
    stealth: Optional[SweepRecord] = None
    test_set: Optional[Dataset] = None

    @property
    def detail_rows(self) -> List[DetailRow]:
        return [
            DetailRow(o.id, o.epsilon, o.true_label, o.clean_label, o.adv_label, o.flipped, o.ssim)
            for record in self.records
            for o in record.outcomes
        ]


def format_number(value: Union[int, float]) -> str:
    """Six significant digits, '.' decimal separator, independent of locale."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([cell if isinstance(cell, str) else format_number(cell) for cell in row])
    return buffer.getvalue()


def _write_text(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as e:
        raise ReportError(path, f"could not write report file: {e.strerror or e}") from e
    logger.debug("Wrote %s", path)
    return path


def sweep_csv(records: Sequence[SweepRecord]) -> str:
    return _csv_text(SWEEP_HEADER, ((r.epsilon, r.accuracy, r.mean_ssim, r.n_samples) for r in records))


def detail_csv(rows: Sequence[DetailRow]) -> str:
    return _csv_text(
        DETAIL_HEADER,
        ((r.id, r.epsilon, r.true_label, r.clean_label, r.adv_label, r.flipped, r.ssim) for r in rows),
    )


def read_sweep_csv(path: Union[str, Path]) -> List[Dict[str, float]]:
    """Parse a sweep.csv back into rows of floats (n_samples stays an int)."""
    path = Path(path)
    try:
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            if tuple(reader.fieldnames or ()) != SWEEP_HEADER:
                raise ReportError(path, f"unexpected header {reader.fieldnames}")
            return [
                {
                    "epsilon": float(row["epsilon"]),
                    "accuracy": float(row["accuracy"]),
                    "mean_ssim": float(row["mean_ssim"]),
                    "n_samples": int(row["n_samples"]),
                }
                for row in reader
            ]
    except OSError as e:
        raise ReportError(path, f"could not read sweep table: {e.strerror or e}") from e
    except (KeyError, ValueError) as e:
        raise ReportError(path, f"malformed sweep table: {e}") from e


def _record_summary(record: SweepRecord) -> Dict[str, Any]:
    return {
        "epsilon": record.epsilon,
        "accuracy": record.accuracy,
        "mean_ssim": record.mean_ssim,
        "n_samples": record.n_samples,
        "accuracy_normal": record.accuracy_normal,
        "accuracy_cancer": record.accuracy_cancer,
        "success_rate": record.success_rate,
        "flipped": sum(record.flipped),
        "max_linf": max(o.linf for o in record.outcomes),
    }


def report_json(report: ExperimentReport) -> str:
    summary = {
        "version": report.version,
        "clean_accuracy": report.clean_accuracy,
        "sweep": [_record_summary(r) for r in report.records],
        "stealth_budget": _record_summary(report.stealth) if report.stealth else None,
        "history": [{"epoch": h.epoch, "mean_loss": h.mean_loss, "accuracy": h.accuracy} for h in report.history],
        "config": report.config,
        "timings": report.timings,
    }
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"


def dump_adversarial_images(records: Sequence[SweepRecord], directory: Path) -> List[Path]:
    paths = []
    for record in records:
        for outcome in record.outcomes:
            if outcome.perturbed is None:
                continue
            path = directory / f"eps_{format_number(record.epsilon)}" / f"{outcome.id}.pgm"
            paths.append(save_pgm(path, outcome.perturbed))
    return paths


def emit_report(report: ExperimentReport, formats: Iterable[str], directory: Union[str, Path]) -> List[Path]:
    """Write the requested report formats into ``directory``; returns the written paths."""
    directory = Path(directory)
    formats = set(formats)
    written: List[Path] = []

    if "csv" in formats:
        written.append(_write_text(directory / SWEEP_CSV, sweep_csv(report.records)))
        written.append(_write_text(directory / DETAIL_CSV, detail_csv(report.detail_rows)))
    if "json" in formats:
        written.append(_write_text(directory / REPORT_JSON, report_json(report)))
    if "svg" in formats:
        points = [(r.epsilon, r.accuracy, r.mean_ssim) for r in report.records]
        written.extend(write_charts(points, directory))
    if "pgm" in formats:
        written.extend(dump_adversarial_images(report.records, directory / "adversarial"))
    if "png" in formats and report.test_set is not None:
        written.extend(write_panels(report.records, report.test_set, directory / "panels"))

    logger.info("Wrote %d report files to %s", len(written), directory)
    return written
