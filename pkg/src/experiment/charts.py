"""Accuracy-vs-ε and SSIM-vs-ε line charts as standalone SVG files.

Output is byte-stable for identical input: the SVG id salt is fixed and no date is
embedded. Each file records its axis limits in the SVG description metadata as
``xlim=<lo>,<hi>;ylim=<lo>,<hi>``.
"""

import logging
from pathlib import Path
from typing import List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")  # non-interactive backend
import matplotlib.pyplot as plt  # noqa: E402

from src.attack import HIGH_EPSILONS  # noqa: E402
from src.errors import ReportError  # noqa: E402

logger = logging.getLogger(__name__)

Point = Tuple[float, float, float]  # epsilon, accuracy, mean_ssim

HIGH_REGIME_START = min(HIGH_EPSILONS)
_MARGIN = 0.02


def axis_limits(xs: Sequence[float], ys: Sequence[float]) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """Limits covering [0, max ε] × [0, 1] and every data point, with a small margin."""
    x_hi = max(max(xs), 0.0) or 1.0
    y_lo, y_hi = min(min(ys), 0.0), max(max(ys), 1.0)
    x_pad, y_pad = _MARGIN * x_hi, _MARGIN * (y_hi - y_lo)
    return (-x_pad, x_hi + x_pad), (y_lo - y_pad, y_hi + y_pad)


def plot_curve(xs: Sequence[float], ys: Sequence[float], ylabel: str, title: str, path: Path) -> Path:
    (x_lo, x_hi), (y_lo, y_hi) = axis_limits(xs, ys)
    with plt.rc_context({"svg.hashsalt": "advbench", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        try:
            ax.plot(xs, ys, marker="o", linewidth=1.5)
            ax.set_xlim(x_lo, x_hi)
            ax.set_ylim(y_lo, y_hi)
            ax.set_xlabel("Penetration coefficient ε")
            ax.set_ylabel(ylabel)
            ax.set_title(title)
            ax.grid(True, alpha=0.3)
            fig.tight_layout()
            path.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(
                path,
                format="svg",
                metadata={
                    "Date": None,
                    "Title": title,
                    "Description": f"xlim={x_lo!r},{x_hi!r};ylim={y_lo!r},{y_hi!r}",
                },
            )
        except OSError as e:
            raise ReportError(path, f"could not write chart: {e.strerror or e}") from e
        finally:
            plt.close(fig)
    logger.debug("Wrote chart %s", path)
    return path


def _regimes(points: Sequence[Point]) -> List[Tuple[str, List[Point]]]:
    regimes = [("", list(points))]
    small = [p for p in points if p[0] < HIGH_REGIME_START]
    high = [p for p in points if p[0] == 0.0 or p[0] >= HIGH_REGIME_START]
    if any(p[0] > 0 for p in small) and any(p[0] > 0 for p in high):
        regimes += [("_small", small), ("_high", high)]
    return regimes


def write_charts(points: Sequence[Point], directory: Path) -> List[Path]:
    """Full-grid charts, plus small-ε and high-ε variants when the grid spans both."""
    paths = []
    for suffix, subset in _regimes(points):
        label = {"": "", "_small": " (small ε)", "_high": " (high ε)"}[suffix]
        xs = [p[0] for p in subset]
        paths.append(
            plot_curve(
                xs,
                [p[1] for p in subset],
                "Accuracy",
                f"Accuracy vs. ε{label}",
                directory / f"accuracy_vs_epsilon{suffix}.svg",
            )
        )
        paths.append(
            plot_curve(
                xs,
                [p[2] for p in subset],
                "Mean SSIM",
                f"Structural similarity vs. ε{label}",
                directory / f"ssim_vs_epsilon{suffix}.svg",
            )
        )
    return paths
