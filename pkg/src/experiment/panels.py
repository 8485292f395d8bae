"""PNG comparison panels of adversarial images, one per class.

Rows are test images, columns are ε values. Each tile is framed red when the attack
flipped a correct prediction and green otherwise, with the ε and the adversarial
prediction printed above it.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

import cv2
import numpy as np

from src.attack import SampleOutcome, SweepRecord
from src.data import Dataset
from src.errors import ReportError
from src.nn import CLASS_NAMES

logger = logging.getLogger(__name__)

RGB = Tuple[int, int, int]

FLIPPED: RGB = (220, 30, 30)
HELD: RGB = (30, 170, 60)
BACKGROUND: RGB = (255, 255, 255)
TEXT: RGB = (0, 0, 0)


def as_bgr(rgb: RGB) -> RGB:
    return rgb[::-1]


@dataclass
class PanelRenderer:
    tile_size: int = 128
    border: int = 3
    header: int = 22
    text_scale: float = 0.4
    text_thickness: int = 1
    max_rows: int = 4

    def __post_init__(self):
        self.font = cv2.FONT_HERSHEY_SIMPLEX

    def tile(self, pixels: np.ndarray, caption: str, color: RGB) -> np.ndarray:
        gray = np.rint(np.clip(pixels[0], 0.0, 1.0) * 255).astype(np.uint8)
        scaled = cv2.resize(gray, (self.tile_size, self.tile_size), interpolation=cv2.INTER_NEAREST)
        framed = cv2.copyMakeBorder(
            cv2.cvtColor(scaled, cv2.COLOR_GRAY2BGR),
            self.border,
            self.border,
            self.border,
            self.border,
            cv2.BORDER_CONSTANT,
            value=as_bgr(color),
        )
        canvas = np.full((self.header, framed.shape[1], 3), as_bgr(BACKGROUND), dtype=np.uint8)
        cv2.putText(
            img=canvas,
            text=caption,
            org=(2, self.header - 7),
            fontFace=self.font,
            fontScale=self.text_scale,
            color=as_bgr(TEXT),
            thickness=self.text_thickness,
            lineType=cv2.LINE_AA,
        )
        return cv2.vconcat([canvas, framed])

    def render(self, rows: Sequence[Sequence[Tuple[np.ndarray, str, RGB]]]) -> np.ndarray:
        return cv2.vconcat([cv2.hconcat([self.tile(*cell) for cell in row]) for row in rows])


def _cell(outcome: SampleOutcome) -> Tuple[np.ndarray, str, RGB]:
    caption = f"eps={outcome.epsilon:g} {CLASS_NAMES[outcome.adv_label]}"
    return outcome.perturbed, caption, FLIPPED if outcome.flipped else HELD


def write_panels(records: Sequence[SweepRecord], test_set: Dataset, directory: Path) -> List[Path]:
    """One PNG per class; skipped when the sweep did not keep the perturbed images."""
    renderer = PanelRenderer()
    paths = []
    for cls, name in enumerate(CLASS_NAMES):
        ids = [item.id for item in test_set if item.label == cls][: renderer.max_rows]
        if not ids:
            continue
        rows = []
        for image_id in ids:
            outcomes = [next(o for o in r.outcomes if o.id == image_id) for r in records]
            if any(o.perturbed is None for o in outcomes):
                return paths
            rows.append([_cell(o) for o in outcomes])

        path = directory / f"adversarial_{name}.png"
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            if not cv2.imwrite(str(path), renderer.render(rows)):
                raise ReportError(path, "OpenCV could not encode the panel")
        except OSError as e:
            raise ReportError(path, f"could not write panel: {e.strerror or e}") from e
        logger.debug("Wrote panel %s", path)
        paths.append(path)
    return paths
