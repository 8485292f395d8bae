"""CSV manifests tying image files to labels.

One record per line: ``id,path,label``; paths are relative to the manifest's
directory. A header row with those column names is optional.
"""

import csv
import logging
from pathlib import Path
from typing import Union

from src.errors import DataError, ReportError

from .dataset import Dataset, LabeledImage
from .pgm import load_pgm, save_pgm
from .transforms import preprocess

logger = logging.getLogger(__name__)

HEADER = ("id", "path", "label")
MANIFEST_NAME = "manifest.csv"


def load_manifest(path: Union[str, Path], image_size: int, normalize: bool = False) -> Dataset:
    """Import every listed PGM, resized to image_size × image_size."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"manifest not found: {path}")

    items = []
    with open(path, newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or (line_no == 1 and tuple(cell.strip() for cell in row) == HEADER):
                continue
            if len(row) != 3:
                raise DataError(f"{path}:{line_no}: expected 3 fields (id,path,label), got {len(row)}")
            image_id, relative, label = (cell.strip() for cell in row)
            if label not in ("0", "1"):
                raise DataError(f"{path}:{line_no}: label must be 0 or 1, got {label!r}")
            pixels = preprocess(load_pgm(path.parent / relative), image_size, normalize)
            items.append(LabeledImage(pixels=pixels, label=int(label), id=image_id))

    if not items:
        raise DataError(f"manifest lists no images: {path}")
    logger.info("Imported %d images from %s", len(items), path)
    return Dataset(items=tuple(items), source="imported")


def write_manifest(ds: Dataset, directory: Union[str, Path]) -> Path:
    """Write every image as ``<id>.pgm`` plus a manifest listing them."""
    directory = Path(directory)
    manifest = directory / MANIFEST_NAME
    rows = []
    for item in ds:
        filename = f"{item.id}.pgm"
        save_pgm(directory / "images" / filename, item.pixels)
        rows.append((item.id, f"images/{filename}", str(item.label)))
    try:
        with open(manifest, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(HEADER)
            writer.writerows(rows)
    except OSError as e:
        raise ReportError(manifest, f"could not write manifest: {e.strerror or e}") from e
    logger.info("Exported %d images to %s", len(rows), directory)
    return manifest
