"""Image ingestion, preprocessing, synthetic generation and splitting."""

from .dataset import CANCER, NORMAL, Dataset, LabeledImage
from .manifest import load_manifest, write_manifest
from .pgm import PgmImage, load_pgm, parse_pgm, read_pgm, save_pgm
from .split import split
from .synthetic import synth_dataset
from .transforms import preprocess, resize_bilinear

__all__ = [
    "CANCER",
    "NORMAL",
    "Dataset",
    "LabeledImage",
    "PgmImage",
    "load_manifest",
    "write_manifest",
    "load_pgm",
    "parse_pgm",
    "read_pgm",
    "save_pgm",
    "split",
    "synth_dataset",
    "preprocess",
    "resize_bilinear",
]
