"""Model checkpoint container.

Layout: 8-byte magic ``ADVBENCH``, little-endian u32 format version, u32 length of a
UTF-8 JSON header, the header itself, then each parameter as raw little-endian
float64 data in header order.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from src.errors import CheckpointError, ReportError

from .layers import layer_from_dict
from .model import Model, infer_shapes

logger = logging.getLogger(__name__)

MAGIC = b"ADVBENCH"
FORMAT_VERSION = 1
_PREAMBLE = struct.Struct("<8sII")


def encode_checkpoint(model: Model) -> bytes:
    """Serialize the architecture and parameters into the checkpoint container."""
    entries, blobs, offset = [], [], 0
    for layer_index, layer_params in enumerate(model.params):
        for name, value in layer_params.items():
            blob = np.ascontiguousarray(value, dtype="<f8").tobytes()
            entries.append({"layer": layer_index, "name": name, "shape": list(value.shape), "offset": offset})
            blobs.append(blob)
            offset += len(blob)
    header = json.dumps(
        {
            "input_shape": list(model.input_shape),
            "layers": [layer.to_dict() for layer in model.layers],
            "params": entries,
        },
        sort_keys=True,
    ).encode("utf-8")
    return _PREAMBLE.pack(MAGIC, FORMAT_VERSION, len(header)) + header + b"".join(blobs)


def decode_checkpoint(data: bytes) -> Model:
    """Rebuild a model, checking every parameter against the shapes its layer expects."""
    if len(data) < _PREAMBLE.size:
        raise CheckpointError("file is too short to be a checkpoint")
    magic, version, header_length = _PREAMBLE.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    body_start = _PREAMBLE.size + header_length
    try:
        header = json.loads(data[_PREAMBLE.size : body_start].decode("utf-8"))
        layers = tuple(layer_from_dict(entry) for entry in header["layers"])
        input_shape = tuple(header["input_shape"])
        shapes = infer_shapes(input_shape, layers)
        entries = [_param_entry(entry, len(layers)) for entry in header["params"]]
    except (ValueError, KeyError, TypeError) as e:
        raise CheckpointError(f"malformed header: {e}") from e

    params = [{} for _ in layers]
    body = data[body_start:]
    for layer_index, name, shape, offset in entries:
        expected = layers[layer_index].param_shapes(shapes[layer_index])
        if name not in expected or tuple(expected[name]) != shape:
            raise CheckpointError(
                f"layer {layer_index} ({layers[layer_index].kind}) has no parameter {name!r} of shape {shape}"
            )
        if name in params[layer_index]:
            raise CheckpointError(f"parameter {name!r} of layer {layer_index} appears twice")
        end = offset + 8 * int(np.prod(shape, dtype=np.int64))
        if end > len(body):
            raise CheckpointError(f"parameter {name} of layer {layer_index} is truncated")
        params[layer_index][name] = np.frombuffer(body[offset:end], dtype="<f8").astype(np.float64).reshape(shape)

    for layer_index, (layer, in_shape) in enumerate(zip(layers, shapes[:-1], strict=True)):
        missing = sorted(set(layer.param_shapes(in_shape)) - set(params[layer_index]))
        if missing:
            raise CheckpointError(f"layer {layer_index} ({layer.kind}) is missing parameters {missing}")
    return Model(input_shape=input_shape, layers=layers, params=tuple(params))


def _param_entry(entry: dict, layer_count: int) -> Tuple[int, str, Tuple[int, ...], int]:
    layer_index, name, offset = entry["layer"], entry["name"], entry["offset"]
    shape = tuple(entry["shape"])
    if not isinstance(layer_index, int) or not 0 <= layer_index < layer_count:
        raise ValueError(f"parameter layer index {layer_index!r} outside 0..{layer_count - 1}")
    if not isinstance(offset, int) or offset < 0:
        raise ValueError(f"parameter offset {offset!r} must be a non-negative integer")
    if not all(isinstance(extent, int) and extent >= 0 for extent in shape):
        raise ValueError(f"parameter shape {list(shape)} must hold non-negative integers")
    return layer_index, str(name), shape, offset


def save_checkpoint(model: Model, path: Union[str, Path]) -> Path:
    """Write the checkpoint, creating parent directories."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(encode_checkpoint(model))
    except OSError as e:
        raise ReportError(path, f"could not write checkpoint: {e.strerror or e}") from e
    logger.info("Saved model checkpoint to %s", path)
    return path


def load_checkpoint(path: Union[str, Path]) -> Model:
    """Read and decode a checkpoint file."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"{path}: could not read checkpoint: {e.strerror or e}") from e
    model = decode_checkpoint(data)
    logger.debug("Loaded checkpoint %s (%d parameters)", path, model.parameter_count)
    return model
