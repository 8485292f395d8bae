import json
import struct

import numpy as np
import pytest

from src.errors import CheckpointError
from src.nn import TrainConfig, build_model, default_layers, load_checkpoint, predict, save_checkpoint, train
from src.nn.checkpoint import FORMAT_VERSION, MAGIC, decode_checkpoint, encode_checkpoint
from src.tensor import SeededRng


@pytest.fixture(scope="module")
def trained_model(small_dataset):
    shape = small_dataset.image_shape
    model = build_model(shape, default_layers(shape), SeededRng(8))
    trained, _ = train(model, small_dataset, TrainConfig(epochs=2, seed=8))
    return trained


class TestCheckpoint:
    def test_round_trip_is_bit_exact(self, trained_model, small_dataset, tmp_path):
        path = save_checkpoint(trained_model, tmp_path / "model.ckpt")
        loaded = load_checkpoint(path)

        assert loaded.input_shape == trained_model.input_shape
        assert loaded.layers == trained_model.layers
        for original, restored in zip(trained_model.params, loaded.params, strict=True):
            assert original.keys() == restored.keys()
            for name in original:
                assert original[name].tobytes() == restored[name].tobytes()
        for item in small_dataset:
            assert predict(loaded, item.pixels) == predict(trained_model, item.pixels)

    def test_encoding_is_stable(self, trained_model):
        data = encode_checkpoint(trained_model)
        assert encode_checkpoint(decode_checkpoint(data)) == data

    def test_preamble(self, trained_model):
        data = encode_checkpoint(trained_model)
        magic, version, _ = struct.unpack_from("<8sII", data)
        assert magic == MAGIC
        assert version == FORMAT_VERSION

    def test_bad_magic(self, trained_model):
        data = encode_checkpoint(trained_model)
        with pytest.raises(CheckpointError, match="magic"):
            decode_checkpoint(b"NOTMODEL" + data[8:])

    def test_unsupported_version(self, trained_model):
        data = bytearray(encode_checkpoint(trained_model))
        struct.pack_into("<I", data, 8, FORMAT_VERSION + 1)
        with pytest.raises(CheckpointError, match="version"):
            decode_checkpoint(bytes(data))

    def test_truncated_blob(self, trained_model):
        data = encode_checkpoint(trained_model)
        with pytest.raises(CheckpointError, match="truncated"):
            decode_checkpoint(data[:-8])

    def test_too_short(self):
        with pytest.raises(CheckpointError):
            decode_checkpoint(b"ADV")

    def test_missing_file(self, tmp_path):
        with pytest.raises(CheckpointError):
            load_checkpoint(tmp_path / "absent.ckpt")

    def test_parameters_are_little_endian_doubles(self, trained_model):
        data = encode_checkpoint(trained_model)
        header_length = struct.unpack_from("<I", data, 12)[0]
        body = data[16 + header_length :]
        first = trained_model.params[0]["weight"]
        np.testing.assert_array_equal(np.frombuffer(body[: 8 * first.size], dtype="<f8").reshape(first.shape), first)


def rewrite_header(data: bytes, edit) -> bytes:
    """Re-encode a checkpoint after ``edit`` mutates its JSON header."""
    header_length = struct.unpack_from("<I", data, 12)[0]
    header = json.loads(data[16 : 16 + header_length])
    edit(header)
    encoded = json.dumps(header, sort_keys=True).encode("utf-8")
    return data[:12] + struct.pack("<I", len(encoded)) + encoded + data[16 + header_length :]


class TestForgedHeader:
    def test_wrong_parameter_shape(self, trained_model):
        def shrink_kernel(header):
            header["params"][0]["shape"] = [6, 1, 2, 2]

        with pytest.raises(CheckpointError, match="shape"):
            decode_checkpoint(rewrite_header(encode_checkpoint(trained_model), shrink_kernel))

    def test_missing_parameter(self, trained_model):
        def drop_last(header):
            header["params"].pop()

        with pytest.raises(CheckpointError, match="missing"):
            decode_checkpoint(rewrite_header(encode_checkpoint(trained_model), drop_last))

    def test_layer_index_out_of_range(self, trained_model):
        def bad_layer(header):
            header["params"][0]["layer"] = 99

        with pytest.raises(CheckpointError, match="layer index"):
            decode_checkpoint(rewrite_header(encode_checkpoint(trained_model), bad_layer))

    def test_parameter_on_parameterless_layer(self, trained_model):
        def move_to_relu(header):
            header["params"][0]["layer"] = 1

        with pytest.raises(CheckpointError):
            decode_checkpoint(rewrite_header(encode_checkpoint(trained_model), move_to_relu))

    def test_negative_offset(self, trained_model):
        def bad_offset(header):
            header["params"][0]["offset"] = -8

        with pytest.raises(CheckpointError, match="offset"):
            decode_checkpoint(rewrite_header(encode_checkpoint(trained_model), bad_offset))

    def test_unchanged_header_still_loads(self, trained_model):
        data = encode_checkpoint(trained_model)
        assert rewrite_header(data, lambda header: None) == data
