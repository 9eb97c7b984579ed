"""Tests for semcomm.data.records and semcomm.data.transforms."""

import numpy as np
import pytest
import torch

from semcomm.core.exceptions import RecordFormatError, ShapeError
from semcomm.data.records import RawRecord, encode_record, parse_record, parse_shard, read_shard
from semcomm.data.transforms import ImageBatch, denormalize, normalize, normalize_pixels


def planar_image() -> np.ndarray:
    """Image whose red, green and blue planes hold 0, 128 and 255."""
    pixels = np.zeros((3, 32, 32), dtype=np.uint8)
    pixels[1] = 128
    pixels[2] = 255
    return pixels


class TestParseRecord:
    """Test cases for single-record parsing."""

    def test_label_and_planar_layout(self):
        """Test the first byte is the label and planes follow R, G, B."""
        data = bytes([7]) + bytes(1024) + bytes([128]) * 1024 + bytes([255]) * 1024
        record = parse_record(data)

        assert record.label == 7
        assert record.pixels.shape == (3, 32, 32)
        assert record.pixels[0].max() == 0
        assert (record.pixels[1] == 128).all()
        assert (record.pixels[2] == 255).all()

    def test_row_major_within_plane(self):
        """Test pixel (row 1, col 0) of the red plane is byte 1 + 32."""
        data = bytearray(3073)
        data[1 + 32] = 9
        assert parse_record(bytes(data)).pixels[0, 1, 0] == 9

    @pytest.mark.parametrize("length", [0, 3072, 3074])
    def test_wrong_length(self, length):
        """Test truncated or oversized records are rejected."""
        with pytest.raises(RecordFormatError):
            parse_record(bytes(length))

    def test_label_out_of_range(self):
        """Test labels above 9 are rejected."""
        with pytest.raises(RecordFormatError):
            parse_record(bytes([10]) + bytes(3072))

    def test_encode_matches_layout(self):
        """Test encode_record writes the label byte then the planar pixels."""
        data = encode_record(3, planar_image())

        assert len(data) == 3073
        assert data[0] == 3
        assert parse_record(data).label == 3
        assert np.array_equal(parse_record(data).pixels, planar_image())

    def test_raw_record_validates_shape(self):
        """Test RawRecord rejects non-planar pixel arrays."""
        with pytest.raises(RecordFormatError):
            RawRecord(label=0, pixels=np.zeros((32, 32, 3), dtype=np.uint8))


class TestParseShard:
    """Test cases for whole-shard parsing."""

    def test_parse_shard(self, tmp_path):
        """Test a shard decodes into aligned label and pixel arrays."""
        data = encode_record(1, planar_image()) + encode_record(2, np.zeros((3, 32, 32), np.uint8))
        path = tmp_path / "data_batch_1.bin"
        path.write_bytes(data)

        labels, pixels = read_shard(path)

        assert labels.tolist() == [1, 2]
        assert pixels.shape == (2, 3, 32, 32)
        assert pixels.dtype == np.uint8

    def test_partial_record(self):
        """Test a shard length that is not a multiple of 3073 is rejected."""
        with pytest.raises(RecordFormatError, match="3073"):
            parse_shard(bytes(3073 * 2 + 5))

    def test_bad_label_reports_record(self):
        """Test the offending record index is named."""
        data = bytes(3073) + bytes([12]) + bytes(3072)
        with pytest.raises(RecordFormatError, match="record 1"):
            parse_shard(data)


class TestTransforms:
    """Test cases for normalization."""

    def test_normalize_extremes(self):
        """Test bytes 0 and 255 map to -1 and 1."""
        record = RawRecord(label=0, pixels=planar_image())
        tensor = normalize(record)

        assert tensor.dtype == torch.float32
        assert tensor[0].min().item() == -1.0
        assert tensor[2].max().item() == 1.0

    def test_normalize_formula(self):
        """Test v maps to (v / 255 - 0.5) / 0.5."""
        tensor = normalize_pixels(planar_image())

        assert tensor[1, 0, 0].item() == pytest.approx((128 / 255 - 0.5) / 0.5)

    def test_denormalize_inverts_within_float_error(self):
        """Test denormalize recovers v / 255."""
        pixels = np.random.default_rng(0).integers(0, 256, size=(4, 3, 32, 32), dtype=np.uint8)
        restored = denormalize(normalize_pixels(pixels))

        assert torch.allclose(restored, torch.from_numpy(pixels).float() / 255, atol=1e-6)

    def test_denormalize_clamps(self):
        """Test out-of-range values are clamped to [0, 1]."""
        restored = denormalize(torch.full((1, 3, 32, 32), 3.0))

        assert restored.max().item() == 1.0


class TestImageBatch:
    """Test cases for ImageBatch validation."""

    def test_rejects_wrong_shape(self):
        """Test non-image tensors are rejected."""
        with pytest.raises(ShapeError):
            ImageBatch(data=torch.zeros(2, 3, 16, 16))

    def test_rejects_misaligned_labels(self):
        """Test label count must match batch size."""
        with pytest.raises(ShapeError):
            ImageBatch(data=torch.zeros(2, 3, 32, 32), labels=torch.zeros(3, dtype=torch.long))

    def test_len(self):
        """Test len is the batch size."""
        assert len(ImageBatch(data=torch.zeros(5, 3, 32, 32))) == 5
