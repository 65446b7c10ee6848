import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rise.dataset_io import (
    LabelParseError,
    MatrixDataError,
    MatrixFormatError,
    MatrixLengthError,
    MultiViewDataset,
    canonicalize_labels,
    read_labels,
    read_matrix,
    write_labels,
    write_matrix,
)


def test_read_rmat_1x1_zero_from_raw_bytes(tmp_path):
    path = tmp_path / "m.rmat"
    path.write_bytes(b"RMAT" + struct.pack("<BQQ", 1, 1, 1) + b"\x00" * 8)
    m = read_matrix(path)
    assert m.shape == (1, 1)
    assert m[0, 0] == 0.0


def test_csv_direct_transcription(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1.5,2.0\n3.0,4.0")
    assert np.array_equal(read_matrix(path), [[1.5, 2.0], [3.0, 4.0]])


def test_roundtrip_random_matrix_bitwise(tmp_path):
    rng = np.random.default_rng(3)
    m = rng.standard_normal((7, 3))
    path = tmp_path / "m.rmat"
    write_matrix(m, path)
    back = read_matrix(path)
    assert back.shape == m.shape
    assert np.array_equal(back.view(np.uint64), m.view(np.uint64))


def test_written_file_size_is_header_plus_payload(tmp_path):
    path = tmp_path / "m.rmat"
    write_matrix(np.array([[1.0, 2.0]]), path)
    # 4 magic + 1 version + 16 dims = 21 header bytes, then 16 payload bytes
    assert path.stat().st_size == 21 + 16


def test_empty_matrix_roundtrips(tmp_path):
    path = tmp_path / "m.rmat"
    write_matrix(np.zeros((0, 0)), path)
    assert read_matrix(path).shape == (0, 0)


def test_identity_roundtrips(tmp_path):
    path = tmp_path / "m.rmat"
    write_matrix(np.eye(3), path)
    assert np.array_equal(read_matrix(path), np.eye(3))


@settings(max_examples=40, deadline=None)
@given(
    arrays(
        np.float64,
        st.tuples(st.integers(1, 6), st.integers(1, 5)),
        elements=st.floats(allow_nan=False, allow_infinity=False, width=64),
    )
)
def test_roundtrip_property(tmp_path_factory, m):
    path = tmp_path_factory.mktemp("rt") / "m.rmat"
    write_matrix(m, path)
    assert np.array_equal(read_matrix(path).view(np.uint64), m.view(np.uint64))


def test_bad_version_rejected(tmp_path):
    path = tmp_path / "m.rmat"
    path.write_bytes(b"RMAT" + struct.pack("<BQQ", 9, 1, 1) + b"\x00" * 8)
    with pytest.raises(MatrixFormatError):
        read_matrix(path)


def test_truncated_header_rejected(tmp_path):
    path = tmp_path / "m.rmat"
    path.write_bytes(b"RMAT\x01\x00")
    with pytest.raises(MatrixFormatError):
        read_matrix(path)


def test_truncated_payload_rejected(tmp_path):
    path = tmp_path / "m.rmat"
    path.write_bytes(b"RMAT" + struct.pack("<BQQ", 1, 2, 2) + b"\x00" * 16)
    with pytest.raises(MatrixLengthError):
        read_matrix(path)


def test_nonfinite_payload_rejected(tmp_path):
    path = tmp_path / "m.rmat"
    payload = struct.pack("<d", float("nan"))
    path.write_bytes(b"RMAT" + struct.pack("<BQQ", 1, 1, 1) + payload)
    with pytest.raises(MatrixDataError):
        read_matrix(path)


def test_nonfinite_csv_rejected(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1.0,nan\n")
    with pytest.raises(MatrixDataError):
        read_matrix(path)


def test_ragged_csv_rejected(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1.0,2.0\n3.0\n")
    with pytest.raises(MatrixFormatError):
        read_matrix(path)


def test_garbage_file_rejected(tmp_path):
    path = tmp_path / "m.bin"
    path.write_bytes(b"\x00\x01\x02 garbage not a matrix")
    with pytest.raises(MatrixFormatError):
        read_matrix(path)


def test_write_rejects_nonfinite():
    with pytest.raises(MatrixDataError):
        write_matrix(np.array([[np.inf]]), "/dev/null")


def test_write_rejects_non_2d():
    with pytest.raises(ValueError):
        write_matrix(np.zeros(3), "/dev/null")


def test_labels_remap_by_first_occurrence(tmp_path):
    path = tmp_path / "labels.txt"
    path.write_text("5\n5\n9\n")
    assert np.array_equal(read_labels(path), [0, 0, 1])


def test_labels_already_canonical(tmp_path):
    path = tmp_path / "labels.txt"
    path.write_text("0\n1\n2\n")
    assert np.array_equal(read_labels(path), [0, 1, 2])


def test_labels_parse_error_reports_line(tmp_path):
    path = tmp_path / "labels.txt"
    path.write_text("a\n")
    with pytest.raises(LabelParseError, match="line 1"):
        read_labels(path)


def test_labels_roundtrip(tmp_path):
    path = tmp_path / "labels.txt"
    write_labels(np.array([3, 3, 0, 2]), path)
    assert np.array_equal(read_labels(path), [0, 0, 1, 2])


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=60))
def test_canonicalize_idempotent(raw):
    labels = np.asarray(raw)
    once = canonicalize_labels(labels)
    assert np.array_equal(canonicalize_labels(once), once)
    assert once.min() == 0
    assert set(np.unique(once)) == set(range(len(np.unique(labels))))


def test_dataset_rejects_uncovered_sample():
    views = [np.zeros((2, 2))]
    with pytest.raises(ValueError, match="no view"):
        MultiViewDataset(views, [np.array([0, 1])], 3)


def test_dataset_rejects_row_mismatch():
    with pytest.raises(ValueError):
        MultiViewDataset([np.zeros((2, 2))], [np.array([0, 1, 2])], 3)


def test_dataset_rejects_unsorted_indices():
    with pytest.raises(ValueError):
        MultiViewDataset([np.zeros((2, 2))], [np.array([1, 0])], 2)
