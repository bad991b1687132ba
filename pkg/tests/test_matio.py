import io

import numpy as np
import pytest

from mprlab.matio import MatrixFormatError, load_matrix, save_matrix


def round_trip(a, tmp_path):
    p = tmp_path / "m.txt"
    save_matrix(p, a)
    return load_matrix(p)


def test_round_trip_complex_exact(tmp_path):
    rng = np.random.default_rng(3)
    a = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    b = round_trip(a, tmp_path)
    assert b.shape == a.shape
    assert np.array_equal(a, b)


def test_round_trip_real_exact(tmp_path):
    a = np.array([[1.5, -2.25], [0.0, 1e-300]])
    b = round_trip(a, tmp_path)
    assert np.array_equal(b, a.astype(complex))


def test_round_trip_single_entry(tmp_path):
    b = round_trip(np.array([[3 + 4j]]), tmp_path)
    assert b.shape == (1, 1)
    assert b[0, 0] == 3 + 4j


def test_file_object_round_trip():
    buf = io.StringIO()
    a = np.array([[1.0, 2.0]], dtype=complex)
    save_matrix(buf, a)
    buf.seek(0)
    assert np.array_equal(load_matrix(buf), a)


def test_header_is_self_describing(tmp_path):
    p = tmp_path / "m.txt"
    save_matrix(p, np.zeros((2, 3)))
    lines = p.read_text().splitlines()
    assert lines[0] == "mprlab-matrix 1"
    assert lines[1] == "2 3"
    assert len(lines) == 4


def test_rejects_bad_magic(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("not-a-matrix\n1 1\n0 0\n")
    with pytest.raises(MatrixFormatError):
        load_matrix(p)


def test_rejects_bad_dimensions(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("mprlab-matrix 1\n0 2\n\n")
    with pytest.raises(MatrixFormatError):
        load_matrix(p)
    p.write_text("mprlab-matrix 1\ntwo 2\n\n")
    with pytest.raises(MatrixFormatError):
        load_matrix(p)


def test_rejects_wrong_row_count(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("mprlab-matrix 1\n2 1\n1 0\n")
    with pytest.raises(MatrixFormatError):
        load_matrix(p)


def test_rejects_wrong_token_count(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("mprlab-matrix 1\n1 2\n1 0 2\n")
    with pytest.raises(MatrixFormatError):
        load_matrix(p)


def test_rejects_non_numeric_token(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("mprlab-matrix 1\n1 1\nx y\n")
    with pytest.raises(MatrixFormatError):
        load_matrix(p)


def test_rejects_non_matrix_input(tmp_path):
    with pytest.raises(ValueError):
        save_matrix(tmp_path / "m.txt", np.zeros(3))
