import json

import numpy as np
import pytest

from hypokit import load_matrix, matrix_from_dict, matrix_to_dict, save_matrix
from hypokit.errors import MatrixFormatError


class TestParse:
    def test_bare_reals(self):
        a = matrix_from_dict({"rows": 2, "cols": 2, "entries": [1, 2, 3, 4]})
        assert np.array_equal(a, np.array([[1, 2], [3, 4]], dtype=complex))

    def test_pairs(self):
        a = matrix_from_dict({"rows": 1, "cols": 2, "entries": [[1, -1], [0, 2]]})
        assert a[0, 0] == 1 - 1j and a[0, 1] == 2j

    def test_mixed(self):
        a = matrix_from_dict({"rows": 1, "cols": 2, "entries": [5, [0, 1]]})
        assert a[0, 0] == 5 and a[0, 1] == 1j

    def test_wrong_count(self):
        with pytest.raises(MatrixFormatError):
            matrix_from_dict({"rows": 2, "cols": 2, "entries": [1, 2, 3]})

    def test_bad_entry(self):
        with pytest.raises(MatrixFormatError):
            matrix_from_dict({"rows": 1, "cols": 1, "entries": ["x"]})
        with pytest.raises(MatrixFormatError):
            matrix_from_dict({"rows": 1, "cols": 1, "entries": [[1, 2, 3]]})

    def test_nonfinite_rejected(self):
        with pytest.raises(MatrixFormatError):
            matrix_from_dict({"rows": 1, "cols": 1, "entries": [float("nan")]})

    def test_missing_fields(self):
        with pytest.raises(MatrixFormatError):
            matrix_from_dict({"rows": 2, "entries": [1, 2]})
        with pytest.raises(MatrixFormatError):
            matrix_from_dict([1, 2, 3])


class TestSerialize:
    def test_always_pairs(self):
        body = matrix_to_dict(np.array([[1.5, 2.0]]))
        assert body["entries"] == [[1.5, 0.0], [2.0, 0.0]]

    def test_roundtrip(self, tmp_path):
        a = np.array([[0.0, 0.5 + 1.0j], [-0.5, 1.0]])
        path = tmp_path / "m.json"
        save_matrix(path, a)
        parsed = json.loads(path.read_text())
        assert parsed["rows"] == 2 and parsed["cols"] == 2
        assert np.array_equal(load_matrix(path), a)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MatrixFormatError):
            load_matrix(tmp_path / "nope.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(MatrixFormatError):
            load_matrix(path)
