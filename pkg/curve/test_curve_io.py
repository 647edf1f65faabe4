import json

import numpy as np
import pytest

from curve.curve_io import load_curve, load_vector_field, save_curve
from curve.discrete_curve import build_curve
from curve.domain import Domain
from manifold.errors import ImmersionViolationError, InvalidArgumentError
from manifold.manifold_spec import ManifoldSpec


@pytest.fixture
def sphere_curve():
    domain = Domain("closed", 16)
    t = domain.grid
    points = np.stack([np.sin(0.5) * np.cos(t), np.sin(0.5) * np.sin(t), np.cos(0.5) + 0.0 * t], axis=-1)
    return build_curve(ManifoldSpec("sphere", 2), domain, points)


class TestCurveIO:
    def test_save_and_load(self, tmp_path, sphere_curve):
        path = tmp_path / "curve.json"
        save_curve(str(path), sphere_curve)
        loaded = load_curve(str(path))
        assert loaded.same_grid(sphere_curve)
        assert np.array_equal(loaded.points, sphere_curve.points)
        assert path.read_text().endswith("\n")

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "manifold": {"kind": "euclidean", "dim": 2},\n  "domain": oops\n}\n')
        with pytest.raises(InvalidArgumentError, match="line 3"):
            load_curve(str(path))

    def test_missing_field(self, tmp_path):
        path = tmp_path / "curve.json"
        path.write_text(json.dumps({"manifold": {"kind": "euclidean", "dim": 2}, "domain": {"topology": "open", "samples": 8}}))
        with pytest.raises(InvalidArgumentError, match="'points'"):
            load_curve(str(path))

    def test_bad_point_names_index(self, tmp_path):
        points = [[float(i), 0.0] for i in range(8)]
        points[3] = [1.0]
        data = {"manifold": {"kind": "euclidean", "dim": 2}, "domain": {"topology": "open", "samples": 8}, "points": points}
        path = tmp_path / "curve.json"
        path.write_text(json.dumps(data))
        with pytest.raises(InvalidArgumentError, match=r"points\[3\]"):
            load_curve(str(path))

    def test_immersion_error_keeps_type_and_path(self, tmp_path):
        points = [[float(i), 0.0] for i in range(8)]
        points[2] = points[1]
        data = {"manifold": {"kind": "euclidean", "dim": 2}, "domain": {"topology": "open", "samples": 8}, "points": points}
        path = tmp_path / "curve.json"
        path.write_text(json.dumps(data))
        with pytest.raises(ImmersionViolationError, match="curve.json") as excinfo:
            load_curve(str(path))
        assert excinfo.value.node == 1
        assert str(excinfo.value).count("(node 1)") == 1
        assert isinstance(excinfo.value.__cause__, ImmersionViolationError)

    def test_vector_field(self, tmp_path, sphere_curve):
        path = tmp_path / "field.json"
        vectors = sphere_curve.space.proj(sphere_curve.points, np.tile([1.0, 0.0, 0.0], (16, 1)))
        path.write_text(json.dumps({"vectors": vectors.tolist()}))
        field = load_vector_field(str(path), sphere_curve)
        assert np.allclose(field.vectors, vectors)

    def test_non_tangent_vector_field(self, tmp_path, sphere_curve):
        path = tmp_path / "field.json"
        path.write_text(json.dumps({"vectors": sphere_curve.points.tolist()}))
        with pytest.raises(InvalidArgumentError, match=r"vectors\[0\]"):
            load_vector_field(str(path), sphere_curve)
