import json

from curve.discrete_curve import DiscreteCurve, build_curve
from curve.domain import Domain
from curve.vector_field import VectorField
from manifold.errors import ElasticaError, InvalidArgumentError
from manifold.manifold_spec import ManifoldSpec


def read_json(file_path: str):
    """
    Load a JSON document, turning syntax errors into diagnostics with the line number.
    """
    try:
        with open(file_path, "r") as file:
            return json.load(file)
    except json.JSONDecodeError as e:
        raise InvalidArgumentError(f"{file_path}: line {e.lineno}: invalid JSON: {e.msg}")


def write_json(file_path: str, data) -> None:
    with open(file_path, "w") as file:
        json.dump(data, file, indent=2)
        file.write("\n")


def curve_from_dict(data: dict) -> DiscreteCurve:
    """
    :param data: {"manifold": {...}, "domain": {...}, "points": [[...], ...]}
    :return: The validated DiscreteCurve.
    """
    if not isinstance(data, dict):
        raise InvalidArgumentError("curve: expected a JSON object.")
    for key in ("manifold", "domain", "points"):
        if key not in data:
            raise InvalidArgumentError(f"curve: field '{key}' is missing.")
    manifold = ManifoldSpec.from_dict(data["manifold"])
    domain = Domain.from_dict(data["domain"])
    points = data["points"]
    if not isinstance(points, list) or len(points) != domain.samples:
        count = len(points) if isinstance(points, list) else "no"
        raise InvalidArgumentError(f"curve: field 'points' has {count} entries, domain expects {domain.samples}.")
    for i, point in enumerate(points):
        if not isinstance(point, list) or len(point) != manifold.ambient_dim:
            raise InvalidArgumentError(f"curve: points[{i}] must list {manifold.ambient_dim} coordinates.")
    return build_curve(manifold, domain, points)


def load_curve(file_path: str) -> DiscreteCurve:
    try:
        return curve_from_dict(read_json(file_path))
    except ElasticaError as e:
        raise e.prefixed(file_path) from e


def save_curve(file_path: str, curve: DiscreteCurve) -> None:
    write_json(file_path, curve.to_dict())


def load_vector_field(file_path: str, curve: DiscreteCurve) -> VectorField:
    """
    Read {"vectors": [[...], ...]} with one tangent vector per node of curve.
    """
    data = read_json(file_path)
    if not isinstance(data, dict) or "vectors" not in data:
        raise InvalidArgumentError(f"{file_path}: field 'vectors' is missing.")
    try:
        return VectorField(curve, data["vectors"])
    except ElasticaError as e:
        raise InvalidArgumentError(f"{file_path}: {e}") from e
