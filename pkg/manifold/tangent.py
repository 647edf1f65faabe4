from dataclasses import dataclass

import numpy as np

from _config.app_config import get_config
from manifold.errors import InvalidArgumentError
from manifold.manifold_spec import ManifoldSpec


@dataclass(frozen=True, eq=False)
class Point:
    """
    A point of N in ambient coordinates.
    """

    coords: np.ndarray

    def to_list(self) -> list:
        return [float(x) for x in self.coords]


@dataclass(frozen=True, eq=False)
class Tangent:
    """
    A tangent vector vec in T_base N, both in ambient coordinates.
    """

    base: Point
    vec: np.ndarray


def _as_vector(values, length: int, what: str) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.shape != (length,):
        raise InvalidArgumentError(f"{what}: expected {length} ambient coordinates, got shape {array.shape}.")
    if not np.all(np.isfinite(array)):
        raise InvalidArgumentError(f"{what}: coordinates must be finite.")
    array.setflags(write=False)
    return array


def make_point(manifold: ManifoldSpec, coords, tol: float = None) -> Point:
    """
    Validate ambient coordinates against the manifold constraint.

    :param manifold: Target manifold.
    :param coords: Ambient coordinates.
    :param tol: Constraint tolerance, defaults to the configured point tolerance.
    :return: The Point.
    """
    if tol is None:
        tol = get_config().get_numeric("point_tolerance")
    array = _as_vector(coords, manifold.ambient_dim, "point")
    residual = float(manifold.space.point_residual(array))
    if residual > tol * max(1.0, manifold.radius):
        raise InvalidArgumentError(f"point {array.tolist()} is off the {manifold.kind} manifold (residual {residual:.3e}).")
    return Point(array)


def make_tangent(manifold: ManifoldSpec, base: Point, vec, tol: float = None) -> Tangent:
    """
    Validate an ambient vector against the tangency constraint at base.
    """
    if tol is None:
        tol = get_config().get_numeric("tangent_tolerance")
    array = _as_vector(vec, manifold.ambient_dim, "tangent")
    residual = float(manifold.space.tangent_residual(base.coords, array))
    if residual > tol:
        raise InvalidArgumentError(f"vector {array.tolist()} is not tangent at {base.to_list()} (residual {residual:.3e}).")
    return Tangent(base, array)
