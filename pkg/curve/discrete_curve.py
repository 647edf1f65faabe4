import logging

import numpy as np

from _config.app_config import get_config
from curve import stencils
from curve.domain import Domain
from manifold.errors import AdjacencyViolationError, ImmersionViolationError, InvalidArgumentError
from manifold.manifold_spec import ManifoldSpec


def _readonly(array) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


class DiscreteCurve:
    """
    A sampled immersion c: D -> N with its cached arc-length quantities.

    Construct through build_curve, which validates the manifold constraint, the immersion
    condition and node adjacency.
    """

    def __init__(self, manifold: ManifoldSpec, domain: Domain, points: np.ndarray, immersion_tol: float):
        self.manifold = manifold
        self.domain = domain
        self.points = _readonly(points)
        self.immersion_tol = immersion_tol

        space = manifold.space
        self.edge_lengths = _readonly(stencils.edge_lengths(space, self.points, domain.closed))
        self.velocity = _readonly(stencils.velocity(space, self.points, domain.closed, domain.spacing))
        self.speed = _readonly(space.norm(self.points, self.velocity))
        self.ds = _readonly(stencils.arc_weights(space, self.points, domain.closed))
        self.length = float(np.sum(self.ds))

    @property
    def space(self):
        return self.manifold.space

    @property
    def closed(self) -> bool:
        return self.domain.closed

    @property
    def samples(self) -> int:
        return self.domain.samples

    def quadrature_speed(self) -> np.ndarray:
        """
        ds / dtheta, the speed whose trapezoid quadrature gives the length.
        """
        return self.ds / self.domain.quadrature_weights()

    def same_grid(self, other) -> bool:
        return self.manifold == other.manifold and self.domain == other.domain

    def to_dict(self) -> dict:
        return {
            "manifold": self.manifold.to_dict(),
            "domain": self.domain.to_dict(),
            "points": self.points.tolist(),
        }

    def __repr__(self):
        return f"DiscreteCurve({self.manifold.kind}, {self.domain.topology}, N={self.samples}, length={self.length:.6g})"


def check_points(manifold: ManifoldSpec, points: np.ndarray, tol: float = None) -> None:
    """
    Raise InvalidArgumentError naming the first node that violates the manifold constraint.
    """
    if tol is None:
        tol = get_config().get_numeric("point_tolerance")
    residual = manifold.space.point_residual(points)
    bad = np.flatnonzero(~(residual <= tol * max(1.0, manifold.radius)))
    if bad.size:
        raise InvalidArgumentError(
            f"points[{bad[0]}]: off the {manifold.kind} manifold (residual {residual[bad[0]]:.3e})."
        )


def check_immersion(manifold: ManifoldSpec, domain: Domain, points: np.ndarray, immersion_tol: float) -> None:
    """
    Raise when consecutive nodes coincide, the discrete speed degenerates, or neighbours
    are too far apart for logs and transports.
    """
    space = manifold.space
    edges = np.asarray(stencils.edge_lengths(space, points, domain.closed))
    limit = 0.5 * manifold.injectivity_radius
    far = np.flatnonzero(~(edges < limit))
    if far.size:
        raise AdjacencyViolationError(
            f"nodes {far[0]} and {(far[0] + 1) % domain.samples} are {edges[far[0]]:.6f} apart, limit {limit:.6f}",
            node=int(far[0]),
        )
    edge_speed = edges / domain.spacing
    if np.min(edge_speed) <= immersion_tol:
        node = int(np.argmin(edge_speed))
        raise ImmersionViolationError(f"edge speed {edge_speed[node]:.3e} is below {immersion_tol:.1e}", node=node)
    node_speed = np.asarray(stencils.speed(space, points, domain.closed, domain.spacing))
    if not np.min(node_speed) > immersion_tol:
        node = int(np.nanargmin(node_speed)) if np.any(np.isfinite(node_speed)) else 0
        raise ImmersionViolationError(f"speed {node_speed[node]:.3e} is below {immersion_tol:.1e}", node=node)


def build_curve(manifold: ManifoldSpec, domain: Domain, points, immersion_tol: float = None) -> DiscreteCurve:
    """
    Validate sampled points and cache speeds, arc-length weights and length.

    :param manifold: Target manifold.
    :param domain: Parameter grid.
    :param points: Ambient coordinates, shape (N, D).
    :param immersion_tol: Minimal admissible speed, defaults to the configured value.
    :return: The DiscreteCurve.
    """
    if immersion_tol is None:
        immersion_tol = get_config().get_numeric("immersion_tolerance")
    points = np.array(points, dtype=float)
    expected = (domain.samples, manifold.ambient_dim)
    if points.shape != expected:
        raise InvalidArgumentError(f"points: expected shape {expected}, got {points.shape}.")
    if not np.all(np.isfinite(points)):
        raise InvalidArgumentError("points: coordinates must be finite.")
    check_points(manifold, points)
    check_immersion(manifold, domain, points, immersion_tol)
    curve = DiscreteCurve(manifold, domain, points, immersion_tol)
    logging.debug(f"Built {curve}.")
    return curve
