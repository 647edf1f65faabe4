import logging

import numpy as np

from _config.app_config import get_config
from curve import stencils
from curve.discrete_curve import DiscreteCurve, build_curve
from curve.vector_field import VectorField
from manifold.errors import InvalidArgumentError

VARIABLES = ("theta", "arclength")


def unit_tangent(curve: DiscreteCurve) -> VectorField:
    """
    v_i = c'_i / |c'_i|.
    """
    return VectorField(curve, curve.velocity / curve.speed[:, None], check=False)


def cov_deriv(curve: DiscreteCurve, field: VectorField, variable: str = "arclength", order: int = 1) -> VectorField:
    """
    Discrete covariant derivative of order k along theta or along arc length.

    :param curve: The curve.
    :param field: A field on the curve.
    :param variable: "theta" or "arclength".
    :param order: k >= 1, at most the configured max derivative order.
    :return: The field nabla^k h.
    """
    if variable not in VARIABLES:
        raise InvalidArgumentError(f"variable must be one of {VARIABLES}, got '{variable}'.")
    max_order = get_config().get_numeric("max_derivative_order")
    if int(order) != order or order < 1 or order > max_order:
        raise InvalidArgumentError(f"derivative order must be an integer in [1, {max_order}], got {order}.")
    field.require_on(curve)
    series = stencils.derivatives(
        curve.space,
        curve.points,
        field.vectors,
        curve.closed,
        curve.domain.spacing,
        int(order),
        arclength=variable == "arclength",
        node_speed=curve.speed,
    )
    return VectorField(curve, np.asarray(series[-1]), check=False)


def arclength_positions(curve: DiscreteCurve) -> np.ndarray:
    """
    Cumulative geodesic chord length at every node.
    """
    return np.concatenate([[0.0], np.cumsum(curve.edge_lengths)])


def reparametrize_arclength(curve: DiscreteCurve) -> DiscreteCurve:
    """
    Resample the curve at equal arc-length steps, interpolating along the geodesic edges.
    Node 0 stays fixed; an open curve keeps both endpoints.
    """
    space = curve.space
    positions = arclength_positions(curve)
    total = positions[-1]
    n = curve.samples
    if curve.closed:
        targets = total * np.arange(n) / n
    else:
        targets = total * np.arange(n) / (n - 1)

    closed_points = np.concatenate([curve.points, curve.points[:1]]) if curve.closed else curve.points
    segment = np.clip(np.searchsorted(positions, targets, side="right") - 1, 0, len(positions) - 2)
    fraction = (targets - positions[segment]) / curve.edge_lengths[segment]
    start = closed_points[segment]
    stop = closed_points[segment + 1]
    points = np.asarray(space.exp(start, fraction[:, None] * space.log(start, stop)))
    points[0] = curve.points[0]
    if not curve.closed:
        points[-1] = curve.points[-1]
    logging.debug(f"Reparametrized {curve} by arc length.")
    return build_curve(curve.manifold, curve.domain, points, immersion_tol=curve.immersion_tol)
