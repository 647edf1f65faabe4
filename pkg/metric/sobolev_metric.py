import numpy as np

from _config.app_config import get_config
from curve import stencils
from curve.discrete_curve import DiscreteCurve
from curve.vector_field import VectorField
from manifold.errors import InvalidArgumentError, UnsupportedOrderError
from manifold.utils import get_xp
from metric.metric_spec import MetricSpec, coefficients

NORMS = ("L2_ds", "L2_dtheta", "Linf")


def metric_value(space, spec: MetricSpec, points, h, k, closed: bool, spacing: float):
    """
    Array kernel for G_c(h, k), vectorized over leading axes of a stack of curves.

    :param space: Manifold backend.
    :param spec: The metric.
    :param points: Curves, shape (..., N, D).
    :param h: Fields along the curves, same shape.
    :param k: Second fields; pass h itself to reuse its derivatives.
    :return: G values, shape (...).
    """
    xp = get_xp(points, h, k)
    ds = stencils.arc_weights(space, points, closed)
    length = xp.sum(ds, axis=-1)
    node_speed = stencils.speed(space, points, closed, spacing)
    dh = stencils.derivatives(space, points, h, closed, spacing, spec.order, True, node_speed)
    dk = dh if k is h else stencils.derivatives(space, points, k, closed, spacing, spec.order, True, node_speed)
    total = 0.0
    for i, a in enumerate(spec.coefficient_values(length)):
        if isinstance(a, float) and a == 0.0:
            continue
        total = total + a * xp.sum(ds * space.inner(points, dh[i], dk[i]), axis=-1)
    return total


def _check_fields(curve: DiscreteCurve, *fields: VectorField) -> None:
    for field in fields:
        field.require_on(curve)


def _check_order(order: int) -> None:
    max_order = get_config().get_numeric("max_derivative_order")
    if order > max_order:
        raise UnsupportedOrderError(f"metric order {order} exceeds the configured maximum {max_order}.")


def inner_G(spec: MetricSpec, curve: DiscreteCurve, h: VectorField, k: VectorField) -> float:
    """
    G_c(h, k) = sum_i a_i(l_c) int g(D_s^i h, D_s^i k) ds.
    """
    _check_order(spec.order)
    _check_fields(curve, h, k)
    coefficients(spec, curve.length)
    return float(
        metric_value(curve.space, spec, curve.points, h.vectors, k.vectors, curve.closed, curve.domain.spacing)
    )


def inner_H(curve: DiscreteCurve, h: VectorField, k: VectorField, order: int = None) -> float:
    """
    Parametrization dependent metric int g(h,k) + g(D_theta^n h, D_theta^n k) dtheta.

    :param order: n, defaults to the configured h_metric_order.
    """
    if order is None:
        order = get_config().get_numeric("h_metric_order")
    if int(order) != order or order < 1:
        raise InvalidArgumentError(f"H-metric order must be an integer >= 1, got {order}.")
    _check_order(order)
    _check_fields(curve, h, k)
    space = curve.space
    spacing = curve.domain.spacing
    dh = stencils.derivatives(space, curve.points, h.vectors, curve.closed, spacing, int(order), arclength=False)
    dk = stencils.derivatives(space, curve.points, k.vectors, curve.closed, spacing, int(order), arclength=False)
    integrand = space.inner(curve.points, h.vectors, k.vectors) + space.inner(curve.points, dh[-1], dk[-1])
    return float(np.sum(curve.domain.quadrature_weights() * integrand))


def field_norm(curve: DiscreteCurve, h: VectorField, which: str = "L2_ds") -> float:
    """
    :param which: "L2_ds", "L2_dtheta" or "Linf".
    """
    if which not in NORMS:
        raise InvalidArgumentError(f"norm must be one of {NORMS}, got '{which}'.")
    _check_fields(curve, h)
    pointwise = h.pointwise_norm()
    if which == "Linf":
        return float(np.max(pointwise))
    weights = curve.ds if which == "L2_ds" else curve.domain.quadrature_weights()
    return float(np.sqrt(np.sum(weights * pointwise ** 2)))
