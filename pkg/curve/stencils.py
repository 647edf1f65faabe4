"""
Array kernels for discrete curves.

Points and fields are arrays of shape (..., N, D); the node axis is -2, so a stack of
curves (a path) is processed in one call. Every kernel works on numpy and jax inputs.
"""
from manifold.utils import expand, get_xp


def edge_lengths(space, points, closed):
    """
    Geodesic distances between consecutive nodes; N edges if closed (the last one
    closes the loop), N-1 otherwise.
    """
    xp = get_xp(points)
    if closed:
        return space.dist(points, xp.roll(points, -1, axis=-2))
    return space.dist(points[..., :-1, :], points[..., 1:, :])


def arc_weights(space, points, closed):
    """
    Arc-length quadrature weights ds_i: half of each adjacent edge, so sum(ds) is the
    geodesic polygon length.
    """
    xp = get_xp(points)
    edges = edge_lengths(space, points, closed)
    if closed:
        return 0.5 * (xp.roll(edges, 1, axis=-1) + edges)
    zero = xp.zeros_like(edges[..., :1])
    return 0.5 * (xp.concatenate([zero, edges], axis=-1) + xp.concatenate([edges, zero], axis=-1))


def velocity(space, points, closed, spacing):
    """
    c'(theta_i) from logs of the neighbours: central differences, second-order one-sided
    stencils at open ends.
    """
    xp = get_xp(points)
    if closed:
        forward = space.log(points, xp.roll(points, -1, axis=-2))
        backward = space.log(points, xp.roll(points, 1, axis=-2))
        return (forward - backward) / (2.0 * spacing)
    forward = space.log(points[..., :-1, :], points[..., 1:, :])
    backward = space.log(points[..., 1:, :], points[..., :-1, :])
    interior = (forward[..., 1:, :] - backward[..., :-1, :]) / (2.0 * spacing)
    start = (4.0 * forward[..., :1, :] - space.log(points[..., :1, :], points[..., 2:3, :])) / (2.0 * spacing)
    end = (-4.0 * backward[..., -1:, :] + space.log(points[..., -1:, :], points[..., -3:-2, :])) / (2.0 * spacing)
    return xp.concatenate([start, interior, end], axis=-2)


def speed(space, points, closed, spacing):
    return space.norm(points, velocity(space, points, closed, spacing))


def theta_derivative(space, points, field, closed, spacing):
    """
    Covariant derivative along theta by transported differences
    (P_{i+1->i} h_{i+1} - P_{i-1->i} h_{i-1}) / (2 dtheta); one-sided at open ends.
    """
    xp = get_xp(points, field)
    if closed:
        ahead = space.transport(xp.roll(points, -1, axis=-2), points, xp.roll(field, -1, axis=-2))
        behind = space.transport(xp.roll(points, 1, axis=-2), points, xp.roll(field, 1, axis=-2))
        return (ahead - behind) / (2.0 * spacing)
    # ahead[i] = h_{i+1} at c_i, behind[k] = h_k at c_{k+1}
    ahead = space.transport(points[..., 1:, :], points[..., :-1, :], field[..., 1:, :])
    behind = space.transport(points[..., :-1, :], points[..., 1:, :], field[..., :-1, :])
    interior = (ahead[..., 1:, :] - behind[..., :-1, :]) / (2.0 * spacing)
    two_ahead = space.transport(points[..., 2:3, :], points[..., :1, :], field[..., 2:3, :])
    start = (-3.0 * field[..., :1, :] + 4.0 * ahead[..., :1, :] - two_ahead) / (2.0 * spacing)
    two_behind = space.transport(points[..., -3:-2, :], points[..., -1:, :], field[..., -3:-2, :])
    end = (3.0 * field[..., -1:, :] - 4.0 * behind[..., -1:, :] + two_behind) / (2.0 * spacing)
    return xp.concatenate([start, interior, end], axis=-2)


def derivatives(space, points, field, closed, spacing, order, arclength=True, node_speed=None):
    """
    List [h, D h, ..., D^order h] with D the theta derivative or the arclength derivative
    (theta derivative divided by the speed after every application).
    """
    if arclength and node_speed is None:
        node_speed = speed(space, points, closed, spacing)
    result = [field]
    for _ in range(order):
        step = theta_derivative(space, points, result[-1], closed, spacing)
        if arclength:
            step = step / expand(node_speed)
        result.append(step)
    return result


def scalar_derivative(values, closed, spacing):
    """
    d/dtheta of a scalar sequence (..., N) with the same stencils as theta_derivative.
    """
    xp = get_xp(values)
    if closed:
        return (xp.roll(values, -1, axis=-1) - xp.roll(values, 1, axis=-1)) / (2.0 * spacing)
    interior = (values[..., 2:] - values[..., :-2]) / (2.0 * spacing)
    start = (-3.0 * values[..., :1] + 4.0 * values[..., 1:2] - values[..., 2:3]) / (2.0 * spacing)
    end = (3.0 * values[..., -1:] - 4.0 * values[..., -2:-1] + values[..., -3:-2]) / (2.0 * spacing)
    return xp.concatenate([start, interior, end], axis=-1)
