import math

import numpy as np

from curve.curve_io import curve_from_dict
from curve.discrete_curve import DiscreteCurve, build_curve
from manifold.errors import AdjacencyViolationError, InvalidArgumentError
from manifold.utils import expand, get_xp
from metric.metric_spec import MetricSpec
from metric.sobolev_metric import metric_value


def _check_times(times: np.ndarray, count: int) -> np.ndarray:
    times = np.array(times, dtype=float)
    if times.shape != (count,):
        raise InvalidArgumentError(f"path: expected {count} times, got shape {times.shape}.")
    if not np.all(np.isfinite(times)) or np.any(np.diff(times) <= 0):
        raise InvalidArgumentError("path: times must be finite and strictly increasing.")
    times.setflags(write=False)
    return times


class CurvePath:
    """
    A path t -> c(t) sampled at times t_0 < ... < t_M, all curves on one manifold and grid.
    """

    def __init__(self, curves: list, times=None):
        """
        :param curves: M+1 DiscreteCurves sharing manifold and domain.
        :param times: Time grid, defaults to t_j = j/M.
        """
        curves = list(curves)
        if len(curves) < 2:
            raise InvalidArgumentError(f"path: need at least 2 curves, got {len(curves)}.")
        for j, curve in enumerate(curves[1:], start=1):
            if not curve.same_grid(curves[0]):
                raise InvalidArgumentError(f"path: curve {j} does not share the manifold and domain of curve 0.")
        if times is None:
            times = np.linspace(0.0, 1.0, len(curves))
        self.times = _check_times(times, len(curves))
        self.curves = curves
        self.points = np.stack([curve.points for curve in curves])
        self.points.setflags(write=False)
        check_time_adjacency(curves[0].manifold, self.points)

    @property
    def manifold(self):
        return self.curves[0].manifold

    @property
    def domain(self):
        return self.curves[0].domain

    @property
    def steps(self) -> int:
        return len(self.curves) - 1

    @property
    def start(self) -> DiscreteCurve:
        return self.curves[0]

    @property
    def end(self) -> DiscreteCurve:
        return self.curves[-1]

    @classmethod
    def from_points(cls, template: DiscreteCurve, points, times=None):
        """
        Build a path from a (M+1, N, D) stack, validating every curve.
        """
        curves = [
            build_curve(template.manifold, template.domain, p, immersion_tol=template.immersion_tol) for p in points
        ]
        return cls(curves, times)

    def with_times(self, times):
        return CurvePath(self.curves, times)

    def to_dict(self, metric: MetricSpec = None) -> dict:
        data = {}
        if metric is not None:
            data["metric"] = metric.to_dict()
        data["times"] = self.times.tolist()
        data["curves"] = [curve.to_dict() for curve in self.curves]
        return data

    @classmethod
    def from_dict(cls, data: dict):
        """
        :param data: {"metric": ..., "curves": [curve, ...], "times": [...]?}; the metric is read separately.
        """
        if not isinstance(data, dict) or not isinstance(data.get("curves"), list):
            raise InvalidArgumentError("path: field 'curves' is missing.")
        curves = []
        for j, entry in enumerate(data["curves"]):
            try:
                curves.append(curve_from_dict(entry))
            except InvalidArgumentError as e:
                raise InvalidArgumentError(f"path: curves[{j}]: {e}")
        return cls(curves, data.get("times"))

    def __repr__(self):
        return f"CurvePath(M={self.steps}, {self.curves[0]!r})"


def check_time_adjacency(manifold, points: np.ndarray) -> None:
    """
    Consecutive curves must stay closer than half the injectivity radius node by node.
    """
    limit = 0.5 * manifold.injectivity_radius
    if math.isinf(limit):
        return
    gaps = np.asarray(manifold.space.dist(points[:-1], points[1:]))
    bad = np.argwhere(~(gaps < limit))
    if bad.size:
        j, i = bad[0]
        raise AdjacencyViolationError(
            f"curves {j} and {j + 1} are {gaps[j, i]:.6f} apart, limit {limit:.6f}", node=int(i)
        )


def midpoint_velocities(space, points, times):
    """
    Midpoint rule in time: the velocity log_{c_j}(c_{j+1}) / dt_j transported to the
    geodesic midpoint curve.

    :param points: Path stack, shape (M+1, N, D).
    :param times: Time grid, shape (M+1,).
    :return: (midpoint curves, velocities, dt), shapes (M, N, D), (M, N, D), (M,).
    """
    xp = get_xp(points)
    dt = times[1:] - times[:-1]
    before = points[:-1]
    step = space.log(before, points[1:])
    middle = space.exp(before, 0.5 * step)
    velocity = space.transport(before, middle, step) / expand(expand(xp.asarray(dt)))
    return middle, velocity, dt


def step_metric_values(space, spec: MetricSpec, points, times, closed: bool, spacing: float):
    """
    G_{c_mid}(v, v) on every time step; array kernel, differentiable under jax.
    """
    middle, velocity, dt = midpoint_velocities(space, points, times)
    return metric_value(space, spec, middle, velocity, velocity, closed, spacing), dt


def discrete_path_energy(space, spec: MetricSpec, points, times, closed: bool, spacing: float):
    """
    E = sum_j dt_j G_j by the midpoint rule.
    """
    values, dt = step_metric_values(space, spec, points, times, closed, spacing)
    xp = get_xp(values)
    return xp.sum(dt * values)


def step_energies(spec: MetricSpec, path: CurvePath) -> np.ndarray:
    """
    Per-step metric values G_j of the path velocity.
    """
    values, _ = step_metric_values(
        path.manifold.space, spec, path.points, path.times, path.domain.closed, path.domain.spacing
    )
    return np.asarray(values)


def path_energy(spec: MetricSpec, path: CurvePath) -> tuple:
    """
    :return: (E, L) with E = sum dt G_j and L = sum dt sqrt(G_j); L^2 <= (t_M - t_0) E.
    """
    values = np.maximum(step_energies(spec, path), 0.0)
    dt = np.diff(path.times)
    return float(np.sum(dt * values)), float(np.sum(dt * np.sqrt(values)))


def step_lengths(spec: MetricSpec, path: CurvePath) -> np.ndarray:
    return np.diff(path.times) * np.sqrt(np.maximum(step_energies(spec, path), 0.0))


def constant_speed_times(spec: MetricSpec, path: CurvePath) -> np.ndarray:
    """
    Retime the path so every step covers the same G-length; then L^2 = E exactly on [0, 1].
    Falls back to the uniform grid when a step has (numerically) zero length.
    """
    lengths = step_lengths(spec, path)
    total = float(np.sum(lengths))
    uniform = np.linspace(0.0, 1.0, path.steps + 1)
    if not total > 0 or np.min(lengths) <= 1e-14 * total:
        return uniform
    times = np.concatenate([[0.0], np.cumsum(lengths) / total])
    times[-1] = 1.0
    return times


def nodal_velocities(path: CurvePath) -> np.ndarray:
    """
    c_t at every curve of the path: central differences of time logs, second-order one-sided
    stencils at the path endpoints (first order when M = 1).
    """
    space = path.manifold.space
    points = path.points
    t = path.times
    forward = np.asarray(space.log(points[:-1], points[1:]))
    backward = np.asarray(space.log(points[1:], points[:-1]))
    dt = np.diff(t)
    if path.steps == 1:
        return np.stack([forward[0] / dt[0], -backward[0] / dt[0]])
    interior = (forward[1:] - backward[:-1]) / (t[2:] - t[:-2])[:, None, None]
    h1, h2 = dt[0], dt[1]
    two_ahead = np.asarray(space.log(points[0], points[2]))
    start = (h1 + h2) / (h1 * h2) * forward[0] - h1 / (h2 * (h1 + h2)) * two_ahead
    h1, h2 = dt[-1], dt[-2]
    two_behind = np.asarray(space.log(points[-1], points[-3]))
    end = -((h1 + h2) / (h1 * h2) * backward[-1] - h1 / (h2 * (h1 + h2)) * two_behind)
    return np.concatenate([start[None], interior, end[None]])
