"""
Minimizing geodesics between two curves by direct minimization of the discrete path energy.

The unknowns are the interior curves c_1..c_{M-1} of a path with fixed ends. The energy is
differentiated with jax, the ambient gradient is turned into a Riemannian one node by node,
and a preconditioned nonlinear conjugate gradient method moves the nodes with exp.
"""
import logging
import math
from dataclasses import asdict, dataclass, field, fields

import jax
import jax.numpy as jnp
import numpy as np

from _config.app_config import get_config
from curve import stencils
from curve.discrete_curve import DiscreteCurve, build_curve
from manifold.errors import AdjacencyViolationError, ElasticaError, InitFailureError, InvalidArgumentError
from metric.curve_path import (
    CurvePath,
    check_time_adjacency,
    constant_speed_times,
    discrete_path_energy,
    path_energy,
)
from metric.metric_spec import MetricSpec, coefficients

INIT_MODES = ("pointwise_geodesic", "straight_embedding")

_CONFIGURED = ("time_steps", "max_iterations", "gtol", "ftol", "armijo", "backtrack", "initial_step", "max_backtracks")


@dataclass(frozen=True)
class BvpOptions:
    """
    Optimizer settings; entries left as None are read from the optimizer section of the config.
    """

    time_steps: int = None
    max_iterations: int = None
    gtol: float = None
    ftol: float = None
    armijo: float = None
    backtrack: float = None
    initial_step: float = None
    max_backtracks: int = None
    init: str = "pointwise_geodesic"
    init_noise: float = 0.0
    seed: int = 0
    conjugate: bool = True

    def __post_init__(self):
        defaults = get_config().get_optimizer_config()
        for key in _CONFIGURED:
            if getattr(self, key) is None:
                object.__setattr__(self, key, defaults[key])
        if int(self.time_steps) != self.time_steps or self.time_steps < 2:
            raise InvalidArgumentError(f"time_steps must be an integer >= 2, got {self.time_steps}.")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 0:
            raise InvalidArgumentError(f"max_iterations must be a nonnegative integer, got {self.max_iterations}.")
        if not self.gtol > 0:
            raise InvalidArgumentError(f"gtol must be positive, got {self.gtol}.")
        if not self.ftol >= 0:
            raise InvalidArgumentError(f"ftol must be nonnegative, got {self.ftol}.")
        if not 0 < self.armijo < 1 or not 0 < self.backtrack < 1:
            raise InvalidArgumentError("armijo and backtrack must lie in (0, 1).")
        if not self.initial_step > 0:
            raise InvalidArgumentError(f"initial_step must be positive, got {self.initial_step}.")
        if self.init not in INIT_MODES:
            raise InvalidArgumentError(f"Unknown initialization '{self.init}', expected one of {INIT_MODES}.")
        if not self.init_noise >= 0:
            raise InvalidArgumentError(f"init_noise must be nonnegative, got {self.init_noise}.")
        object.__setattr__(self, "time_steps", int(self.time_steps))
        object.__setattr__(self, "max_iterations", int(self.max_iterations))
        object.__setattr__(self, "max_backtracks", int(self.max_backtracks))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidArgumentError(f"Unknown optimizer options {unknown}.")
        return cls(**data)


@dataclass
class GeodesicResult:
    path: CurvePath
    energy: float
    length: float
    iterations: int
    converged: bool
    gradient_norm: float
    initial_energy: float
    history: list = field(default_factory=list, repr=False)

    @property
    def distance(self) -> float:
        """
        sqrt(E) of the constant speed path.
        """
        return math.sqrt(max(self.energy, 0.0))

    def to_dict(self) -> dict:
        return {
            "distance": self.distance,
            "energy": self.energy,
            "length": self.length,
            "iterations": self.iterations,
            "converged": self.converged,
            "gradient_norm": self.gradient_norm,
            "initial_energy": self.initial_energy,
        }


def _interior_energy(interior, ends, times, manifold, spec, closed, spacing):
    points = jnp.concatenate([ends[:1], interior, ends[1:]], axis=0)
    return discrete_path_energy(manifold.space, spec, points, times, closed, spacing)


# manifold, spec, closed and spacing are hashable and select the compiled kernel
_energy = jax.jit(_interior_energy, static_argnums=(3, 4, 5, 6))
_energy_and_gradient = jax.jit(jax.value_and_grad(_interior_energy), static_argnums=(3, 4, 5, 6))


def _check_ends(c0: DiscreteCurve, c1: DiscreteCurve) -> None:
    if not c0.same_grid(c1):
        raise InvalidArgumentError("c0 and c1 must share manifold, domain and resolution.")


def _smooth_noise(space, domain, points, times, amplitude, seed):
    """
    Low-mode Fourier displacement of every curve, vanishing at t = 0 and t = 1.
    """
    rng = np.random.default_rng(seed)
    modes = np.arange(1, 4)
    angles = np.outer(domain.grid, modes)
    coeffs = rng.standard_normal((len(times), 2, len(modes), points.shape[-1]))
    ambient = np.einsum("nk,jkd->jnd", np.cos(angles), coeffs[:, 0]) + np.einsum(
        "nk,jkd->jnd", np.sin(angles), coeffs[:, 1]
    )
    envelope = amplitude * np.sin(np.pi * times) / len(modes)
    displacement = np.asarray(space.proj(points, envelope[:, None, None] * ambient))
    return np.array(space.exp(points, displacement))


def init_path(
    c0: DiscreteCurve,
    c1: DiscreteCurve,
    steps: int,
    mode: str = "pointwise_geodesic",
    noise: float = 0.0,
    seed: int = 0,
) -> CurvePath:
    """
    Initial path between two curves on the uniform time grid.

    :param c0: Start curve.
    :param c1: End curve on the same grid.
    :param steps: Number of time steps M.
    :param mode: "pointwise_geodesic" follows node-wise geodesics, "straight_embedding" projects
        the ambient affine homotopy onto N.
    :param noise: Amplitude of a smooth perturbation of the interior curves.
    :param seed: Seed of the perturbation.
    :return: CurvePath whose end curves are c0 and c1 themselves.
    """
    _check_ends(c0, c1)
    if int(steps) != steps or steps < 1:
        raise InvalidArgumentError(f"steps must be a positive integer, got {steps}.")
    if mode not in INIT_MODES:
        raise InvalidArgumentError(f"Unknown initialization '{mode}', expected one of {INIT_MODES}.")
    manifold = c0.manifold
    space = c0.space
    times = np.linspace(0.0, 1.0, int(steps) + 1)
    if mode == "pointwise_geodesic":
        gaps = np.asarray(space.dist(c0.points, c1.points))
        limit = manifold.injectivity_radius - get_config().get_numeric("injectivity_margin") * manifold.radius
        bad = np.flatnonzero(~(gaps < limit))
        if bad.size:
            raise InitFailureError(
                f"c0 and c1 are {gaps[bad[0]]:.6f} apart, beyond the injectivity limit {limit:.6f}", node=int(bad[0])
            )
        step = np.asarray(space.log(c0.points, c1.points))
        points = np.array(space.exp(c0.points[None], times[:, None, None] * step[None]))
    else:
        ambient = (1.0 - times[:, None, None]) * c0.points[None] + times[:, None, None] * c1.points[None]
        with np.errstate(divide="ignore", invalid="ignore"):
            points = np.array(space.project_point(ambient))
        bad = np.argwhere(~np.all(np.isfinite(points), axis=-1))
        if bad.size:
            raise InitFailureError(
                f"the affine homotopy cannot be projected onto the {manifold.kind} at t={times[bad[0][0]]:.4g}",
                node=int(bad[0][1]),
            )
    if noise > 0:
        points = _smooth_noise(space, c0.domain, points, times, noise, seed)

    curves = [c0]
    for j in range(1, int(steps)):
        try:
            curves.append(build_curve(manifold, c0.domain, points[j], immersion_tol=c0.immersion_tol))
        except ElasticaError as e:
            raise InitFailureError(f"interior curve {j} of the initial path is degenerate: {e}", node=getattr(e, "node", None))
    curves.append(c1)
    try:
        return CurvePath(curves, times)
    except AdjacencyViolationError as e:
        raise InitFailureError(f"initial path: {e}", node=e.node)


class _PathProblem:
    """
    Discrete path energy as a function of the interior curves of a path with fixed ends.
    """

    def __init__(self, spec: MetricSpec, c0: DiscreteCurve, c1: DiscreteCurve, times: np.ndarray):
        self.spec = spec
        self.c0 = c0
        self.c1 = c1
        self.manifold = c0.manifold
        self.space = c0.space
        self.times = np.asarray(times, dtype=float)
        self.ends = np.stack([c0.points, c1.points])
        self.closed = c0.closed
        self.spacing = c0.domain.spacing

    def _args(self, interior):
        return interior, self.ends, self.times, self.manifold, self.spec, self.closed, self.spacing

    def value(self, interior: np.ndarray) -> float:
        return float(_energy(*self._args(interior)))

    def value_and_gradient(self, interior: np.ndarray):
        energy, egrad = _energy_and_gradient(*self._args(interior))
        return float(energy), np.asarray(self.space.egrad_to_rgrad(interior, np.asarray(egrad)))

    def inner(self, interior, u, v) -> float:
        return float(np.sum(self.space.inner(interior, u, v)))

    def norm(self, interior, u) -> float:
        return math.sqrt(max(self.inner(interior, u, u), 0.0))

    def precondition(self, interior, gradient) -> np.ndarray:
        """
        Divide by the node weights ds / dt, the diagonal of the L2 part of the energy Hessian.
        """
        ds = np.asarray(stencils.arc_weights(self.space, interior, self.closed))
        dt = np.diff(self.times)
        scale = 0.5 * (dt[:-1] + dt[1:])
        weights = 2.0 * np.maximum(ds, 1e-300) / scale[:, None]
        return gradient / weights[..., None]

    def curves(self, interior) -> list:
        return [
            build_curve(self.manifold, self.c0.domain, points, immersion_tol=self.c0.immersion_tol)
            for points in interior
        ]

    def retract(self, interior, displacement):
        """
        Move the nodes by exp; None when a curve stops being an immersion or neighbours drift apart.
        """
        moved = np.asarray(self.space.exp(interior, displacement))
        if not np.all(np.isfinite(moved)):
            return None
        try:
            self.curves(moved)
            check_time_adjacency(self.manifold, np.concatenate([self.ends[:1], moved, self.ends[1:]]))
        except ElasticaError as e:
            logging.debug(f"Line search: rejected trial point, {e}")
            return None
        return moved

    def path(self, interior) -> CurvePath:
        return CurvePath([self.c0] + self.curves(interior) + [self.c1], self.times)


def energy_gradient(spec: MetricSpec, path: CurvePath) -> np.ndarray:
    """
    Riemannian gradient of the discrete path energy with respect to the interior curves.

    :param spec: The metric.
    :param path: Path with fixed end curves.
    :return: Tangent vectors of shape (M-1, N, D).
    """
    for curve in path.curves:
        coefficients(spec, curve.length)
    problem = _PathProblem(spec, path.start, path.end, path.times)
    interior = np.array(path.points[1:-1])
    if len(interior) == 0:
        return interior
    return problem.value_and_gradient(interior)[1]


def _line_search(problem: _PathProblem, x, energy, direction, slope, alpha, opts: BvpOptions):
    """
    Armijo backtracking along exp_x(alpha d).

    :return: (alpha, new interior, new energy), or None when no step is accepted.
    """
    for _ in range(opts.max_backtracks + 1):
        candidate = problem.retract(x, alpha * direction)
        if candidate is not None:
            trial = problem.value(candidate)
            if trial <= energy + opts.armijo * alpha * slope:
                return alpha, candidate, trial
            logging.debug(f"Line search: step {alpha:.3e} gives E={trial:.12g}, no sufficient decrease.")
        alpha *= opts.backtrack
    return None


def minimize(
    spec: MetricSpec, c0: DiscreteCurve, c1: DiscreteCurve, opts: BvpOptions = None, initial: CurvePath = None
) -> GeodesicResult:
    """
    Minimize the discrete path energy between c0 and c1.

    :param spec: The metric.
    :param c0: Start curve, kept bit-identical.
    :param c1: End curve, kept bit-identical.
    :param opts: Optimizer options, configured defaults when omitted.
    :param initial: Feasible initial path; built with init_path when omitted.
    :return: GeodesicResult holding the best path, retimed to constant speed.
    """
    opts = opts or BvpOptions()
    _check_ends(c0, c1)
    coefficients(spec, c0.length)
    coefficients(spec, c1.length)
    if initial is None:
        initial = init_path(c0, c1, opts.time_steps, opts.init, opts.init_noise, opts.seed)
    elif not (
        initial.start.same_grid(c0)
        and np.array_equal(initial.start.points, c0.points)
        and np.array_equal(initial.end.points, c1.points)
    ):
        raise InvalidArgumentError("the initial path must start at c0 and end at c1.")
    if initial.steps < 2:
        raise InvalidArgumentError("the initial path needs at least one interior curve.")

    problem = _PathProblem(spec, c0, c1, np.linspace(0.0, 1.0, initial.steps + 1))
    x = np.array(initial.points[1:-1])
    energy, gradient = problem.value_and_gradient(x)
    initial_energy = energy
    history = [energy]
    z = problem.precondition(x, gradient)
    direction = -z
    gradient_norm = problem.norm(x, gradient)
    alpha = opts.initial_step
    iterations = 0
    converged = False

    while True:
        if gradient_norm <= opts.gtol:
            converged = True
            break
        if iterations >= opts.max_iterations:
            break
        slope = problem.inner(x, gradient, direction)
        if not slope < 0:
            direction = -z
            slope = problem.inner(x, gradient, direction)
        step = _line_search(problem, x, energy, direction, slope, alpha, opts)
        if step is None and opts.conjugate:
            # restart along the preconditioned steepest descent direction
            direction = -z
            slope = problem.inner(x, gradient, direction)
            step = _line_search(problem, x, energy, direction, slope, opts.initial_step, opts)
        if step is None:
            logging.warning(f"Geodesic BVP: line search failed at iteration {iterations}, E={energy:.12g}.")
            break

        alpha, x_new, energy_new = step
        energy_new, gradient_new = problem.value_and_gradient(x_new)
        z_new = problem.precondition(x_new, gradient_new)
        if opts.conjugate:
            moved_z = np.asarray(problem.space.transport(x, x_new, z))
            moved_direction = np.asarray(problem.space.transport(x, x_new, direction))
            denominator = problem.inner(x, gradient, z)
            beta = max(0.0, problem.inner(x_new, gradient_new, z_new - moved_z) / denominator) if denominator > 0 else 0.0
            direction = -z_new + beta * moved_direction
        else:
            direction = -z_new
        decrease = energy - energy_new
        x, energy, gradient, z = x_new, energy_new, gradient_new, z_new
        gradient_norm = problem.norm(x, gradient)
        history.append(energy)
        iterations += 1
        alpha = min(alpha / opts.backtrack, opts.initial_step * 1e6)
        logging.debug(f"Geodesic BVP iteration {iterations}: E={energy:.12g}, |grad|={gradient_norm:.3e}")
        if decrease <= opts.ftol * max(1.0, abs(energy)):
            converged = gradient_norm <= opts.gtol
            break

    path = problem.path(x)
    path = path.with_times(constant_speed_times(spec, path))
    final_energy, length = path_energy(spec, path)
    result = GeodesicResult(
        path=path,
        energy=final_energy,
        length=length,
        iterations=iterations,
        converged=converged,
        gradient_norm=gradient_norm,
        initial_energy=initial_energy,
        history=history,
    )
    logging.info(
        f"Geodesic BVP: E={final_energy:.12g}, distance {result.distance:.10g} after {iterations} iterations "
        f"(converged={converged}, |grad|={gradient_norm:.3e})."
    )
    return result


def distance(spec: MetricSpec, c0: DiscreteCurve, c1: DiscreteCurve, opts: BvpOptions = None) -> float:
    """
    Geodesic distance estimate sqrt(E*) of the best path found.
    """
    return minimize(spec, c0, c1, opts).distance


def existence_radius(curve: DiscreteCurve, constant: float) -> float:
    """
    Informational radius C l^{3/2} / (1 + l^{3/2}) of the ball around c on which geodesics exist,
    for a user supplied constant C.
    """
    if not constant > 0:
        raise InvalidArgumentError(f"the radius constant must be positive, got {constant}.")
    power = curve.length ** 1.5
    return constant * power / (1.0 + power)
