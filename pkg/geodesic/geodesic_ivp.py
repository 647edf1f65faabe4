import logging
from dataclasses import dataclass, field

import numpy as np

from curve import stencils
from curve.discrete_curve import DiscreteCurve, build_curve
from curve.vector_field import VectorField
from geodesic.inertia import BoundaryData, InertiaSystem
from manifold.errors import ElasticaError, InvalidArgumentError, UnsupportedOrderError
from manifold.utils import expand
from metric.curve_path import CurvePath
from metric.metric_spec import MetricSpec, coefficient_derivatives
from metric.sobolev_metric import metric_value


@dataclass(frozen=True)
class GeodesicState:
    """
    A curve c together with the velocity w = c_t along it.
    """

    curve: DiscreteCurve
    velocity: VectorField

    def __post_init__(self):
        self.velocity.require_on(self.curve)


@dataclass
class IvpResult:
    """
    path is None when the run stops before its first step completes; diagnostics then hold the
    initial row only.
    """

    path: CurvePath
    velocities: list
    diagnostics: list
    completed: bool
    error: str = None
    states: list = field(default_factory=list, repr=False)

    @property
    def final_state(self) -> GeodesicState:
        return self.states[-1]

    @property
    def energy_drift(self) -> float:
        energies = [row["energy"] for row in self.diagnostics]
        return max(abs(e - energies[0]) for e in energies) / energies[0] if energies[0] > 0 else 0.0


def _check_order(spec: MetricSpec) -> None:
    if spec.order != 1:
        raise UnsupportedOrderError(f"the geodesic initial value problem needs an order 1 metric, got order {spec.order}.")


class _Kinematics:
    """
    Arc-length derivatives of a velocity field w along c shared by psi_form and the acceleration.
    """

    def __init__(self, spec: MetricSpec, curve: DiscreteCurve, w: np.ndarray):
        self.curve = curve
        space = curve.space
        points = curve.points
        closed = curve.closed
        spacing = curve.domain.spacing
        speed = curve.speed
        self.a0, self.a1 = spec.coefficient_values(curve.length)
        self.a0p, self.a1p = coefficient_derivatives(spec, curve.length)
        self.w = w
        self.v = curve.velocity / expand(speed)
        _, self.dw, self.d2w = stencils.derivatives(space, points, w, closed, spacing, 2, True, speed)
        self.dv = stencils.derivatives(space, points, self.v, closed, spacing, 1, True, speed)[1]
        self.mu = np.asarray(space.inner(points, self.v, self.dw))
        self.lam = float(np.sum(self.mu * curve.ds))
        self.dmu = stencils.scalar_derivative(self.mu, closed, spacing) / speed
        self.aw = self.a0 * w - self.a1 * self.d2w

    def psi(self) -> np.ndarray:
        space = self.curve.space
        points = self.curve.points
        ds = self.curve.ds
        w2 = np.asarray(space.inner(points, self.w, self.w))
        dw2 = np.asarray(space.inner(points, self.dw, self.dw))
        return self.a0 * w2 + self.a0p * np.sum(w2 * ds) - self.a1 * dw2 + self.a1p * np.sum(dw2 * ds)


def psi_form(spec: MetricSpec, curve: DiscreteCurve, w: VectorField) -> np.ndarray:
    """
    Psi_c(w, w) = a_0|w|^2 + a_0' int |w|^2 ds - a_1 |D_s w|^2 + a_1' int |D_s w|^2 ds at every node.
    """
    _check_order(spec)
    w.require_on(curve)
    return _Kinematics(spec, curve, w.vectors).psi()


def acceleration(spec: MetricSpec, curve: DiscreteCurve, w: np.ndarray) -> np.ndarray:
    """
    nabla_t w from the first order geodesic equation.

    The interior equation A(nabla_t w) = F collects the transport terms, the length-derivative
    of the coefficients and the commutator [nabla_t, D_s^2] w. On open curves the natural
    boundary condition 2 nabla_t(a_1 D_s w) = Psi v gives Neumann data for nabla_t w.
    """
    space = curve.space
    points = curve.points
    k = _Kinematics(spec, curve, w)
    psi = k.psi()

    def R(x, y, z):
        return np.asarray(space.curvature(points, x, y, z))

    def g(x, y):
        return expand(np.asarray(space.inner(points, x, y)))

    mu = expand(k.mu)
    commutator = (
        -2.0 * mu * k.d2w
        - expand(k.dmu) * k.dw
        + 2.0 * R(k.w, k.v, k.dw)
        + R(k.dw, k.v, k.w)
        + R(k.w, k.dv, k.w)
    )
    forcing = (
        -mu * k.aw
        - k.lam * (k.a0p * k.w - k.a1p * k.d2w)
        - k.a1 * R(k.w, k.dw, k.v)
        - 0.5 * expand(psi) * k.dv
        - g(k.dw, k.aw) * k.v
        + k.a1 * commutator
    )
    forcing = np.asarray(space.proj(points, forcing))

    if curve.closed:
        bc = BoundaryData.periodic()
    else:
        slope = (0.5 * expand(psi) * k.v - k.a1p * k.lam * k.dw) / k.a1 + mu * k.dw - R(k.w, k.v, k.w)
        slope = expand(curve.speed) * np.asarray(space.proj(points, slope))
        bc = BoundaryData.neumann(slope[0], slope[-1])
    return InertiaSystem(spec, curve).solve(forcing, bc)


def state_energy(spec: MetricSpec, curve: DiscreteCurve, w: np.ndarray) -> float:
    return float(metric_value(curve.space, spec, curve.points, w, w, curve.closed, curve.domain.spacing))


def _diagnostics(spec, step, t, curve, w) -> dict:
    return {
        "step": step,
        "t": t,
        "energy": state_energy(spec, curve, w),
        "length": curve.length,
        "min_speed": float(np.min(curve.speed)),
    }


def _rk4_step(spec: MetricSpec, curve: DiscreteCurve, w: np.ndarray, dt: float):
    """
    Classical RK4 on (c, w): stages move by exp, velocities are carried by parallel transport
    and stage derivatives are transported back to the base curve before they are combined.
    """
    space = curve.space
    base = curve.points

    def shifted(displacement):
        return build_curve(curve.manifold, curve.domain, space.exp(base, displacement), immersion_tol=curve.immersion_tol)

    def stage(displacement, w_stage_base):
        stage_curve = shifted(displacement)
        w_stage = np.asarray(space.transport(base, stage_curve.points, w_stage_base))
        a_stage = acceleration(spec, stage_curve, w_stage)
        back = lambda x: np.asarray(space.transport(stage_curve.points, base, x))  # noqa: E731
        return back(w_stage), back(a_stage)

    k1w, k1a = w, acceleration(spec, curve, w)
    k2w, k2a = stage(0.5 * dt * k1w, w + 0.5 * dt * k1a)
    k3w, k3a = stage(0.5 * dt * k2w, w + 0.5 * dt * k2a)
    k4w, k4a = stage(dt * k3w, w + dt * k3a)
    displacement = dt * (k1w + 2.0 * k2w + 2.0 * k3w + k4w) / 6.0
    w_next = w + dt * (k1a + 2.0 * k2a + 2.0 * k3a + k4a) / 6.0
    next_curve = shifted(displacement)
    w_next = np.asarray(space.transport(base, next_curve.points, w_next))
    return next_curve, np.asarray(space.proj(next_curve.points, w_next))


def ivp_integrate(spec: MetricSpec, state0: GeodesicState, T: float, steps: int) -> IvpResult:
    """
    Integrate the first order geodesic equation with RK4.

    :param spec: Order-1 metric.
    :param state0: Initial curve and velocity.
    :param T: Final time.
    :param steps: Number of equal time steps.
    :return: IvpResult; an immersion violation ends the run early with completed False.
    """
    _check_order(spec)
    if not T > 0:
        raise InvalidArgumentError(f"final time must be positive, got {T}.")
    if int(steps) != steps or steps < 1:
        raise InvalidArgumentError(f"steps must be a positive integer, got {steps}.")
    dt = T / steps
    curve, w = state0.curve, np.array(state0.velocity.vectors)
    curves, velocities, times = [curve], [w], [0.0]
    diagnostics = [_diagnostics(spec, 0, 0.0, curve, w)]
    error = None
    for step in range(1, int(steps) + 1):
        try:
            curve, w = _rk4_step(spec, curve, w, dt)
        except ElasticaError as e:
            error = f"step {step}: {e}"
            logging.error(f"Geodesic integration aborted at t={(step - 1) * dt:.6g}: {e}")
            break
        t = step * dt
        curves.append(curve)
        velocities.append(w)
        times.append(t)
        diagnostics.append(_diagnostics(spec, step, t, curve, w))
        logging.debug(f"IVP step {step}: t={t:.6g}, energy={diagnostics[-1]['energy']:.12g}")

    path = CurvePath(curves, times) if len(curves) > 1 else None
    states = [GeodesicState(c, VectorField(c, v, check=False)) for c, v in zip(curves, velocities)]
    result = IvpResult(path, velocities, diagnostics, completed=error is None, error=error, states=states)
    if result.completed:
        logging.info(f"Integrated {steps} steps to T={T}, relative energy drift {result.energy_drift:.3e}.")
    return result
