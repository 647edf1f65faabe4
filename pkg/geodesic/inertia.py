"""
Inertia operator A_c h = a_0 h - a_1 D_s^2 h of first order metrics and its inverse.

Fields are trivialized in a frame parallel transported along the curve, so the stiffness
matrix is a scalar tridiagonal matrix acting on every frame coordinate. On closed curves the
seam edge couples the last and first node through the holonomy, which is handled as a
low-rank correction of the banded solve.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, solveh_banded

from curve import stencils
from curve.discrete_curve import DiscreteCurve
from curve.vector_field import VectorField
from holonomy.holonomy import transported_frames
from manifold.errors import InvalidArgumentError, SolverFailureError, UnsupportedOrderError
from metric.metric_spec import MetricSpec, coefficients


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """
    Neumann values D_theta u at the two ends of an open curve; absent for closed curves.
    """

    closed: bool
    start: np.ndarray = None
    end: np.ndarray = None

    def __post_init__(self):
        if self.closed and (self.start is not None or self.end is not None):
            raise InvalidArgumentError("boundary data must be empty for closed curves.")
        if not self.closed and (self.start is None or self.end is None):
            raise InvalidArgumentError("open curves need Neumann values at both ends.")

    @classmethod
    def periodic(cls):
        return cls(closed=True)

    @classmethod
    def neumann(cls, start, end):
        return cls(closed=False, start=np.asarray(start, dtype=float), end=np.asarray(end, dtype=float))

    @classmethod
    def natural(cls, curve: DiscreteCurve):
        """
        Periodic data for closed curves, zero Neumann values otherwise.
        """
        if curve.closed:
            return cls.periodic()
        zero = np.zeros(curve.manifold.ambient_dim)
        return cls.neumann(zero, zero)

    @classmethod
    def of_field(cls, curve: DiscreteCurve, field: VectorField):
        """
        The Neumann values of the field itself, from one-sided stencils.
        """
        if curve.closed:
            return cls.periodic()
        derivative = stencils.theta_derivative(
            curve.space, curve.points, field.vectors, False, curve.domain.spacing
        )
        return cls.neumann(derivative[0], derivative[-1])


class InertiaSystem:
    """
    Discrete inertia operator of an order-1 metric on one curve.

    The stiffness form is a_0 sum ds_i |U_i|^2 + a_1 sum_e |U_j - P_e U_i|^2 / e, with U the
    coordinates of a field in the transported frame.
    """

    def __init__(self, spec: MetricSpec, curve: DiscreteCurve):
        if spec.order != 1:
            raise UnsupportedOrderError(f"the inertia operator is implemented for order 1, got order {spec.order}.")
        self.curve = curve
        self.a0, self.a1 = coefficients(spec, curve.length)
        space = curve.space
        if space.is_flat:
            frame = space.frame(curve.points[0])
            self.frames = np.broadcast_to(frame, (curve.samples,) + frame.shape)
            closing = frame if curve.closed else None
        else:
            self.frames, closing = transported_frames(curve)

        n = curve.samples
        weights = 1.0 / curve.edge_lengths
        if not np.all(np.isfinite(weights)) or np.any(curve.ds <= 0):
            raise SolverFailureError(f"degenerate edge lengths on {curve}.")
        self.weights = weights
        inner = weights[: n - 1]
        diagonal = self.a0 * curve.ds.copy()
        diagonal[:-1] += self.a1 * inner
        diagonal[1:] += self.a1 * inner
        self.seam = None
        if curve.closed:
            diagonal[0] += self.a1 * weights[-1]
            diagonal[-1] += self.a1 * weights[-1]
            # seam[a, b] = g(E_{N-1}[a], P_{0 -> N-1} E_0[b])
            self.seam = np.asarray(space.inner(curve.points[0], closing[:, None, :], self.frames[0][None, :, :]))
        self.banded = np.zeros((2, n))
        self.banded[0, 1:] = -self.a1 * inner
        self.banded[1] = diagonal

    @property
    def dim(self) -> int:
        return self.frames.shape[1]

    def to_coords(self, vectors: np.ndarray) -> np.ndarray:
        points = self.curve.points
        return np.asarray(self.curve.space.inner(points[:, None, :], self.frames, vectors[:, None, :]))

    def from_coords(self, coords: np.ndarray) -> np.ndarray:
        return np.einsum("na,nad->nd", coords, self.frames)

    def stiffness(self, coords: np.ndarray) -> np.ndarray:
        """
        S U for coordinates U of shape (N, dim).
        """
        result = self.a0 * self.curve.ds[:, None] * coords
        n = self.curve.samples
        flux = self.a1 * self.weights[: n - 1, None] * (coords[:-1] - coords[1:])
        result[:-1] += flux
        result[1:] -= flux
        if self.seam is not None:
            w = self.a1 * self.weights[-1]
            gap = coords[-1] - self.seam @ coords[0]
            result[-1] += w * gap
            result[0] -= w * (self.seam.T @ gap)
        return result

    def _banded_solve(self, rhs: np.ndarray) -> np.ndarray:
        try:
            return solveh_banded(self.banded, rhs)
        except LinAlgError as e:
            logging.error(f"Inertia system on {self.curve} is not positive definite: {e}")
            raise SolverFailureError(f"inertia system is not positive definite: {e}")

    def solve_coords(self, rhs: np.ndarray) -> np.ndarray:
        """
        Solve S U = rhs, with a Woodbury correction for the closed seam.
        """
        y = self._banded_solve(rhs)
        if self.seam is None:
            return y
        n, d = self.curve.samples, self.dim
        unit = np.zeros((n, 2))
        unit[0, 0] = 1.0
        unit[-1, 1] = 1.0
        z = self._banded_solve(unit)
        z0, z1 = z[:, 0], z[:, 1]
        eye = np.eye(d)
        w = self.a1 * self.weights[-1]
        corner = np.block([[np.zeros((d, d)), -w * self.seam.T], [-w * self.seam, np.zeros((d, d))]])
        projected = np.block([[z0[0] * eye, z1[0] * eye], [z0[-1] * eye, z1[-1] * eye]])
        try:
            beta = np.linalg.solve(np.eye(2 * d) + corner @ projected, corner @ np.concatenate([y[0], y[-1]]))
        except np.linalg.LinAlgError as e:
            raise SolverFailureError(f"seam correction is singular: {e}")
        return y - np.outer(z0, beta[:d]) - np.outer(z1, beta[d:])

    def _coords_at(self, node: int, vector) -> np.ndarray:
        point = self.curve.points[node]
        return np.asarray(self.curve.space.inner(point, self.frames[node], np.asarray(vector, dtype=float)))

    def _neumann_coords(self, bc: BoundaryData):
        speed = self.curve.speed
        return self._coords_at(0, bc.start) / speed[0], self._coords_at(-1, bc.end) / speed[-1]

    def apply(self, vectors: np.ndarray) -> np.ndarray:
        coords = self.to_coords(vectors)
        result = self.stiffness(coords)
        if not self.curve.closed:
            field = VectorField(self.curve, vectors, check=False)
            start, end = self._neumann_coords(BoundaryData.of_field(self.curve, field))
            result[0] += self.a1 * start
            result[-1] -= self.a1 * end
        return self.from_coords(result / self.curve.ds[:, None])

    def solve(self, vectors: np.ndarray, bc: BoundaryData) -> np.ndarray:
        if bc.closed != self.curve.closed:
            raise InvalidArgumentError("boundary data does not match the curve topology.")
        rhs = self.curve.ds[:, None] * self.to_coords(vectors)
        if not self.curve.closed:
            start, end = self._neumann_coords(bc)
            rhs[0] -= self.a1 * start
            rhs[-1] += self.a1 * end
        return self.from_coords(self.solve_coords(rhs))


def apply_inertia(spec: MetricSpec, curve: DiscreteCurve, h: VectorField) -> VectorField:
    """
    A_c h = a_0 h - a_1 D_s^2 h; on open curves the end rows use the field's own Neumann values.
    """
    h.require_on(curve)
    return VectorField(curve, InertiaSystem(spec, curve).apply(h.vectors), check=False)


def solve_inertia(spec: MetricSpec, curve: DiscreteCurve, f: VectorField, bc: BoundaryData = None) -> VectorField:
    """
    Solve A_c u = f with periodic (closed) or Neumann (open) boundary data.

    :param spec: Order-1 metric.
    :param curve: The curve.
    :param f: Right-hand side.
    :param bc: Boundary data, zero Neumann values by default.
    :return: The solution u.
    """
    f.require_on(curve)
    if bc is None:
        bc = BoundaryData.natural(curve)
    return VectorField(curve, InertiaSystem(spec, curve).solve(f.vectors, bc), check=False)
