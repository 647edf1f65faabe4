import numpy as np

from _config.app_config import get_config
from curve.discrete_curve import DiscreteCurve
from manifold.errors import InvalidArgumentError
from manifold.tangent import Point, Tangent


class VectorField:
    """
    Tangent vectors h_i in T_{c_i}N along a discrete curve, stored as an (N, D) array.
    """

    def __init__(self, curve: DiscreteCurve, vectors, tol: float = None, check: bool = True):
        """
        :param curve: The curve the field lives on.
        :param vectors: Ambient vectors, shape (N, D).
        :param tol: Tangency tolerance, defaults to the configured value.
        :param check: Skip validation for fields produced by trusted kernels.
        """
        vectors = np.array(vectors, dtype=float)
        if vectors.shape != curve.points.shape:
            raise InvalidArgumentError(f"vectors: expected shape {curve.points.shape}, got {vectors.shape}.")
        if check:
            if tol is None:
                tol = get_config().get_numeric("tangent_tolerance")
            residual = curve.space.tangent_residual(curve.points, vectors)
            bad = np.flatnonzero(~(residual <= tol))
            if bad.size:
                raise InvalidArgumentError(f"vectors[{bad[0]}]: not tangent (residual {residual[bad[0]]:.3e}).")
        vectors.setflags(write=False)
        self.curve = curve
        self.vectors = vectors

    @classmethod
    def from_ambient(cls, curve: DiscreteCurve, vectors):
        """
        Project arbitrary ambient vectors onto the tangent spaces along the curve.
        """
        projected = np.asarray(curve.space.proj(curve.points, np.asarray(vectors, dtype=float)))
        return cls(curve, projected, check=False)

    @classmethod
    def zeros(cls, curve: DiscreteCurve):
        return cls(curve, np.zeros_like(curve.points), check=False)

    @classmethod
    def parallel(cls, curve: DiscreteCurve, seed_vector):
        """
        Transport a vector at c_0 node by node along the curve.
        """
        space = curve.space
        vectors = np.empty_like(curve.points)
        vectors[0] = space.proj(curve.points[0], np.asarray(seed_vector, dtype=float))
        for i in range(1, curve.samples):
            vectors[i] = space.transport(curve.points[i - 1], curve.points[i], vectors[i - 1])
        return cls(curve, vectors, check=False)

    def scaled(self, factor: float):
        return VectorField(self.curve, factor * self.vectors, check=False)

    def add(self, other):
        self.require_same_curve(other)
        return VectorField(self.curve, self.vectors + other.vectors, check=False)

    def require_same_curve(self, other) -> None:
        self.require_on(other.curve)

    def require_on(self, curve: DiscreteCurve) -> None:
        if curve is not self.curve and not (
            self.curve.same_grid(curve) and np.array_equal(self.curve.points, curve.points)
        ):
            raise InvalidArgumentError("vector field does not live on this curve.")

    def pointwise_norm(self) -> np.ndarray:
        return np.asarray(self.curve.space.norm(self.curve.points, self.vectors))

    def tangent(self, i: int) -> Tangent:
        return Tangent(Point(self.curve.points[i]), self.vectors[i])

    def to_dict(self) -> dict:
        return {"vectors": self.vectors.tolist()}

    def __len__(self):
        return self.curve.samples
