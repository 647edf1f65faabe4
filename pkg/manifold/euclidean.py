import numpy as np

from manifold.space import ConstantCurvatureSpace, register_space


@register_space("euclidean")
class EuclideanSpace(ConstantCurvatureSpace):
    """
    Flat R^d: straight lines, trivial transport, vanishing curvature.
    """

    curvature_constant = 0.0

    @property
    def ambient_dim(self) -> int:
        return self.dim

    def exp(self, p, v):
        return p + v

    def log(self, p, q):
        return q - p

    def transport(self, p, q, v):
        return v + 0.0 * q

    def proj(self, p, v):
        return v

    def project_point(self, x):
        return x

    def curvature(self, p, x, y, z):
        return 0.0 * x

    def point_residual(self, x):
        return np.zeros(np.shape(x)[:-1])

    def frame(self, p) -> np.ndarray:
        return np.eye(self.dim)
