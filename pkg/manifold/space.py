from abc import ABC, abstractmethod

import numpy as np

from manifold.utils import dot, expand, get_xp, safe_sqrt

_SPACE_DICT = {}


def register_space(kind):
    def decorator(cls):
        _SPACE_DICT[kind] = cls
        return cls

    return decorator


def get_space(kind: str, **kwargs):
    kind = kind.lower()
    if kind not in _SPACE_DICT:
        raise ValueError(f"Manifold kind '{kind}' is not registered. Available kinds: {sorted(_SPACE_DICT)}")
    return _SPACE_DICT[kind](**kwargs)


class ConstantCurvatureSpace(ABC):
    """
    Closed-form geometry of a constant curvature manifold in ambient coordinates.

    Every method is vectorized over leading axes: points and vectors have shape (..., D)
    with D the ambient dimension, scalars come back with shape (...). The methods accept
    numpy arrays as well as jax arrays, so the same code serves plain evaluation and
    automatic differentiation.
    """

    curvature_constant = 0.0
    series_threshold = 1e-6

    def __init__(self, dim: int):
        self.dim = dim

    def __repr__(self):
        return f"{self.__class__.__name__}(dim={self.dim})"

    @property
    @abstractmethod
    def ambient_dim(self) -> int:
        pass

    @property
    def injectivity_radius(self) -> float:
        return np.inf

    @property
    def is_flat(self) -> bool:
        return self.curvature_constant == 0.0

    def inner(self, p, u, v):
        """
        Riemannian metric g_p(u, v).
        """
        return dot(get_xp(p, u, v), u, v)

    def norm(self, p, v):
        xp = get_xp(p, v)
        return safe_sqrt(xp, self.inner(p, v, v))

    @abstractmethod
    def exp(self, p, v):
        """
        Exponential map exp_p(v).
        """

    @abstractmethod
    def log(self, p, q):
        """
        Logarithm map log_p(q), the inverse of exp_p inside the injectivity radius.
        """

    @abstractmethod
    def transport(self, p, q, v):
        """
        Parallel transport of v from T_pN to T_qN along the minimizing geodesic.
        """

    @abstractmethod
    def proj(self, p, v):
        """
        Orthogonal projection of an ambient vector onto T_pN.
        """

    @abstractmethod
    def project_point(self, x):
        """
        Map an ambient point onto the manifold.
        """

    def dist(self, p, q):
        return self.norm(p, self.log(p, q))

    def egrad_to_rgrad(self, p, egrad):
        """
        Convert the gradient of an ambient function into the Riemannian gradient.
        """
        return self.proj(p, egrad)

    def curvature(self, p, x, y, z):
        """
        R(X,Y)Z = K (g(Y,Z) X - g(X,Z) Y).
        """
        return self.curvature_constant * (expand(self.inner(p, y, z)) * x - expand(self.inner(p, x, z)) * y)

    @abstractmethod
    def point_residual(self, x):
        """
        Deviation of an ambient point from the manifold constraint.
        """

    def tangent_residual(self, p, v):
        """
        Deviation of an ambient vector from T_pN (zero where every vector is tangent).
        """
        return np.zeros(np.shape(v)[:-1])

    def frame(self, p) -> np.ndarray:
        """
        Orthonormal basis of T_pN, shape (dim, D), by Gram-Schmidt on the projected
        standard basis.

        :param p: Base point, shape (D,).
        :return: Frame vectors as rows.
        """
        p = np.asarray(p, dtype=float)
        basis = []
        for axis in range(self.ambient_dim):
            e = np.zeros(self.ambient_dim)
            e[axis] = 1.0
            v = self.proj(p, e)
            for b in basis:
                v = v - self.inner(p, b, v) * b
            norm = float(self.norm(p, v))
            if norm > 1e-8:
                basis.append(v / norm)
            if len(basis) == self.dim:
                break
        if len(basis) != self.dim:
            raise ValueError(f"Could not build a tangent frame at {p}.")
        return np.stack(basis)

    def small_mask(self, xp, x2):
        return x2 < self.series_threshold ** 2
