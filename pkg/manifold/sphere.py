import numpy as np

from manifold.space import ConstantCurvatureSpace, register_space
from manifold.utils import dot, expand, get_xp, safe_sqrt


@register_space("sphere")
class Sphere(ConstantCurvatureSpace):
    """
    Round sphere S^d of radius rho, embedded as {x in R^{d+1} : |x| = rho}.
    """

    def __init__(self, dim: int, radius: float = 1.0):
        super().__init__(dim)
        self.radius = float(radius)
        self.curvature_constant = 1.0 / self.radius ** 2

    def __repr__(self):
        return f"Sphere(dim={self.dim}, radius={self.radius})"

    @property
    def ambient_dim(self) -> int:
        return self.dim + 1

    @property
    def injectivity_radius(self) -> float:
        return np.pi * self.radius

    def exp(self, p, v):
        xp = get_xp(p, v)
        theta2 = dot(xp, v, v) / self.radius ** 2
        small = self.small_mask(xp, theta2)
        theta = xp.sqrt(xp.where(small, 1.0, theta2))
        cos_t = xp.where(small, 1.0 - theta2 / 2.0, xp.cos(theta))
        sinc_t = xp.where(small, 1.0 - theta2 / 6.0, xp.sin(theta) / theta)
        return self.project_point(expand(cos_t) * p + expand(sinc_t) * v)

    def log(self, p, q):
        xp = get_xp(p, q)
        cos_a = dot(xp, p, q) / self.radius ** 2
        w = q - expand(cos_a) * p
        sin2 = dot(xp, w, w) / self.radius ** 2
        small = self.small_mask(xp, sin2)
        sin_a = xp.sqrt(xp.where(small, 1.0, sin2))
        angle = xp.arctan2(sin_a, cos_a)
        factor = xp.where(small, 1.0 + sin2 / 6.0, angle / sin_a)
        return expand(factor) * w

    def dist(self, p, q):
        xp = get_xp(p, q)
        cos_a = dot(xp, p, q) / self.radius ** 2
        w = q - expand(cos_a) * p
        sin_a = safe_sqrt(xp, dot(xp, w, w)) / self.radius
        return self.radius * xp.arctan2(sin_a, cos_a)

    def transport(self, p, q, v):
        xp = get_xp(p, q, v)
        coef = dot(xp, q, v) / (self.radius ** 2 + dot(xp, p, q))
        return v - expand(coef) * (p + q)

    def proj(self, p, v):
        xp = get_xp(p, v)
        return v - expand(dot(xp, p, v) / self.radius ** 2) * p

    def project_point(self, x):
        xp = get_xp(x)
        return self.radius * x / expand(xp.sqrt(dot(xp, x, x)))

    def point_residual(self, x):
        x = np.asarray(x, dtype=float)
        return np.abs(np.linalg.norm(x, axis=-1) - self.radius)

    def tangent_residual(self, p, v):
        p = np.asarray(p, dtype=float)
        v = np.asarray(v, dtype=float)
        scale = self.radius * np.maximum(1.0, np.linalg.norm(v, axis=-1))
        return np.abs(np.sum(p * v, axis=-1)) / scale
