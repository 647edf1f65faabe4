import numpy as np

from manifold.space import ConstantCurvatureSpace, register_space
from manifold.utils import dot, expand, get_xp, safe_sqrt


def minkowski(xp, x, y):
    """
    Lorentzian form <x, y>_L = -x0 y0 + sum_i xi yi.
    """
    return dot(xp, x, y) - 2.0 * x[..., 0] * y[..., 0]


@register_space("hyperbolic")
class Hyperboloid(ConstantCurvatureSpace):
    """
    Hyperbolic space H^d as the upper sheet {<x,x>_L = -1, x0 > 0} of Minkowski R^{d,1}.
    """

    curvature_constant = -1.0

    @property
    def ambient_dim(self) -> int:
        return self.dim + 1

    def inner(self, p, u, v):
        return minkowski(get_xp(p, u, v), u, v)

    def exp(self, p, v):
        xp = get_xp(p, v)
        r2 = xp.maximum(minkowski(xp, v, v), 0.0)
        small = self.small_mask(xp, r2)
        r = xp.sqrt(xp.where(small, 1.0, r2))
        cosh_r = xp.where(small, 1.0 + r2 / 2.0, xp.cosh(r))
        sinhc_r = xp.where(small, 1.0 + r2 / 6.0, xp.sinh(r) / r)
        return self.project_point(expand(cosh_r) * p + expand(sinhc_r) * v)

    def log(self, p, q):
        xp = get_xp(p, q)
        cosh_a = -minkowski(xp, p, q)
        w = q - expand(cosh_a) * p
        sinh2 = xp.maximum(minkowski(xp, w, w), 0.0)
        small = self.small_mask(xp, sinh2)
        sinh_a = xp.sqrt(xp.where(small, 1.0, sinh2))
        factor = xp.where(small, 1.0 - sinh2 / 6.0, xp.arcsinh(sinh_a) / sinh_a)
        return expand(factor) * w

    def dist(self, p, q):
        xp = get_xp(p, q)
        cosh_a = -minkowski(xp, p, q)
        w = q - expand(cosh_a) * p
        return xp.arcsinh(safe_sqrt(xp, minkowski(xp, w, w)))

    def transport(self, p, q, v):
        xp = get_xp(p, q, v)
        coef = minkowski(xp, q, v) / (1.0 - minkowski(xp, p, q))
        moved = self.proj(q, v + expand(coef) * (p + q))
        # The Lorentzian form cancels badly far from the origin; restore the norm of v.
        target = self.norm(p, v)
        current = self.norm(q, moved)
        scale = xp.where(current > 0.0, target / xp.where(current > 0.0, current, 1.0), 1.0)
        return expand(scale) * moved

    def proj(self, p, v):
        xp = get_xp(p, v)
        return v + expand(minkowski(xp, p, v)) * p

    def egrad_to_rgrad(self, p, egrad):
        xp = get_xp(p, egrad)
        sign = xp.concatenate([-xp.ones(1), xp.ones(self.dim)])
        return self.proj(p, egrad * sign)

    def project_point(self, x):
        xp = get_xp(x)
        spatial = x[..., 1:]
        x0 = xp.sqrt(1.0 + dot(xp, spatial, spatial))
        return xp.concatenate([x0[..., None], spatial], axis=-1)

    def point_residual(self, x):
        x = np.asarray(x, dtype=float)
        residual = np.abs(minkowski(np, x, x) + 1.0) / np.maximum(1.0, np.sum(x * x, axis=-1))
        return np.where(x[..., 0] > 0, residual, np.inf)

    def tangent_residual(self, p, v):
        p = np.asarray(p, dtype=float)
        v = np.asarray(v, dtype=float)
        scale = np.maximum(1.0, np.linalg.norm(p, axis=-1) * np.linalg.norm(v, axis=-1))
        return np.abs(minkowski(np, p, v)) / scale
