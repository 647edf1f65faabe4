"""
Single-point Riemannian primitives on validated Points and Tangents.

The array kernels live on the backends (manifold.space); these wrappers add the
argument checks and the injectivity guard.
"""
import numpy as np

from _config.app_config import get_config
from manifold.errors import InjectivityViolationError, InvalidArgumentError
from manifold.manifold_spec import ManifoldSpec
from manifold.tangent import Point, Tangent


def _check_base(p: Point, *vectors: Tangent):
    for v in vectors:
        if v.base is p:
            continue
        if not np.allclose(v.base.coords, p.coords, rtol=0.0, atol=1e-12):
            raise InvalidArgumentError(f"tangent based at {v.base.to_list()} used at {p.to_list()}.")


def check_injectivity(manifold: ManifoldSpec, distance) -> None:
    """
    Raise when a geodesic distance reaches the injectivity radius (minus the configured margin).
    """
    limit = manifold.injectivity_radius - get_config().get_numeric("injectivity_margin") * manifold.radius
    worst = float(np.max(distance)) if np.size(distance) else 0.0
    if worst > limit:
        raise InjectivityViolationError(
            f"points at distance {worst:.6f} exceed the injectivity limit {limit:.6f} of the {manifold.kind}."
        )


def inner(manifold: ManifoldSpec, p: Point, u: Tangent, v: Tangent) -> float:
    _check_base(p, u, v)
    return float(manifold.space.inner(p.coords, u.vec, v.vec))


def norm(manifold: ManifoldSpec, p: Point, v: Tangent) -> float:
    _check_base(p, v)
    return float(manifold.space.norm(p.coords, v.vec))


def exp(manifold: ManifoldSpec, p: Point, v: Tangent) -> Point:
    _check_base(p, v)
    return Point(np.asarray(manifold.space.exp(p.coords, v.vec)))


def log(manifold: ManifoldSpec, p: Point, q: Point) -> Tangent:
    space = manifold.space
    check_injectivity(manifold, space.dist(p.coords, q.coords))
    return Tangent(p, np.asarray(space.log(p.coords, q.coords)))


def dist(manifold: ManifoldSpec, p: Point, q: Point) -> float:
    return float(manifold.space.dist(p.coords, q.coords))


def transport(manifold: ManifoldSpec, p: Point, q: Point, v: Tangent) -> Tangent:
    _check_base(p, v)
    space = manifold.space
    check_injectivity(manifold, space.dist(p.coords, q.coords))
    return Tangent(q, np.asarray(space.transport(p.coords, q.coords, v.vec)))


def curvature(manifold: ManifoldSpec, p: Point, x: Tangent, y: Tangent, z: Tangent) -> Tangent:
    """
    Riemann tensor R(X,Y)Z = K (g(Y,Z) X - g(X,Z) Y).
    """
    _check_base(p, x, y, z)
    return Tangent(p, np.asarray(manifold.space.curvature(p.coords, x.vec, y.vec, z.vec)))
