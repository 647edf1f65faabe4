import math

import numpy as np

from curve.discrete_curve import DiscreteCurve, build_curve
from curve.domain import Domain
from manifold.errors import InvalidArgumentError
from manifold.manifold_spec import ManifoldSpec

_FAMILY_DICT = {}


def register_family(name):
    def decorator(fn):
        _FAMILY_DICT[name] = fn
        return fn

    return decorator


def family_names() -> list:
    return sorted(_FAMILY_DICT)


def make_curve(name: str, samples: int, **params) -> DiscreteCurve:
    """
    Build a preset curve.

    :param name: Registered family name.
    :param samples: Number of nodes N.
    :param params: Family parameters (radius, colatitude, scale, dim, ...).
    :return: The DiscreteCurve.
    """
    if name not in _FAMILY_DICT:
        raise InvalidArgumentError(f"Unknown curve family '{name}'. Available families: {family_names()}")
    try:
        return _FAMILY_DICT[name](samples, **params)
    except TypeError as e:
        raise InvalidArgumentError(f"curve family '{name}': {e}")


def curve_from_preset(data: dict) -> DiscreteCurve:
    """
    :param data: {"name": ..., "samples": N, ...family parameters}
    """
    if not isinstance(data, dict) or "name" not in data or "samples" not in data:
        raise InvalidArgumentError("curve preset needs 'name' and 'samples'.")
    params = {key: value for key, value in data.items() if key not in ("name", "samples")}
    return make_curve(data["name"], data["samples"], **params)


def _planar(domain: Domain, x, y, dim: int, scale: float) -> DiscreteCurve:
    if dim < 2:
        raise InvalidArgumentError(f"planar families need dim >= 2, got {dim}.")
    points = np.zeros((domain.samples, dim))
    points[:, 0] = scale * x
    points[:, 1] = scale * y
    return build_curve(ManifoldSpec("euclidean", dim), domain, points)


@register_family("circle")
def circle(samples, radius=1.0, scale=1.0, dim=2):
    domain = Domain("closed", samples)
    t = domain.grid
    return _planar(domain, radius * np.cos(t), radius * np.sin(t), dim, scale)


@register_family("ellipse")
def ellipse(samples, a=2.0, b=1.0, scale=1.0, dim=2):
    domain = Domain("closed", samples)
    t = domain.grid
    return _planar(domain, a * np.cos(t), b * np.sin(t), dim, scale)


@register_family("wavy_circle")
def wavy_circle(samples, amplitude=0.2, lobes=3, scale=1.0, dim=2):
    domain = Domain("closed", samples)
    t = domain.grid
    r = 1.0 + amplitude * np.cos(lobes * t)
    return _planar(domain, r * np.cos(t), r * np.sin(t), dim, scale)


@register_family("segment")
def segment(samples, length=2.0 * math.pi, scale=1.0, dim=2):
    """
    Straight segment (theta l / 2pi, 0).
    """
    domain = Domain("open", samples)
    t = domain.grid
    return _planar(domain, length * t / (2.0 * math.pi), 0.0 * t, dim, scale)


@register_family("arc")
def arc(samples, radius=1.0, angle=math.pi, scale=1.0, dim=2):
    domain = Domain("open", samples)
    s = angle * domain.grid / (2.0 * math.pi)
    return _planar(domain, radius * np.cos(s), radius * np.sin(s), dim, scale)


def _sphere_points(colatitude, longitude, radius):
    return radius * np.stack(
        [np.sin(colatitude) * np.cos(longitude), np.sin(colatitude) * np.sin(longitude), np.cos(colatitude) + 0.0 * longitude],
        axis=-1,
    )


@register_family("sphere_circle")
def sphere_circle(samples, colatitude=0.5, radius=1.0):
    """
    Parallel circle around the north pole of the 2-sphere.
    """
    domain = Domain("closed", samples)
    return build_curve(ManifoldSpec("sphere", 2, radius), domain, _sphere_points(colatitude, domain.grid, radius))


@register_family("sphere_arc")
def sphere_arc(samples, colatitude=0.5, angle=math.pi, radius=1.0):
    domain = Domain("open", samples)
    longitude = angle * domain.grid / (2.0 * math.pi)
    return build_curve(ManifoldSpec("sphere", 2, radius), domain, _sphere_points(colatitude, longitude, radius))


@register_family("hyperbolic_circle")
def hyperbolic_circle(samples, radius=0.5):
    """
    Geodesic circle of the given radius around the hyperboloid vertex.
    """
    domain = Domain("closed", samples)
    t = domain.grid
    points = np.stack([np.cosh(radius) + 0.0 * t, np.sinh(radius) * np.cos(t), np.sinh(radius) * np.sin(t)], axis=-1)
    return build_curve(ManifoldSpec("hyperbolic", 2), domain, points)
