import numpy as np

from curve.discrete_curve import DiscreteCurve
from curve.vector_field import VectorField
from manifold.errors import InvalidArgumentError


def derived_rng(seed: int, *keys) -> np.random.Generator:
    """
    Independent generator per trial, so results do not depend on evaluation order.
    """
    return np.random.default_rng([int(seed)] + [int(key) for key in keys])


def default_max_mode(curve: DiscreteCurve) -> int:
    return max(1, curve.samples // 8)


def _check_mode(curve: DiscreteCurve, max_mode: int) -> int:
    if max_mode is None:
        return default_max_mode(curve)
    if int(max_mode) != max_mode or max_mode < 0 or max_mode > curve.samples // 2:
        raise InvalidArgumentError(f"max_mode must lie in [0, {curve.samples // 2}], got {max_mode}.")
    return int(max_mode)


def fourier_field(curve: DiscreteCurve, mode: int, direction, sine: bool = False) -> VectorField:
    """
    direction * cos(mode theta) (or sin), projected onto the tangent spaces.
    """
    theta = curve.domain.grid
    wave = np.sin(mode * theta) if sine else np.cos(mode * theta)
    return VectorField.from_ambient(curve, wave[:, None] * np.asarray(direction, dtype=float)[None, :])


def fourier_basis(curve: DiscreteCurve, max_mode: int = None) -> np.ndarray:
    """
    Ambient Fourier modes 0..max_mode in every coordinate direction, projected.

    :return: Array of shape (B, N, D).
    """
    max_mode = _check_mode(curve, max_mode)
    theta = curve.domain.grid
    waves = [np.ones_like(theta)]
    for j in range(1, max_mode + 1):
        waves += [np.cos(j * theta), np.sin(j * theta)]
    eye = np.eye(curve.manifold.ambient_dim)
    ambient = np.stack(waves)[:, None, :, None] * eye[None, :, None, :]
    ambient = ambient.reshape(-1, curve.samples, curve.manifold.ambient_dim)
    return np.asarray(curve.space.proj(curve.points, ambient))


def random_fields(curve: DiscreteCurve, count: int, rng: np.random.Generator, max_mode: int = None) -> list:
    """
    Smooth random fields by truncated Fourier synthesis with coefficients decaying like 1/(1+j)^2.

    :param curve: The curve.
    :param count: Number of fields.
    :param rng: Source of the coefficients.
    :param max_mode: Highest mode, N/8 by default to keep high derivatives resolved.
    :return: List of VectorFields.
    """
    max_mode = _check_mode(curve, max_mode)
    theta = curve.domain.grid
    modes = np.arange(max_mode + 1)
    decay = 1.0 / (1.0 + modes) ** 2
    fields = []
    for _ in range(count):
        coeffs = rng.standard_normal((2, max_mode + 1, curve.manifold.ambient_dim)) * decay[None, :, None]
        ambient = np.cos(np.outer(theta, modes)) @ coeffs[0] + np.sin(np.outer(theta, modes)) @ coeffs[1]
        fields.append(VectorField.from_ambient(curve, ambient))
    return fields
