import numpy as np
import pytest

from analysis.curve_families import circle, segment, sphere_circle
from analysis.field_sampler import default_max_mode, derived_rng, fourier_basis, fourier_field, random_fields
from manifold.errors import InvalidArgumentError


def test_derived_rng_is_order_independent():
    first = derived_rng(7, 3).standard_normal(4)
    derived_rng(7, 2).standard_normal(4)
    assert np.array_equal(first, derived_rng(7, 3).standard_normal(4))
    assert not np.array_equal(first, derived_rng(7, 4).standard_normal(4))


def test_default_max_mode():
    assert default_max_mode(circle(64)) == 8
    assert default_max_mode(circle(8)) == 1


def test_fourier_field_is_tangent_on_the_sphere():
    curve = sphere_circle(64, colatitude=0.6)
    h = fourier_field(curve, 2, [1.0, 0.0, 0.0])
    assert np.max(np.abs(np.sum(curve.points * h.vectors, axis=-1))) < 1e-12


def test_fourier_field_on_a_plane_curve():
    curve = circle(32)
    h = fourier_field(curve, 3, [0.0, 2.0], sine=True)
    assert np.allclose(h.vectors[:, 1], 2.0 * np.sin(3 * curve.domain.grid))
    assert np.allclose(h.vectors[:, 0], 0.0)


def test_fourier_basis_shape():
    curve = sphere_circle(32)
    basis = fourier_basis(curve, 2)
    assert basis.shape == (5 * 3, 32, 3)
    assert np.max(np.abs(np.sum(curve.points[None] * basis, axis=-1))) < 1e-12


def test_mode_range():
    with pytest.raises(InvalidArgumentError):
        fourier_basis(circle(16), 9)
    with pytest.raises(InvalidArgumentError):
        random_fields(circle(16), 1, derived_rng(0), max_mode=-1)


class TestRandomFields:
    def test_seeded(self):
        curve = segment(32)
        first = random_fields(curve, 3, derived_rng(1))
        second = random_fields(curve, 3, derived_rng(1))
        assert len(first) == 3
        for a, b in zip(first, second):
            assert np.array_equal(a.vectors, b.vectors)
        assert not np.array_equal(first[0].vectors, first[1].vectors)

    def test_band_limited(self):
        curve = circle(64)
        h = random_fields(curve, 1, derived_rng(2), max_mode=4)[0]
        spectrum = np.abs(np.fft.rfft(h.vectors[:, 0]))
        assert np.max(spectrum[5:]) < 1e-10 * np.max(spectrum)

    def test_tangent_on_the_sphere(self):
        curve = sphere_circle(32)
        for h in random_fields(curve, 4, derived_rng(3)):
            assert np.max(np.abs(np.sum(curve.points * h.vectors, axis=-1))) < 1e-12
