import math

import numpy as np
import pytest

from curve.discrete_curve import build_curve
from curve.domain import Domain
from curve.vector_field import VectorField
from manifold.errors import AdjacencyViolationError, InvalidArgumentError, UnsupportedOrderError
from manifold.manifold_spec import ManifoldSpec
from metric.curve_path import CurvePath, constant_speed_times, nodal_velocities, path_energy, step_energies
from metric.metric_spec import MetricSpec, coefficient_derivatives, coefficients
from metric.sobolev_metric import field_norm, inner_G, inner_H

PLANE = ManifoldSpec("euclidean", 2)
SPHERE = ManifoldSpec("sphere", 2)


def planar(fn, n, topology="closed"):
    domain = Domain(topology, n)
    return build_curve(PLANE, domain, np.stack(fn(domain.grid), axis=-1))


def circle(n, radius=1.0):
    return planar(lambda t: (radius * np.cos(t), radius * np.sin(t)), n)


def ellipse(n, scale=1.0):
    return planar(lambda t: (2.0 * scale * np.cos(t), scale * np.sin(t)), n)


def field(curve, fn):
    return VectorField(curve, np.stack(fn(curve.domain.grid), axis=-1))


class TestCoefficients:
    def test_constant_ignores_length(self):
        assert coefficients(MetricSpec.constant(1, 0, 1), 17.0) == [1.0, 0.0, 1.0]

    def test_scale_invariant(self):
        assert coefficients(MetricSpec.scale_invariant(1, 0, 1), 2.0) == pytest.approx([2.0 ** -3, 0.0, 2.0])

    def test_custom(self):
        spec = MetricSpec.custom(lambda length: 1.0 + 0.0 * length, lambda length: 1.0 / length)
        assert coefficients(spec, 4.0)[1] == pytest.approx(0.25)

    def test_derivatives(self):
        assert coefficient_derivatives(MetricSpec.constant(1, 1), 3.0) == [0.0, 0.0]
        assert coefficient_derivatives(MetricSpec.scale_invariant(1, 1), 2.0) == pytest.approx([-3 * 2.0 ** -4, -1 * 2.0 ** -2])
        spec = MetricSpec.custom(lambda length: length ** 2, lambda length: 1.0 / length)
        assert coefficient_derivatives(spec, 2.0) == pytest.approx([4.0, -0.25], rel=1e-8)

    def test_nonpositive_length(self):
        with pytest.raises(InvalidArgumentError):
            coefficients(MetricSpec.constant(1, 1), 0.0)

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            MetricSpec.constant(0, 1)
        with pytest.raises(InvalidArgumentError):
            MetricSpec.constant(1, -1, 1)
        with pytest.raises(InvalidArgumentError):
            MetricSpec(order=2, family="constant", coeffs=(1, 1))
        with pytest.raises(InvalidArgumentError):
            MetricSpec.from_dict({"order": 1, "family": "weird", "coeffs": [1, 1]})

    def test_dict_round_trip(self):
        spec = MetricSpec.scale_invariant(1, 0.5, 2)
        assert MetricSpec.from_dict(spec.to_dict()) == spec
        assert spec.to_dict() == {"order": 2, "family": "scale_invariant", "coeffs": [1.0, 0.5, 2.0]}


class TestInnerG:
    def test_constant_field_on_circle(self):
        curve = circle(512)
        h = VectorField(curve, np.tile([1.0, 0.0], (512, 1)))
        assert inner_G(MetricSpec.constant(1, 0, 1), curve, h, h) == pytest.approx(2.0 * math.pi, abs=1e-4)

    def test_radial_field_on_circle(self):
        curve = circle(256)
        h = field(curve, lambda t: (np.cos(t), np.sin(t)))
        assert inner_G(MetricSpec.constant(1, 0, 1), curve, h, h) == pytest.approx(4.0 * math.pi, abs=1e-3)

    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    def test_scale_invariance(self, alpha):
        spec = MetricSpec.scale_invariant(1, 0.5, 1)
        curve = ellipse(64)
        scaled = ellipse(64, scale=alpha)
        h = field(curve, lambda t: (np.sin(2 * t), np.cos(t)))
        h_scaled = VectorField(scaled, alpha * h.vectors)
        assert inner_G(spec, scaled, h_scaled, h_scaled) == pytest.approx(inner_G(spec, curve, h, h), rel=1e-6)

    def test_symmetry_and_linearity(self):
        spec = MetricSpec.constant(1, 0.3, 0.7)
        curve = ellipse(64)
        rng = np.random.default_rng(0)
        h, k, m = (VectorField(curve, rng.standard_normal((64, 2))) for _ in range(3))
        hk = inner_G(spec, curve, h, k)
        assert hk == pytest.approx(inner_G(spec, curve, k, h), rel=1e-12)
        combined = VectorField(curve, 2.0 * h.vectors - 3.0 * m.vectors)
        expected = 2.0 * hk - 3.0 * inner_G(spec, curve, m, k)
        assert inner_G(spec, curve, combined, k) == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_positive_definite_on_sphere(self):
        domain = Domain("closed", 32)
        t = domain.grid
        curve = build_curve(SPHERE, domain, np.stack([0.6 * np.cos(t), 0.6 * np.sin(t), 0.8 + 0.0 * t], axis=-1))
        rng = np.random.default_rng(1)
        spec = MetricSpec.constant(1, 0, 1)
        for _ in range(5):
            h = VectorField.from_ambient(curve, rng.standard_normal((32, 3)))
            assert inner_G(spec, curve, h, h) > 0

    @pytest.mark.parametrize(
        "spec",
        [MetricSpec.constant(1, 1), MetricSpec.constant(1, 0, 1), MetricSpec.scale_invariant(1, 1, 1)],
        ids=["constant_h1", "constant_h2", "scale_invariant_h2"],
    )
    def test_reparametrization_invariance(self, spec):
        phi = lambda t: t + 0.3 * np.sin(t)  # noqa: E731
        errors = []
        for n in (64, 128, 256):
            base = ellipse(n)
            warped = planar(lambda t: (2.0 * np.cos(phi(t)), np.sin(phi(t))), n)
            h = field(base, lambda t: (np.cos(t), np.sin(2 * t)))
            h_warped = field(warped, lambda t: (np.cos(phi(t)), np.sin(2 * phi(t))))
            errors.append(abs(inner_G(spec, warped, h_warped, h_warped) - inner_G(spec, base, h, h)))
        orders = [math.log2(errors[0] / errors[1]), math.log2(errors[1] / errors[2])]
        assert all(1.7 <= order <= 2.3 for order in orders)

    def test_fields_on_other_curve(self):
        curve = circle(32)
        other = circle(32, radius=2.0)
        h = VectorField.zeros(other)
        with pytest.raises(InvalidArgumentError):
            inner_G(MetricSpec.constant(1, 1), curve, h, h)

    def test_order_above_limit(self):
        curve = circle(32)
        h = VectorField.zeros(curve)
        with pytest.raises(UnsupportedOrderError):
            inner_G(MetricSpec.constant(*([1.0] * 10)), curve, h, h)


class TestInnerH:
    def test_constant_field_on_segment(self):
        curve = planar(lambda t: (t, 0.0 * t), 64, topology="open")
        h = VectorField(curve, np.tile([0.6, 0.8], (64, 1)))
        assert inner_H(curve, h, h, order=2) == pytest.approx(2.0 * math.pi, abs=1e-6)

    def test_radial_field_on_circle(self):
        curve = circle(512)
        h = field(curve, lambda t: (np.cos(t), np.sin(t)))
        assert inner_H(curve, h, h, order=2) == pytest.approx(4.0 * math.pi, abs=1e-3)

    def test_bilinearity(self):
        curve = ellipse(64)
        h = field(curve, lambda t: (np.cos(t), np.sin(3 * t)))
        k = field(curve, lambda t: (np.sin(t), 1.0 + 0.0 * t))
        assert inner_H(curve, h.scaled(2.0), k) == 2.0 * inner_H(curve, h, k)


class TestFieldNorm:
    def test_unit_circle(self):
        curve = circle(512)
        h = VectorField(curve, np.tile([1.0, 0.0], (512, 1)))
        assert field_norm(curve, h, "L2_ds") == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-4)

    def test_radius_two(self):
        curve = circle(512, radius=2.0)
        h = VectorField(curve, np.tile([0.0, 1.0], (512, 1)))
        assert field_norm(curve, h, "L2_ds") == pytest.approx(math.sqrt(4.0 * math.pi), rel=1e-4)
        assert field_norm(curve, h, "L2_dtheta") == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-12)

    def test_sup_norm(self):
        curve = circle(512)
        h = field(curve, lambda t: (np.sin(t), 0.0 * t))
        assert field_norm(curve, h, "Linf") == pytest.approx(1.0, abs=1e-6)
        assert field_norm(curve, VectorField.zeros(curve), "L2_ds") == 0.0

    def test_unknown_norm(self):
        curve = circle(32)
        with pytest.raises(InvalidArgumentError):
            field_norm(curve, VectorField.zeros(curve), "H1")


def translation_path(steps, n=64):
    domain = Domain("open", n)
    t = domain.grid
    base = np.stack([t, 0.0 * t], axis=-1)
    curves = [build_curve(PLANE, domain, base + [0.0, s]) for s in np.linspace(0.0, 1.0, steps + 1)]
    return CurvePath(curves)


class TestPathEnergy:
    def test_stationary(self):
        curve = circle(32)
        assert path_energy(MetricSpec.constant(1, 0, 1), CurvePath([curve] * 5)) == (0.0, 0.0)

    def test_translated_segment(self):
        energy, length = path_energy(MetricSpec.constant(1, 0, 1), translation_path(8))
        assert energy == pytest.approx(2.0 * math.pi, abs=1e-3)
        assert length == pytest.approx(math.sqrt(2.0 * math.pi), abs=1e-3)

    def test_shrinking_segment_length(self):
        steps = 200
        domain = Domain("open", 32)
        theta = domain.grid
        times = np.linspace(0.0, 1.0 - 1.0 / steps, steps + 1)
        curves = [build_curve(PLANE, domain, np.stack([(1 - t) * (theta - math.pi), 0.0 * theta], axis=-1)) for t in times]
        _, length = path_energy(MetricSpec.constant(1, 0, 1), CurvePath(curves, times))
        expected = math.sqrt(2.0 * math.pi) * (math.pi / math.sqrt(3.0)) * (2.0 / 3.0)
        assert length == pytest.approx(expected, rel=0.01)

    def test_cauchy_schwarz_and_retiming(self):
        spec = MetricSpec.constant(1, 0.5, 1)
        domain = Domain("closed", 32)
        theta = domain.grid
        curves = []
        for s in [0.0, 0.05, 0.1, 0.4, 0.5, 1.0]:
            points = np.stack([(1 + s) * np.cos(theta) + s, (1 + 0.5 * s) * np.sin(theta)], axis=-1)
            curves.append(build_curve(PLANE, domain, points))
        path = CurvePath(curves)
        energy, length = path_energy(spec, path)
        assert length ** 2 <= energy
        retimed = path.with_times(constant_speed_times(spec, path))
        energy, length = path_energy(spec, retimed)
        assert length ** 2 == pytest.approx(energy, rel=1e-8)
        assert np.allclose(step_energies(spec, retimed), step_energies(spec, retimed)[0], rtol=1e-8)

    def test_time_adjacency(self):
        domain = Domain("closed", 16)
        t = domain.grid
        north = np.stack([0.3 * np.cos(t), 0.3 * np.sin(t), np.sqrt(1 - 0.09) + 0.0 * t], axis=-1)
        south = north * [1.0, 1.0, -1.0]
        with pytest.raises(AdjacencyViolationError):
            CurvePath([build_curve(SPHERE, domain, north), build_curve(SPHERE, domain, south)])

    def test_mismatched_grids(self):
        with pytest.raises(InvalidArgumentError):
            CurvePath([circle(16), circle(32)])

    def test_nodal_velocities_of_translation(self):
        velocities = nodal_velocities(translation_path(4, n=16))
        assert velocities.shape == (5, 16, 2)
        assert np.allclose(velocities, [0.0, 1.0], atol=1e-12)

    def test_dict_round_trip(self):
        path = translation_path(3, n=16)
        data = path.to_dict(MetricSpec.constant(1, 0, 1))
        assert data["metric"]["family"] == "constant"
        loaded = CurvePath.from_dict(data)
        assert np.array_equal(loaded.points, path.points)
        assert np.array_equal(loaded.times, path.times)
