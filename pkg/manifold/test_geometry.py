import math

import numpy as np
import pytest

from manifold import geometry
from manifold.errors import InjectivityViolationError, InvalidArgumentError
from manifold.manifold_spec import ManifoldSpec
from manifold.tangent import make_point, make_tangent

MANIFOLDS = [
    ManifoldSpec("euclidean", 3),
    ManifoldSpec("sphere", 2),
    ManifoldSpec("sphere", 3, radius=2.5),
    ManifoldSpec("hyperbolic", 2),
]


def random_point(manifold, rng):
    space = manifold.space
    return space.project_point(rng.normal(size=manifold.ambient_dim))


def random_tangent(manifold, p, rng, scale=1.0):
    return scale * manifold.space.proj(p, rng.normal(size=manifold.ambient_dim))


class TestExamples:
    def test_euclidean_inner_orthogonal(self):
        m = ManifoldSpec("euclidean", 2)
        p = make_point(m, [0.0, 0.0])
        u = make_tangent(m, p, [1.0, 0.0])
        v = make_tangent(m, p, [0.0, 1.0])
        assert geometry.inner(m, p, u, v) == 0.0

    def test_sphere_inner_restriction(self):
        m = ManifoldSpec("sphere", 2)
        p = make_point(m, [0.0, 0.0, 1.0])
        u = make_tangent(m, p, [1.0, 0.0, 0.0])
        assert geometry.inner(m, p, u, u) == 1.0

    def test_hyperbolic_minkowski_norm(self):
        m = ManifoldSpec("hyperbolic", 2)
        p = make_point(m, [1.0, 0.0, 0.0])
        u = make_tangent(m, p, [0.0, 2.0, 0.0])
        assert geometry.inner(m, p, u, u) == pytest.approx(4.0)

    def test_hyperbolic_off_vertex(self):
        m = ManifoldSpec("hyperbolic", 2)
        r = 0.7
        p = make_point(m, [math.cosh(r), math.sinh(r), 0.0])
        u = make_tangent(m, p, [2.0 * math.sinh(r), 2.0 * math.cosh(r), 0.0])
        assert geometry.inner(m, p, u, u) == pytest.approx(4.0, abs=1e-12)

    @pytest.mark.parametrize("manifold", MANIFOLDS)
    def test_exp_of_zero(self, manifold):
        p = make_point(manifold, manifold.origin())
        zero = make_tangent(manifold, p, np.zeros(manifold.ambient_dim))
        assert np.allclose(geometry.exp(manifold, p, zero).coords, p.coords, atol=1e-15)

    def test_sphere_exp_quarter_turn(self):
        m = ManifoldSpec("sphere", 2)
        p = make_point(m, [0.0, 0.0, 1.0])
        v = make_tangent(m, p, [math.pi / 2, 0.0, 0.0])
        assert np.allclose(geometry.exp(m, p, v).coords, [1.0, 0.0, 0.0], atol=1e-15)

    def test_euclidean_exp_and_log(self):
        m = ManifoldSpec("euclidean", 2)
        p = make_point(m, [1.0, 2.0])
        q = make_point(m, [-1.0, 0.5])
        assert np.allclose(geometry.log(m, p, q).vec, [-2.0, -1.5])
        v = make_tangent(m, p, [0.5, 0.5])
        assert np.allclose(geometry.exp(m, p, v).coords, [1.5, 2.5])

    @pytest.mark.parametrize("manifold", MANIFOLDS)
    def test_log_of_same_point(self, manifold):
        p = make_point(manifold, manifold.origin())
        assert np.allclose(geometry.log(manifold, p, p).vec, 0.0, atol=1e-15)

    def test_sphere_log_quarter_turn(self):
        m = ManifoldSpec("sphere", 2)
        p = make_point(m, [0.0, 0.0, 1.0])
        q = make_point(m, [1.0, 0.0, 0.0])
        v = geometry.log(m, p, q)
        assert np.allclose(v.vec, [math.pi / 2, 0.0, 0.0], atol=1e-14)

    def test_sphere_antipodal_log_rejected(self):
        m = ManifoldSpec("sphere", 2)
        p = make_point(m, [0.0, 0.0, 1.0])
        q = make_point(m, [0.0, 0.0, -1.0])
        with pytest.raises(InjectivityViolationError):
            geometry.log(m, p, q)

    def test_sphere_transport_fixes_normal_direction(self):
        m = ManifoldSpec("sphere", 2)
        p = make_point(m, [0.0, 0.0, 1.0])
        q = make_point(m, [1.0, 0.0, 0.0])
        v = make_tangent(m, p, [0.0, 1.0, 0.0])
        assert np.allclose(geometry.transport(m, p, q, v).vec, [0.0, 1.0, 0.0])

    def test_sphere_transport_along_direction(self):
        m = ManifoldSpec("sphere", 2)
        p = make_point(m, [0.0, 0.0, 1.0])
        q = make_point(m, [1.0, 0.0, 0.0])
        v = make_tangent(m, p, [1.0, 0.0, 0.0])
        assert np.allclose(geometry.transport(m, p, q, v).vec, [0.0, 0.0, -1.0], atol=1e-15)

    def test_euclidean_transport_is_identity(self):
        m = ManifoldSpec("euclidean", 3)
        p = make_point(m, [0.0, 0.0, 0.0])
        q = make_point(m, [1.0, 2.0, 3.0])
        v = make_tangent(m, p, [0.3, -0.1, 2.0])
        assert np.array_equal(geometry.transport(m, p, q, v).vec, v.vec)

    def test_curvature_examples(self):
        flat = ManifoldSpec("euclidean", 2)
        p = make_point(flat, [0.0, 0.0])
        x = make_tangent(flat, p, [1.0, 0.0])
        y = make_tangent(flat, p, [0.0, 1.0])
        assert np.allclose(geometry.curvature(flat, p, x, y, y).vec, 0.0)

        sphere = ManifoldSpec("sphere", 2)
        p = make_point(sphere, [0.0, 0.0, 1.0])
        x = make_tangent(sphere, p, [1.0, 0.0, 0.0])
        y = make_tangent(sphere, p, [0.0, 1.0, 0.0])
        assert np.allclose(geometry.curvature(sphere, p, x, y, y).vec, x.vec)
        assert np.allclose(geometry.curvature(sphere, p, x, x, y).vec, 0.0)

    def test_base_mismatch_rejected(self):
        m = ManifoldSpec("sphere", 2)
        p = make_point(m, [0.0, 0.0, 1.0])
        q = make_point(m, [1.0, 0.0, 0.0])
        u = make_tangent(m, q, [0.0, 1.0, 0.0])
        with pytest.raises(InvalidArgumentError):
            geometry.inner(m, p, u, u)

    def test_off_manifold_point_rejected(self):
        m = ManifoldSpec("sphere", 2)
        with pytest.raises(InvalidArgumentError):
            make_point(m, [0.0, 0.0, 1.1])

    def test_non_tangent_rejected(self):
        m = ManifoldSpec("hyperbolic", 2)
        p = make_point(m, [1.0, 0.0, 0.0])
        with pytest.raises(InvalidArgumentError):
            make_tangent(m, p, [1.0, 0.0, 0.0])


@pytest.mark.parametrize("manifold", MANIFOLDS)
class TestInvariants:
    def test_exp_log_inversion(self, manifold):
        rng = np.random.default_rng(1)
        space = manifold.space
        inj = min(manifold.injectivity_radius, 6.0)
        for _ in range(50):
            p = random_point(manifold, rng)
            v = random_tangent(manifold, p, rng)
            v = v * (0.9 * inj * rng.uniform()) / float(space.norm(p, v))
            recovered = space.log(p, space.exp(p, v))
            assert np.linalg.norm(recovered - v) <= 1e-9 * (1.0 + np.linalg.norm(v))

    def test_log_norm_is_distance(self, manifold):
        rng = np.random.default_rng(2)
        space = manifold.space
        for _ in range(20):
            p = random_point(manifold, rng)
            v = random_tangent(manifold, p, rng, scale=0.5)
            q = space.exp(p, v)
            assert float(space.norm(p, space.log(p, q))) == pytest.approx(float(space.dist(p, q)), abs=1e-12)
            assert float(space.dist(p, q)) == pytest.approx(float(space.norm(p, v)), abs=1e-10)

    def test_tiny_vectors_use_series(self, manifold):
        rng = np.random.default_rng(3)
        space = manifold.space
        p = random_point(manifold, rng)
        v = random_tangent(manifold, p, rng, scale=1e-9)
        recovered = space.log(p, space.exp(p, v))
        assert np.all(np.isfinite(recovered))
        assert np.linalg.norm(recovered - v) < 1e-12 * (1.0 + np.linalg.norm(p))

    def test_transport_isometry_and_reversibility(self, manifold):
        rng = np.random.default_rng(4)
        space = manifold.space
        for _ in range(20):
            p = random_point(manifold, rng)
            q = space.exp(p, random_tangent(manifold, p, rng, scale=0.8))
            v = random_tangent(manifold, p, rng)
            moved = space.transport(p, q, v)
            assert float(space.norm(q, moved)) == pytest.approx(float(space.norm(p, v)), abs=1e-12)
            assert float(space.tangent_residual(q, moved)) < 1e-12
            back = space.transport(q, p, moved)
            assert np.linalg.norm(back - v) < 1e-9

    def test_curvature_symmetries(self, manifold):
        rng = np.random.default_rng(5)
        space = manifold.space
        p = random_point(manifold, rng)
        x, y, z, w = (random_tangent(manifold, p, rng) for _ in range(4))

        def r(a, b, c):
            return space.curvature(p, a, b, c)

        assert np.linalg.norm(r(x, y, z) + r(y, x, z)) < 1e-12
        bianchi = r(x, y, z) + r(y, z, x) + r(z, x, y)
        assert np.linalg.norm(bianchi) < 1e-12
        assert abs(space.inner(p, r(x, y, z), w) + space.inner(p, r(x, y, w), z)) < 1e-12

    def test_frame_is_orthonormal(self, manifold):
        rng = np.random.default_rng(6)
        space = manifold.space
        p = random_point(manifold, rng)
        frame = space.frame(p)
        assert frame.shape == (manifold.dim, manifold.ambient_dim)
        gram = space.inner(p, frame[:, None, :], frame[None, :, :])
        assert np.allclose(gram, np.eye(manifold.dim), atol=1e-12)
        assert np.all(space.tangent_residual(p, frame) < 1e-12)


class TestHyperbolicTransport:
    def test_transport_isometry_far_from_origin(self):
        m = ManifoldSpec("hyperbolic", 2)
        space = m.space
        rng = np.random.default_rng(14)
        for _ in range(200):
            p = space.project_point(np.concatenate([[0.0], rng.uniform(-6.0, 6.0, size=2)]))
            step = random_tangent(m, p, rng)
            q = space.exp(p, 0.8 * rng.uniform() * step / float(space.norm(p, step)))
            v = random_tangent(m, p, rng)
            v = v / float(space.norm(p, v))
            moved = space.transport(p, q, v)
            assert float(space.norm(q, moved)) == pytest.approx(1.0, abs=1e-12)
            assert float(space.tangent_residual(q, moved)) < 1e-12


class TestManifoldSpec:
    def test_derived_constants(self):
        sphere = ManifoldSpec("sphere", 2, radius=2.0)
        assert sphere.sectional_curvature == 0.25
        assert sphere.injectivity_radius == pytest.approx(2.0 * math.pi)
        hyperbolic = ManifoldSpec("hyperbolic", 3)
        assert hyperbolic.curvature_bound == 1.0
        assert math.isinf(hyperbolic.injectivity_radius)

    def test_round_trip_and_validation(self):
        spec = ManifoldSpec.from_dict({"kind": "sphere", "dim": 2, "radius": 3.0})
        assert ManifoldSpec.from_dict(spec.to_dict()) == spec
        with pytest.raises(InvalidArgumentError):
            ManifoldSpec("torus", 2)
        with pytest.raises(InvalidArgumentError):
            ManifoldSpec("sphere", 0)
        with pytest.raises(InvalidArgumentError):
            ManifoldSpec("sphere", 2, radius=-1.0)
        with pytest.raises(InvalidArgumentError):
            ManifoldSpec.from_dict({"dim": 2})
