import math

import pytest

from analysis.curve_families import circle, ellipse, segment, sphere_circle
from analysis.equivalence import (
    CONSTANT_COEFFICIENT,
    LENGTH_WEIGHTED,
    UNVERIFIED,
    completeness_case,
    equivalence_probe,
    norm_ratio,
)
from analysis.field_sampler import fourier_field
from manifold.errors import InvalidArgumentError
from metric.metric_spec import MetricSpec

H2 = MetricSpec.constant(1, 0, 1)


class TestCompletenessCase:
    def test_constant_needs_closed_curves(self):
        assert completeness_case(H2, closed=True) == CONSTANT_COEFFICIENT
        assert completeness_case(H2, closed=False) is None

    def test_length_weighted(self):
        assert completeness_case(MetricSpec.scale_invariant(1, 1, 1), closed=False) == LENGTH_WEIGHTED
        assert completeness_case(MetricSpec.scale_invariant(1, 0, 1), closed=False) == LENGTH_WEIGHTED
        assert completeness_case(MetricSpec.scale_invariant(1, 0, 0, 1), closed=True) == LENGTH_WEIGHTED

    def test_first_order_metrics_are_not_covered(self):
        assert completeness_case(MetricSpec.constant(1, 1), closed=True) is None

    def test_custom_is_unverified(self):
        spec = MetricSpec.custom(lambda l: 1.0 + 0.0 * l, lambda l: 0.0 * l, lambda l: 1.0 + 0.0 * l)
        assert completeness_case(spec, closed=True) == UNVERIFIED


class TestEquivalenceProbe:
    def test_unit_circle_is_well_conditioned(self):
        report = equivalence_probe(H2, circle(128), samples=16, seed=1)
        assert 0.0 < report.min_ratio <= report.max_ratio < math.inf
        assert report.condition < 1e3
        assert report.case == CONSTANT_COEFFICIENT

    def test_ratio_is_homogeneous(self):
        curve = ellipse(64)
        h = fourier_field(curve, 2, [1.0, 0.3])
        assert norm_ratio(H2, curve, h.scaled(10.0), 2) == pytest.approx(norm_ratio(H2, curve, h, 2), rel=1e-12)

    def test_arclength_circle_matches_the_h_metric(self):
        report = equivalence_probe(H2, circle(256), samples=8)
        assert report.min_ratio == pytest.approx(1.0, abs=1e-3)
        assert report.max_ratio == pytest.approx(1.0, abs=1e-3)

    def test_scale_invariant_on_the_sphere(self):
        report = equivalence_probe(MetricSpec.scale_invariant(1, 1, 1), sphere_circle(64), samples=8)
        assert report.case == LENGTH_WEIGHTED
        assert 0.0 < report.min_ratio and report.condition < math.inf

    def test_seeded(self):
        first = equivalence_probe(H2, ellipse(64), samples=4, seed=3).to_dict()
        assert first == equivalence_probe(H2, ellipse(64), samples=4, seed=3).to_dict()

    def test_uncovered_metric_rejected(self):
        with pytest.raises(InvalidArgumentError):
            equivalence_probe(H2, segment(64))
