import math

import numpy as np
import pytest

from analysis.incompleteness import (
    VanishingPreset,
    closed_form_length,
    homotopy_bound,
    incompleteness_demo,
    length_integrand,
    vanishing_path,
)
from manifold.errors import InvalidArgumentError
from metric.metric_spec import MetricSpec

H2 = MetricSpec.constant(1, 0, 1)
LIMIT = math.sqrt(2.0 * math.pi) * (math.pi / math.sqrt(3.0)) * (2.0 / 3.0)


class TestVanishingPreset:
    def test_parse(self):
        assert VanishingPreset.parse("translate(1, -2.5)") == VanishingPreset("translate", 1.0, -2.5)
        assert VanishingPreset.parse("log_escape").name == "log_escape"
        with pytest.raises(InvalidArgumentError):
            VanishingPreset.parse("translate(1)")
        with pytest.raises(InvalidArgumentError):
            VanishingPreset.parse("spiral")

    def test_rates_match_offsets(self):
        t = np.array([0.1, 0.5, 0.9])
        eps = 1e-6
        for preset in (VanishingPreset("translate", 2.0, 1.0), VanishingPreset("log_escape"), VanishingPreset("oscillate")):
            ahead, behind = preset.offsets(t + eps), preset.offsets(t - eps)
            for rate, a, b in zip(preset.rates(t), ahead, behind):
                assert np.allclose(rate, (a - b) / (2 * eps), rtol=1e-6)


class TestClosedForm:
    def test_f0g0_limit(self):
        assert closed_form_length(H2, VanishingPreset("f0g0")) == pytest.approx(LIMIT, rel=1e-8)
        assert LIMIT == pytest.approx(3.0312, abs=1e-3)

    def test_first_order_term(self):
        spec = MetricSpec.constant(1, 2)
        t = 0.3
        expected = math.sqrt(2 * math.pi * ((1 - t) * math.pi ** 2 / 3 + 2 / (1 - t)))
        assert length_integrand(spec, VanishingPreset("f0g0"), t) == pytest.approx(expected)

    def test_escaping_presets_have_finite_length(self):
        for name in ("log_escape", "oscillate"):
            assert math.isfinite(closed_form_length(H2, VanishingPreset(name)))

    def test_homotopy_bound(self):
        t = np.linspace(0.0, 0.9, 10)
        bound = homotopy_bound(H2, VanishingPreset("f0g0"), VanishingPreset("translate", 1.0, 0.0), t)
        assert np.allclose(bound, np.sqrt(2 * math.pi * (1 - t)) * t)

    def test_needs_constant_coefficients(self):
        with pytest.raises(InvalidArgumentError):
            closed_form_length(MetricSpec.scale_invariant(1, 0, 1), VanishingPreset("f0g0"))


class TestIncompletenessDemo:
    def test_f0g0_path_length(self):
        report = incompleteness_demo(H2, VanishingPreset("f0g0"), samples=512, steps=200)
        assert report.path_length == pytest.approx(LIMIT, rel=1e-2)
        assert report.path_length == pytest.approx(report.quadrature_length, rel=1e-2)
        assert report.max_length_error < 1e-6
        assert len(report.rows) == 200

    def test_curve_lengths(self):
        path = vanishing_path(VanishingPreset("translate", 1.0, 2.0), 64, 20)
        assert path.times[-1] == pytest.approx(0.95)
        for t, curve in zip(path.times, path.curves):
            assert curve.length == pytest.approx(2 * math.pi * (1 - t), rel=1e-6)
        assert np.allclose(path.points[-1].mean(axis=0), [0.95, 1.9])

    def test_partner_bounds(self):
        report = incompleteness_demo(
            H2, VanishingPreset("f0g0"), samples=64, steps=20, partner=VanishingPreset("translate", 1.0, 0.0)
        )
        assert report.partner == "translate(1,0)"
        assert report.rows[0]["homotopy_bound"] == 0.0
        assert all(row["homotopy_bound"] is not None for row in report.rows)
        no_partner = incompleteness_demo(H2, VanishingPreset("f0g0"), samples=64, steps=20)
        assert no_partner.rows[3]["homotopy_bound"] is None
