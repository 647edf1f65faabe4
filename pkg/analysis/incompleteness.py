"""
Vanishing-length paths of open plane curves.

c(t, theta) = ((1 - t)(theta - pi) + f(t), g(t)) has finite length under constant coefficient
metrics although the curves shrink to zero length as t -> 1, so open curves are not metrically
complete. The presets pick f and g so that c converges to the origin, to another point, to
infinity, or to nothing at all.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from curve.discrete_curve import build_curve
from curve.domain import Domain
from manifold.errors import InvalidArgumentError
from manifold.manifold_spec import ManifoldSpec
from metric.curve_path import CurvePath, path_energy
from metric.metric_spec import MetricSpec

PRESETS = ("f0g0", "translate", "log_escape", "oscillate")

COLUMNS = ("t", "length", "expected_length", "homotopy_bound")


@dataclass(frozen=True)
class VanishingPreset:
    """
    :param name: One of PRESETS.
    :param x0: Target x for "translate".
    :param y0: Target y for "translate".
    """

    name: str
    x0: float = 0.0
    y0: float = 0.0

    def __post_init__(self):
        if self.name not in PRESETS:
            raise InvalidArgumentError(f"Unknown preset '{self.name}', expected one of {PRESETS}.")

    @classmethod
    def parse(cls, text: str):
        """
        "f0g0", "log_escape", "oscillate" or "translate(x0,y0)".
        """
        text = text.strip()
        if text.startswith("translate"):
            inner = text[len("translate"):].strip()
            if not (inner.startswith("(") and inner.endswith(")")):
                raise InvalidArgumentError(f"preset '{text}': expected translate(x0,y0).")
            try:
                x0, y0 = (float(v) for v in inner[1:-1].split(","))
            except ValueError:
                raise InvalidArgumentError(f"preset '{text}': expected two numbers.")
            return cls("translate", x0, y0)
        return cls(text)

    def label(self) -> str:
        return f"translate({self.x0:g},{self.y0:g})" if self.name == "translate" else self.name

    def offsets(self, t):
        """
        (f(t), g(t)).
        """
        t = np.asarray(t, dtype=float)
        zero = np.zeros_like(t)
        if self.name == "f0g0":
            return zero, zero
        if self.name == "translate":
            return self.x0 * t, self.y0 * t
        if self.name == "log_escape":
            return -np.log1p(-t), zero
        return np.sin(-np.log1p(-t)), zero

    def rates(self, t):
        """
        (f'(t), g'(t)).
        """
        t = np.asarray(t, dtype=float)
        zero = np.zeros_like(t)
        if self.name == "f0g0":
            return zero, zero
        if self.name == "translate":
            return zero + self.x0, zero + self.y0
        if self.name == "log_escape":
            return 1.0 / (1.0 - t), zero
        return np.cos(-np.log1p(-t)) / (1.0 - t), zero


def _constant_coefficients(spec: MetricSpec):
    if spec.family != "constant":
        raise InvalidArgumentError(f"vanishing paths need a constant coefficient metric, got {spec.family}.")
    return spec.coeffs


def vanishing_path(preset: VanishingPreset, samples: int, steps: int) -> CurvePath:
    """
    Sample c on t_j = j / M, j = 0..M-1, so the path stops at t = 1 - 1/M.
    """
    if int(steps) != steps or steps < 2:
        raise InvalidArgumentError(f"steps must be an integer >= 2, got {steps}.")
    domain = Domain("open", samples)
    manifold = ManifoldSpec("euclidean", 2)
    times = np.arange(int(steps)) / steps
    theta = domain.grid
    f, g = preset.offsets(times)
    curves = []
    for t, fj, gj in zip(times, f, g):
        points = np.stack([(1.0 - t) * (theta - math.pi) + fj, np.full_like(theta, gj)], axis=-1)
        curves.append(build_curve(manifold, domain, points))
    return CurvePath(curves, times)


def length_integrand(spec: MetricSpec, preset: VanishingPreset, t: float) -> float:
    """
    ||c_t||_G = sqrt(2 pi [a_0 (1-t)(pi^2/3 + f'^2 + g'^2) + a_1 / (1-t)]); higher derivatives of c_t vanish.
    """
    coeffs = _constant_coefficients(spec)
    df, dg = preset.rates(t)
    value = coeffs[0] * (1.0 - t) * (math.pi ** 2 / 3.0 + float(df) ** 2 + float(dg) ** 2) + coeffs[1] / (1.0 - t)
    return math.sqrt(2.0 * math.pi * value)


def closed_form_length(spec: MetricSpec, preset: VanishingPreset, upper: float = 1.0) -> float:
    """
    Length of the continuous path on [0, upper] by adaptive quadrature.
    """
    value, _ = quad(lambda t: length_integrand(spec, preset, t), 0.0, upper, limit=200)
    return float(value)


def homotopy_bound(spec: MetricSpec, first: VanishingPreset, second: VanishingPreset, t) -> np.ndarray:
    """
    Length of the affine homotopy between the two presets at time t: its tau-velocity is the
    constant offset difference, so only the a_0 term survives and the length is
    sqrt(a_0 l(t)) |Delta(t)| with l(t) = 2 pi (1 - t).
    """
    coeffs = _constant_coefficients(spec)
    t = np.asarray(t, dtype=float)
    f1, g1 = first.offsets(t)
    f2, g2 = second.offsets(t)
    return np.sqrt(coeffs[0] * 2.0 * math.pi * (1.0 - t)) * np.hypot(f1 - f2, g1 - g2)


@dataclass
class IncompletenessReport:
    preset: str
    samples: int
    steps: int
    path_length: float
    energy: float
    quadrature_length: float
    limit_length: float
    max_length_error: float
    partner: str = None
    rows: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "preset": self.preset,
            "partner": self.partner,
            "samples": self.samples,
            "steps": self.steps,
            "path_length": self.path_length,
            "energy": self.energy,
            "quadrature_length": self.quadrature_length,
            "limit_length": self.limit_length,
            "max_length_error": self.max_length_error,
            "rows": self.rows,
        }


def incompleteness_demo(
    spec: MetricSpec, preset: VanishingPreset, samples: int = 512, steps: int = 200, partner: VanishingPreset = None
) -> IncompletenessReport:
    """
    Build the discrete vanishing path and compare it with the closed-form length.

    :param spec: Constant coefficient metric.
    :param preset: The path.
    :param samples: Nodes per curve.
    :param steps: M; the path covers [0, 1 - 1/M].
    :param partner: Optional second preset for the affine-homotopy distance bound.
    :return: IncompletenessReport with one row per sampled time.
    """
    _constant_coefficients(spec)
    path = vanishing_path(preset, samples, steps)
    energy, length = path_energy(spec, path)
    times = path.times
    lengths = np.array([curve.length for curve in path.curves])
    expected = 2.0 * math.pi * (1.0 - times)
    bounds = homotopy_bound(spec, preset, partner, times) if partner is not None else [None] * len(times)
    rows = [
        {
            "t": float(t),
            "length": float(l),
            "expected_length": float(e),
            "homotopy_bound": None if b is None else float(b),
        }
        for t, l, e, b in zip(times, lengths, expected, bounds)
    ]
    report = IncompletenessReport(
        preset=preset.label(),
        samples=samples,
        steps=steps,
        path_length=length,
        energy=energy,
        quadrature_length=closed_form_length(spec, preset, float(times[-1])),
        limit_length=closed_form_length(spec, preset),
        max_length_error=float(np.max(np.abs(lengths - expected) / expected)),
        partner=None if partner is None else partner.label(),
        rows=rows,
    )
    logging.info(
        f"Vanishing path {report.preset}: discrete length {length:.6f}, quadrature {report.quadrature_length:.6f}, "
        f"limit {report.limit_length:.6f}."
    )
    return report
