import logging
import math
from dataclasses import dataclass

import numpy as np

from analysis.field_sampler import derived_rng, random_fields
from curve.discrete_curve import DiscreteCurve
from manifold.errors import InvalidArgumentError
from metric.metric_spec import MetricSpec, coefficients
from metric.sobolev_metric import inner_G, inner_H

LENGTH_WEIGHTED = "length_weighted"
CONSTANT_COEFFICIENT = "constant_coefficient"
UNVERIFIED = "unverified"


def completeness_case(spec: MetricSpec, closed: bool):
    """
    Which sufficient condition for completeness the metric meets by its structure.

    Length weighted: a_1 >= alpha l^{-1}, or a_0 >= alpha l^{-3} and a_k >= alpha l^{2k-3}
    for some k > 1. Constant coefficient: closed curves with a_0, a_n > 0.

    :return: LENGTH_WEIGHTED, CONSTANT_COEFFICIENT, UNVERIFIED for custom coefficients, or None.
    """
    if spec.order < 2:
        return None
    if spec.family == "custom":
        logging.warning("Completeness conditions of custom coefficient functions cannot be checked structurally.")
        return UNVERIFIED
    c = spec.coeffs
    if spec.family == "scale_invariant":
        if c[1] > 0 or (c[0] > 0 and any(ck > 0 for ck in c[2:])):
            return LENGTH_WEIGHTED
        return None
    if closed and c[0] > 0 and c[-1] > 0:
        return CONSTANT_COEFFICIENT
    return None


@dataclass
class EquivalenceReport:
    case: str
    samples: int
    min_ratio: float
    max_ratio: float
    h_order: int

    @property
    def condition(self) -> float:
        return self.max_ratio / self.min_ratio if self.min_ratio > 0 else math.inf

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "samples": self.samples,
            "h_order": self.h_order,
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "condition": self.condition,
        }


def norm_ratio(spec: MetricSpec, curve: DiscreteCurve, h, h_order: int) -> float:
    """
    ||h||_G / ||h||_H for one field.
    """
    return math.sqrt(inner_G(spec, curve, h, h) / inner_H(curve, h, h, h_order))


def equivalence_probe(
    spec: MetricSpec, curve: DiscreteCurve, samples: int = 32, seed: int = 0, h_order: int = None
) -> EquivalenceReport:
    """
    Range of ||h||_G / ||h||_H over random smooth fields along one curve.

    :param spec: A metric covered by one of the completeness conditions.
    :param curve: The curve.
    :param samples: Number of random fields.
    :param seed: Base seed of the field sampler.
    :param h_order: Order of the H-metric, the metric order by default.
    :return: EquivalenceReport with min/max ratio and condition number.
    """
    case = completeness_case(spec, curve.closed)
    if case is None:
        raise InvalidArgumentError(
            f"metric {spec.family} of order {spec.order} on a {curve.domain.topology} curve meets no completeness condition."
        )
    if int(samples) != samples or samples < 1:
        raise InvalidArgumentError(f"samples must be a positive integer, got {samples}.")
    coefficients(spec, curve.length)
    h_order = spec.order if h_order is None else h_order
    ratios = []
    for trial in range(int(samples)):
        h = random_fields(curve, 1, derived_rng(seed, trial))[0]
        ratios.append(norm_ratio(spec, curve, h, h_order))
    report = EquivalenceReport(case, int(samples), float(np.min(ratios)), float(np.max(ratios)), h_order)
    logging.info(
        f"Equivalence probe ({case}): ratios in [{report.min_ratio:.6g}, {report.max_ratio:.6g}], "
        f"condition {report.condition:.4g}."
    )
    return report
