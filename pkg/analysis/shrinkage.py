import logging
from dataclasses import dataclass, field

import numpy as np

from manifold.errors import InvalidArgumentError
from metric.curve_path import CurvePath, step_lengths
from metric.metric_spec import MetricSpec

COLUMNS = ("t", "length", "length_power", "path_length", "below_threshold")


@dataclass
class ShrinkageReport:
    lipschitz: float
    threshold: float
    min_length: float
    flagged: list = field(default_factory=list)
    rows: list = field(default_factory=list, repr=False)

    @property
    def shrinks(self) -> bool:
        return bool(self.flagged)

    def to_dict(self) -> dict:
        return {
            "lipschitz": self.lipschitz,
            "threshold": self.threshold,
            "min_length": self.min_length,
            "flagged": self.flagged,
            "rows": self.rows,
        }


def shrinkage_probe(spec: MetricSpec, path: CurvePath, threshold: float = None) -> ShrinkageReport:
    """
    Smallest L with |l_a^{3/2} - l_b^{3/2}| <= L * (G-length of the path between a and b) over
    all pairs of path nodes, and the nodes whose length falls below the threshold.

    :param spec: Constant coefficient metric.
    :param path: The path.
    :param threshold: Length below which a curve is flagged; no flags when None.
    :return: ShrinkageReport.
    """
    if spec.family != "constant":
        raise InvalidArgumentError(f"shrinkage probe needs a constant coefficient metric, got {spec.family}.")
    if threshold is not None and not threshold > 0:
        raise InvalidArgumentError(f"threshold must be positive, got {threshold}.")
    lengths = np.array([curve.length for curve in path.curves])
    powers = lengths ** 1.5
    travelled = np.concatenate([[0.0], np.cumsum(step_lengths(spec, path))])

    differences = np.abs(powers[:, None] - powers[None, :])
    distances = np.abs(travelled[:, None] - travelled[None, :])
    moving = distances > 0
    if np.any(differences[~moving] > 0):
        logging.warning("Shrinkage probe: curve length changes along a zero-length stretch of the path.")
    lipschitz = float(np.max(differences[moving] / distances[moving], initial=0.0))

    below = lengths < threshold if threshold is not None else np.zeros(len(lengths), dtype=bool)
    flagged = [int(j) for j in np.flatnonzero(below)]
    rows = [
        {"t": float(t), "length": float(l), "length_power": float(p), "path_length": float(d), "below_threshold": bool(b)}
        for t, l, p, d, b in zip(path.times, lengths, powers, travelled, below)
    ]
    if flagged:
        logging.warning(f"Shrinkage probe: {len(flagged)} curves shorter than {threshold}, first at node {flagged[0]}.")
    logging.info(f"Shrinkage probe: fitted Lipschitz constant {lipschitz:.6g} over {len(lengths)} curves.")
    return ShrinkageReport(lipschitz, threshold, float(lengths.min()), flagged, rows)
