import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from curve.discrete_curve import DiscreteCurve
from manifold.errors import InvalidArgumentError

BOUND_SLACK = 1.1


def transported_frames(curve: DiscreteCurve, frame: np.ndarray = None):
    """
    Parallel transport an orthonormal frame of T_{c_0}N node by node along the curve.

    :param curve: The curve.
    :param frame: Rows spanning T_{c_0}N, defaults to the Gram-Schmidt frame.
    :return: (frames, closing) with frames of shape (N, dim, D); closing is the frame carried
        back to c_0 around a closed curve, None for open curves.
    """
    space = curve.space
    points = curve.points
    targets = np.roll(points, -1, axis=0) if curve.closed else points[1:]
    sources = points[: len(targets)]
    # maps[i, a] is the transport of the a-th ambient basis vector along edge i
    basis = np.eye(curve.manifold.ambient_dim)
    maps = np.asarray(space.transport(sources[:, None, :], targets[:, None, :], basis[None, :, :]))

    current = space.frame(points[0]) if frame is None else np.asarray(frame, dtype=float)
    frames = [current]
    for i in range(1, curve.samples):
        current = current @ maps[i - 1]
        frames.append(current)
    closing = current @ maps[-1] if curve.closed else None
    return np.stack(frames), closing


def loop_holonomy(curve: DiscreteCurve, frame: np.ndarray = None) -> np.ndarray:
    """
    Holonomy of a closed curve as a (dim, dim) matrix in an orthonormal frame at c_0:
    H[a, b] = g(e_a, P e_b).
    """
    if not curve.closed:
        raise InvalidArgumentError("holonomy needs a closed curve.")
    frames, closing = transported_frames(curve, frame)
    start = frames[0]
    return np.asarray(curve.space.inner(curve.points[0], start[:, None, :], closing[None, :, :]))


def holonomy_defect(curve: DiscreteCurve, frame: np.ndarray = None) -> float:
    """
    Frobenius distance ||Hol_c - id||.
    """
    holonomy = loop_holonomy(curve, frame)
    return float(np.linalg.norm(holonomy - np.eye(len(holonomy))))


def rotation_angle(holonomy: np.ndarray) -> float:
    """
    Signed angle of a 2x2 holonomy.
    """
    if holonomy.shape != (2, 2):
        raise InvalidArgumentError(f"rotation angle needs a 2x2 holonomy, got shape {holonomy.shape}.")
    return math.atan2(holonomy[1, 0], holonomy[0, 0])


@dataclass
class HolonomyReport:
    curve_id: int
    length: float
    defect: float
    cap: float
    bound: float
    angle: float = None

    @property
    def ratio(self) -> float:
        return self.defect / self.length ** 2

    @property
    def passed(self) -> bool:
        return self.defect <= min(self.bound * self.length ** 2, self.cap) + 1e-9

    def to_row(self) -> dict:
        return {
            "curve_id": self.curve_id,
            "length": self.length,
            "defect": self.defect,
            "ratio": self.ratio,
            "cap": self.cap,
            "pass": self.passed,
        }


@dataclass
class BoundProbe:
    reports: list
    fitted_constant: float
    bound_constant: float
    slope: float = None

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)

    def to_dict(self) -> dict:
        return {
            "fitted_constant": self.fitted_constant,
            "bound_constant": self.bound_constant,
            "slope": self.slope,
            "passed": self.passed,
            "reports": [report.to_row() for report in self.reports],
        }


def holonomy_report(curve: DiscreteCurve, curve_id: int = 0) -> HolonomyReport:
    manifold = curve.manifold
    holonomy = loop_holonomy(curve)
    return HolonomyReport(
        curve_id=curve_id,
        length=curve.length,
        defect=float(np.linalg.norm(holonomy - np.eye(manifold.dim))),
        cap=2.0 * math.sqrt(manifold.dim),
        bound=BOUND_SLACK * manifold.curvature_bound * math.sqrt(manifold.dim),
        angle=rotation_angle(holonomy) if manifold.dim == 2 else None,
    )


def bound_probe(curves: list, threads: int = 1) -> BoundProbe:
    """
    Check ||Hol_c - id|| <= min(C* l^2, 2 sqrt(d)) with C* = 1.1 K_N sqrt(d) on a family of
    closed curves and fit the empirical constant and the log-log slope of defect vs length.

    :param curves: Closed curves on one manifold.
    :param threads: Worker threads; reports keep the input order.
    :return: The BoundProbe.
    """
    curves = list(curves)
    if not curves:
        raise InvalidArgumentError("bound probe needs at least one curve.")
    for i, curve in enumerate(curves):
        if not curve.closed:
            raise InvalidArgumentError(f"bound probe: curve {i} is not closed.")
        if curve.manifold != curves[0].manifold:
            raise InvalidArgumentError(f"bound probe: curve {i} lives on another manifold.")

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        reports = list(executor.map(holonomy_report, curves, range(len(curves))))

    fitted = max(report.ratio for report in reports)
    slope = None
    usable = [report for report in reports if report.defect > 1e-14]
    if len(usable) >= 2:
        slope = float(np.polyfit(np.log([r.length for r in usable]), np.log([r.defect for r in usable]), 1)[0])
    probe = BoundProbe(reports=reports, fitted_constant=fitted, bound_constant=reports[0].bound, slope=slope)
    for report in reports:
        if not report.passed:
            logging.warning(f"Holonomy bound violated on curve {report.curve_id}: defect {report.defect:.3e}.")
    logging.info(f"Holonomy probe over {len(reports)} curves: fitted C {fitted:.4g}, slope {slope}.")
    return probe
