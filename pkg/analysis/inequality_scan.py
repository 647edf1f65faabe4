"""
Empirical probes of the Sobolev interpolation inequalities along curves.

The general scan samples a^{2k} ||D_s^k h||^2 against ||h||^2 + a^{2n} ||D_s^n h||^2 (or the
L-infinity variant) over curves, fields and a in (0, l]. The periodic scan computes the worst
ratio ||D_s^k h||^2 / (||h||^2 + ||D_s^n h||^2) over a Fourier subspace on a family of closed
curves whose length shrinks, and fits its power of l.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np
from scipy.linalg import eigh

from _config.app_config import get_config
from analysis.curve_families import curve_from_preset
from analysis.field_sampler import derived_rng, fourier_basis, random_fields
from curve import stencils
from curve.discrete_curve import DiscreteCurve
from manifold.errors import ElasticaError, InvalidArgumentError

VARIANTS = ("L2", "Linf")

GENERAL_COLUMNS = ("scale", "trial", "a", "length", "lhs", "rhs", "ratio")
PERIODIC_COLUMNS = ("value", "length", "worst_ratio", "clamp", "normalized")


@dataclass
class ScanConfig:
    """
    :param curve: Curve preset {"name": ..., "samples": N, ...family parameters}.
    :param k: Lower derivative order.
    :param n: Top derivative order, k < n.
    :param fields: Random fields per curve.
    :param seed: Base seed; every trial derives its own generator from it.
    :param a_points: Size of the a-grid j/a_points * l, j = 1..a_points.
    :param scales: Scale factors applied through the preset's "scale" parameter.
    :param variant: "L2" or "Linf" left-hand side of the general scan.
    :param shrink_param: Preset parameter varied by the periodic scan (e.g. "radius").
    :param shrink_values: Values of that parameter.
    :param max_mode: Highest Fourier mode of sampled fields, N/8 by default.
    """

    curve: dict
    k: int = 1
    n: int = 2
    fields: int = 8
    seed: int = 0
    a_points: int = 16
    scales: list = field(default_factory=lambda: [1.0])
    variant: str = "L2"
    shrink_param: str = None
    shrink_values: list = field(default_factory=list)
    max_mode: int = None

    def __post_init__(self):
        if not isinstance(self.curve, dict) or "name" not in self.curve or "samples" not in self.curve:
            raise InvalidArgumentError("scan config: 'curve' must be a preset with 'name' and 'samples'.")
        for key in ("k", "n", "fields", "a_points", "seed"):
            value = getattr(self, key)
            if int(value) != value:
                raise InvalidArgumentError(f"scan config: '{key}' must be an integer, got {value}.")
        if not 0 <= self.k < self.n:
            raise InvalidArgumentError(f"scan config: need 0 <= k < n, got k={self.k}, n={self.n}.")
        max_order = get_config().get_numeric("max_derivative_order")
        if self.n > max_order:
            raise InvalidArgumentError(f"scan config: n={self.n} exceeds the configured maximum {max_order}.")
        if self.fields < 1 or self.a_points < 1:
            raise InvalidArgumentError("scan config: 'fields' and 'a_points' must be positive.")
        if self.variant not in VARIANTS:
            raise InvalidArgumentError(f"scan config: unknown variant '{self.variant}', expected one of {VARIANTS}.")
        self.scales = [float(s) for s in self.scales]
        if not self.scales or any(not s > 0 for s in self.scales):
            raise InvalidArgumentError("scan config: scales must be positive.")
        self.shrink_values = [float(v) for v in self.shrink_values]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict):
        if not isinstance(data, dict):
            raise InvalidArgumentError("scan config must be a JSON object.")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidArgumentError(f"scan config: unknown keys {unknown}.")
        if "curve" not in data:
            raise InvalidArgumentError("scan config: field 'curve' is missing.")
        return cls(**data)

    def preset(self, **overrides) -> dict:
        return {**self.curve, **overrides}


@dataclass
class ScanReport:
    kind: str
    rows: list
    max_ratio: float
    skipped: int = 0
    slope: float = None
    fitted_constant: float = None

    @property
    def columns(self) -> tuple:
        return GENERAL_COLUMNS if self.kind == "general" else PERIODIC_COLUMNS

    def max_by_scale(self) -> dict:
        result = {}
        for row in self.rows:
            result[row["scale"]] = max(result.get(row["scale"], 0.0), row["ratio"])
        return result

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "max_ratio": self.max_ratio,
            "skipped": self.skipped,
            "slope": self.slope,
            "fitted_constant": self.fitted_constant,
            "rows": self.rows,
        }


def _derivative_norms(curve: DiscreteCurve, vectors: np.ndarray, order: int):
    """
    Squared L2(ds) norms and squared sup norms of D_s^i h for i = 0..order.
    """
    space = curve.space
    ders = stencils.derivatives(
        space, curve.points, vectors, curve.closed, curve.domain.spacing, order, True, curve.speed
    )
    pointwise = [np.asarray(space.inner(curve.points, d, d)) for d in ders]
    return [float(np.sum(curve.ds * p)) for p in pointwise], [float(np.max(p)) for p in pointwise]


def interpolation_terms(curve: DiscreteCurve, vectors: np.ndarray, k: int, n: int, a: float, variant: str = "L2"):
    """
    Both sides of the interpolation inequality for one field and one a.

    :return: (lhs, rhs)
    """
    if variant not in VARIANTS:
        raise InvalidArgumentError(f"unknown variant '{variant}', expected one of {VARIANTS}.")
    l2, sup = _derivative_norms(curve, vectors, n)
    return _sides(l2, sup, k, n, a, variant)


def _sides(l2, sup, k, n, a, variant):
    if variant == "L2":
        return a ** (2 * k) * l2[k], l2[0] + a ** (2 * n) * l2[n]
    return a ** (2 * k) * sup[k], l2[0] / a + a ** (2 * n - 1) * l2[n]


def _general_trial(cfg: ScanConfig, scale: float, curve: DiscreteCurve, trial: int) -> list:
    h = random_fields(curve, 1, derived_rng(cfg.seed, trial), cfg.max_mode)[0]
    l2, sup = _derivative_norms(curve, h.vectors, cfg.n)
    if not l2[0] > 0:
        logging.warning(f"Inequality scan: field {trial} vanishes on the scale {scale} curve, skipped.")
        return []
    rows = []
    for j in range(1, cfg.a_points + 1):
        a = j * curve.length / cfg.a_points
        lhs, rhs = _sides(l2, sup, cfg.k, cfg.n, a, cfg.variant)
        rows.append(
            {"scale": scale, "trial": trial, "a": a, "length": curve.length, "lhs": lhs, "rhs": rhs, "ratio": lhs / rhs}
        )
    return rows


def ineq_scan_general(cfg: ScanConfig, threads: int = 1) -> ScanReport:
    """
    Sample the general interpolation inequality over scales, random fields and the a-grid.

    :param cfg: Scan configuration.
    :param threads: Worker threads; rows keep the serial order.
    :return: ScanReport with one row per (scale, field, a).
    """
    skipped = 0
    tasks = []
    for scale in cfg.scales:
        preset = cfg.preset(scale=scale) if scale != 1.0 else cfg.preset()
        try:
            curve = curve_from_preset(preset)
        except InvalidArgumentError:
            raise
        except ElasticaError as e:
            logging.warning(f"Inequality scan: skipping scale {scale}, degenerate curve: {e}")
            skipped += cfg.fields
            continue
        tasks += [(scale, curve, trial) for trial in range(cfg.fields)]

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        results = list(executor.map(lambda task: _general_trial(cfg, *task), tasks))
    rows = [row for trial_rows in results for row in trial_rows]
    skipped += sum(1 for trial_rows in results if not trial_rows)
    ratios = [row["ratio"] for row in rows]
    if any(not math.isfinite(r) or r < 0 for r in ratios):
        raise InvalidArgumentError("inequality scan produced a non-finite or negative ratio.")
    report = ScanReport("general", rows, max(ratios, default=0.0), skipped)
    logging.info(
        f"General inequality scan (k={cfg.k}, n={cfg.n}, {cfg.variant}): {len(rows)} samples, "
        f"max ratio {report.max_ratio:.6g}, skipped {skipped}."
    )
    return report


def worst_ratio(curve: DiscreteCurve, k: int, n: int, max_mode: int = None) -> float:
    """
    max over the Fourier subspace of ||D_s^k h||^2 / (||h||^2 + ||D_s^n h||^2), from the
    generalized eigenproblem of the Gram matrices.
    """
    basis = fourier_basis(curve, max_mode)
    space = curve.space
    ders = stencils.derivatives(
        space, curve.points, basis, curve.closed, curve.domain.spacing, n, True, curve.speed
    )

    def gram(d):
        return np.einsum("abn,n->ab", np.asarray(space.inner(curve.points, d[:, None], d[None, :])), curve.ds)

    top = gram(ders[k])
    bottom = gram(ders[0]) + gram(ders[n])
    # drop directions the projection made linearly dependent
    w, v = eigh(bottom)
    keep = w > 1e-10 * w.max()
    reduced = v[:, keep]
    values = eigh(reduced.T @ top @ reduced, np.diag(w[keep]), eigvals_only=True)
    return float(max(values[-1], 0.0))


def _periodic_trial(cfg: ScanConfig, value: float):
    try:
        curve = curve_from_preset(cfg.preset(**{cfg.shrink_param: value}))
    except InvalidArgumentError:
        raise
    except ElasticaError as e:
        logging.warning(f"Periodic scan: skipping {cfg.shrink_param}={value}, degenerate curve: {e}")
        return None
    if not curve.closed:
        raise InvalidArgumentError("the periodic scan needs closed curves.")
    ratio = worst_ratio(curve, cfg.k, cfg.n, cfg.max_mode)
    clamp = min(1.0, curve.length ** 2)
    return {"value": value, "length": curve.length, "worst_ratio": ratio, "clamp": clamp, "normalized": ratio / clamp}


def ineq_scan_periodic(cfg: ScanConfig, threads: int = 1) -> ScanReport:
    """
    Shrink study of the periodic inequality: worst ratio against l along a closed family.

    The slope of log(worst ratio) against log(l) is fitted over the curves with l < 1 (all
    curves when fewer than two are that short); the fitted constant is max ratio / min(1, l^2).
    """
    if not cfg.shrink_param or not cfg.shrink_values:
        raise InvalidArgumentError("the periodic scan needs 'shrink_param' and 'shrink_values'.")
    if cfg.k < 1:
        raise InvalidArgumentError(f"the periodic scan needs k >= 1, got {cfg.k}.")
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        results = list(executor.map(lambda value: _periodic_trial(cfg, value), cfg.shrink_values))
    rows = [row for row in results if row is not None]
    skipped = len(results) - len(rows)
    if any(not math.isfinite(row["worst_ratio"]) for row in rows):
        raise InvalidArgumentError("periodic scan produced a non-finite ratio.")

    slope = None
    small = [row for row in rows if row["length"] < 1.0 and row["worst_ratio"] > 0]
    usable = small if len(small) >= 2 else [row for row in rows if row["worst_ratio"] > 0]
    if len(usable) >= 2:
        x = np.log([row["length"] for row in usable])
        y = np.log([row["worst_ratio"] for row in usable])
        slope = float(np.polyfit(x, y, 1)[0])
    report = ScanReport(
        "periodic",
        rows,
        max((row["worst_ratio"] for row in rows), default=0.0),
        skipped,
        slope=slope,
        fitted_constant=max((row["normalized"] for row in rows), default=0.0),
    )
    logging.info(f"Periodic inequality scan over {len(rows)} curves: slope {slope}, constant {report.fitted_constant:.6g}.")
    return report
