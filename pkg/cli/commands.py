import argparse
import logging

from analysis.curve_families import family_names, make_curve
from analysis.equivalence import equivalence_probe
from analysis.incompleteness import COLUMNS as INCOMPLETENESS_COLUMNS
from analysis.incompleteness import VanishingPreset, incompleteness_demo, vanishing_path
from analysis.inequality_scan import ScanConfig, ineq_scan_general, ineq_scan_periodic
from analysis.shrinkage import COLUMNS as SHRINKAGE_COLUMNS
from analysis.shrinkage import shrinkage_probe
from cli.report_writer import FORMATS, make_header, write_report
from curve.curve_io import load_curve, load_vector_field, read_json
from geodesic.geodesic_bvp import INIT_MODES, BvpOptions, existence_radius, minimize
from geodesic.geodesic_ivp import GeodesicState, ivp_integrate
from holonomy.holonomy import bound_probe
from manifold.errors import ElasticaError, InvalidArgumentError
from manifold.manifold_spec import KINDS, ManifoldSpec
from metric.curve_path import CurvePath
from metric.metric_spec import MetricSpec

IVP_COLUMNS = ("step", "t", "energy", "length", "min_speed")
HOLONOMY_COLUMNS = ("curve_id", "length", "defect", "ratio", "cap", "pass")
HISTORY_COLUMNS = ("iteration", "energy")

_COMMAND_DICT = {}


def register_command(name: str, summary: str, arguments: list):
    """
    :param name: Sub-command name.
    :param summary: One line description.
    :param arguments: (flags, kwargs) pairs handed to add_argument.
    """

    def decorator(fn):
        _COMMAND_DICT[name] = (fn, summary, arguments)
        return fn

    return decorator


def command_names() -> list:
    return list(_COMMAND_DICT)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Base seed of every random choice (default 0).")
    common.add_argument("--threads", type=int, default=1, help="Worker threads for independent trials.")
    common.add_argument("--out", default=None, help="Output file, stdout when omitted.")
    common.add_argument("--format", choices=FORMATS, default=None, help="Output format, inferred from --out.")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elastica", description="Sobolev metrics on manifold-valued curves.")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    common = _common_parser()
    for name, (fn, summary, arguments) in _COMMAND_DICT.items():
        sub = subparsers.add_parser(name, help=summary, description=summary, parents=[common])
        for flags, kwargs in arguments:
            sub.add_argument(*flags, **kwargs)
        sub.set_defaults(handler=fn)
    return parser


def grid(text: str) -> tuple:
    """
    "512x200" -> (512, 200).
    """
    try:
        samples, steps = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NxM, got '{text}'.")
    return samples, steps


def load_metric(file_path: str) -> MetricSpec:
    try:
        return MetricSpec.from_dict(read_json(file_path))
    except ElasticaError as e:
        raise InvalidArgumentError(f"{file_path}: {e}") from e


def load_path(file_path: str) -> CurvePath:
    try:
        return CurvePath.from_dict(read_json(file_path))
    except ElasticaError as e:
        raise InvalidArgumentError(f"{file_path}: {e}") from e


def _seed(args, default: int = 0) -> int:
    return default if args.seed is None else args.seed


def _emit(args, inputs: dict, record: dict, rows: list = None, columns=None, seed=None) -> None:
    header = make_header(args.command, inputs, _seed(args) if seed is None else seed)
    write_report(args.out, args.format, header, record, rows, columns)


METRIC_ARGUMENT = (("--metric",), {"required": True, "help": "MetricSpec JSON file."})
BVP_ARGUMENTS = [
    METRIC_ARGUMENT,
    (("start",), {"help": "Curve JSON file of c0."}),
    (("end",), {"help": "Curve JSON file of c1."}),
    (("--time-steps",), {"type": int, "default": None, "help": "Number of time steps M."}),
    (("--max-iters",), {"type": int, "default": None, "help": "Iteration limit."}),
    (("--gtol",), {"type": float, "default": None, "help": "Gradient norm tolerance."}),
    (("--init",), {"choices": INIT_MODES, "default": INIT_MODES[0], "help": "Initial path."}),
    (("--init-noise",), {"type": float, "default": 0.0, "help": "Amplitude of smooth initial noise."}),
    (("--radius-constant",), {"type": float, "default": None, "help": "Report the existence radius for this C."}),
]


@register_command("manifold-info", "Print the derived constants of a target manifold.", [
    (("--kind",), {"choices": KINDS, "required": True}),
    (("--dim",), {"type": int, "required": True}),
    (("--radius",), {"type": float, "default": 1.0}),
])
def manifold_info(args) -> None:
    manifold = ManifoldSpec(args.kind, args.dim, args.radius)
    _emit(args, {"kind": args.kind, "dim": args.dim, "radius": args.radius}, manifold.describe())


def _bvp_options(args) -> BvpOptions:
    overrides = {"time_steps": args.time_steps, "max_iterations": args.max_iters, "gtol": args.gtol}
    return BvpOptions(
        init=args.init,
        init_noise=args.init_noise,
        seed=_seed(args),
        **{key: value for key, value in overrides.items() if value is not None},
    )


def _run_bvp(args):
    spec = load_metric(args.metric)
    c0, c1 = load_curve(args.start), load_curve(args.end)
    opts = _bvp_options(args)
    result = minimize(spec, c0, c1, opts)
    record = result.to_dict()
    if args.radius_constant is not None:
        record["existence_radius"] = existence_radius(c0, args.radius_constant)
    inputs = {"metric": args.metric, "start": args.start, "end": args.end, "options": opts.to_dict()}
    return spec, result, record, inputs


@register_command("distance", "Estimate the geodesic distance between two curves.", BVP_ARGUMENTS)
def distance_command(args) -> None:
    _, result, record, inputs = _run_bvp(args)
    _emit(args, inputs, record)


@register_command("geodesic-bvp", "Minimize the path energy between two curves.", BVP_ARGUMENTS)
def geodesic_bvp(args) -> None:
    spec, result, record, inputs = _run_bvp(args)
    rows = [{"iteration": i, "energy": energy} for i, energy in enumerate(result.history)]
    record = {**record, "history": result.history, "path": result.path.to_dict(spec)}
    _emit(args, inputs, record, rows, HISTORY_COLUMNS)


@register_command("geodesic-ivp", "Integrate the first order geodesic equation.", [
    METRIC_ARGUMENT,
    (("--curve",), {"required": True, "help": "Curve JSON file of c(0)."}),
    (("--velocity",), {"required": True, "help": "Vector field JSON file of c_t(0)."}),
    (("--T",), {"type": float, "default": 1.0, "dest": "final_time", "help": "Final time."}),
    (("--steps",), {"type": int, "default": 200, "help": "RK4 steps."}),
])
def geodesic_ivp(args) -> None:
    spec = load_metric(args.metric)
    curve = load_curve(args.curve)
    state = GeodesicState(curve, load_vector_field(args.velocity, curve))
    result = ivp_integrate(spec, state, args.final_time, args.steps)
    record = {
        "completed": result.completed,
        "error": result.error,
        "energy_drift": result.energy_drift,
        "diagnostics": result.diagnostics,
        "path": result.path.to_dict(spec) if result.path is not None else None,
    }
    inputs = {"metric": args.metric, "curve": args.curve, "velocity": args.velocity, "T": args.final_time, "steps": args.steps}
    _emit(args, inputs, record, result.diagnostics, IVP_COLUMNS)


@register_command("holonomy", "Loop holonomy defects and the curvature bound of closed curves.", [
    (("loops",), {"nargs": "*", "help": "Closed curve JSON files."}),
    (("--family",), {"choices": family_names(), "default": None, "help": "Build the loops from a curve family."}),
    (("--samples",), {"type": int, "default": 256}),
    (("--param",), {"default": None, "help": "Family parameter varied over --values."}),
    (("--values",), {"type": float, "nargs": "+", "default": []}),
])
def holonomy_command(args) -> None:
    curves = [load_curve(path) for path in args.loops]
    if args.family is not None:
        if args.param is None or not args.values:
            raise InvalidArgumentError("--family needs --param and --values.")
        curves += [make_curve(args.family, args.samples, **{args.param: value}) for value in args.values]
    probe = bound_probe(curves, threads=args.threads)
    inputs = {"loops": args.loops, "family": args.family, "samples": args.samples, "param": args.param, "values": args.values}
    record = probe.to_dict()
    _emit(args, inputs, record, record["reports"], HOLONOMY_COLUMNS)


@register_command("ineq-scan", "Empirical scan of the interpolation inequalities.", [
    (("--config",), {"required": True, "help": "ScanConfig JSON file."}),
    (("--mode",), {"choices": ("general", "periodic"), "default": None, "help": "Periodic when shrink values are set."}),
])
def ineq_scan(args) -> None:
    data = read_json(args.config)
    try:
        cfg = ScanConfig.from_dict(data)
    except ElasticaError as e:
        raise InvalidArgumentError(f"{args.config}: {e}")
    if args.seed is not None:
        cfg.seed = args.seed
    mode = args.mode or ("periodic" if cfg.shrink_values else "general")
    scan = ineq_scan_periodic if mode == "periodic" else ineq_scan_general
    report = scan(cfg, threads=args.threads)
    _emit(args, {"config": cfg.to_dict(), "mode": mode}, report.to_dict(), report.rows, report.columns, seed=cfg.seed)


@register_command("incompleteness", "Vanishing-length path of open plane curves.", [
    METRIC_ARGUMENT,
    (("--preset",), {"type": VanishingPreset.parse, "default": VanishingPreset("f0g0")}),
    (("--grid",), {"type": grid, "default": (512, 200), "help": "NxM: nodes per curve and time steps."}),
    (("--partner",), {"type": VanishingPreset.parse, "default": None, "help": "Preset for the homotopy bound."}),
])
def incompleteness(args) -> None:
    spec = load_metric(args.metric)
    samples, steps = args.grid
    report = incompleteness_demo(spec, args.preset, samples, steps, args.partner)
    inputs = {
        "metric": args.metric,
        "preset": args.preset.label(),
        "grid": f"{samples}x{steps}",
        "partner": None if args.partner is None else args.partner.label(),
    }
    _emit(args, inputs, report.to_dict(), report.rows, INCOMPLETENESS_COLUMNS)


@register_command("equivalence", "Ratios of the G- and H-norms over random fields.", [
    METRIC_ARGUMENT,
    (("--curve",), {"required": True, "help": "Curve JSON file."}),
    (("--samples",), {"type": int, "default": 32}),
    (("--h-order",), {"type": int, "default": None}),
])
def equivalence(args) -> None:
    spec = load_metric(args.metric)
    curve = load_curve(args.curve)
    report = equivalence_probe(spec, curve, args.samples, _seed(args), args.h_order)
    inputs = {"metric": args.metric, "curve": args.curve, "samples": args.samples, "h_order": args.h_order}
    _emit(args, inputs, report.to_dict())


@register_command("shrinkage", "Length Lipschitz constant and shrinkage flags along a path.", [
    METRIC_ARGUMENT,
    (("--path",), {"default": None, "help": "Path JSON file."}),
    (("--preset",), {"type": VanishingPreset.parse, "default": None, "help": "Use a vanishing path instead."}),
    (("--grid",), {"type": grid, "default": (512, 200)}),
    (("--threshold",), {"type": float, "default": None}),
])
def shrinkage(args) -> None:
    if (args.path is None) == (args.preset is None):
        raise InvalidArgumentError("give exactly one of --path and --preset.")
    spec = load_metric(args.metric)
    if args.path is not None:
        path = load_path(args.path)
        source = args.path
    else:
        path = vanishing_path(args.preset, *args.grid)
        source = f"{args.preset.label()} {args.grid[0]}x{args.grid[1]}"
    report = shrinkage_probe(spec, path, args.threshold)
    if report.shrinks:
        logging.info(f"Shrinkage along {source}: minimum length {report.min_length:.6g}.")
    inputs = {"metric": args.metric, "path": source, "threshold": args.threshold}
    _emit(args, inputs, report.to_dict(), report.rows, SHRINKAGE_COLUMNS)
