"""Command-line interface: ``dissom {train,evaluate,project,dist-matrix,synth}``.

Settings come from a flat JSON file (``--config``) and can be overridden by
flags of the same name. Exit status is 0 on success, 1 on invalid input or
configuration and 2 on I/O failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .dissimilarity import MEASURES, build_matrix, read_matrix, write_matrix
from .errors import ValidationError
from .evaluation import DistortionReport, compare_measures, evaluate_map, quantization_error
from .intervals import format_interval_csv, read_interval_csv
from .projection import classical_scaling, embedding_csv, emit_scatter_svg
from .synth import geo_intervals, two_groups
from .topology import KernelSchedule, MapTopology
from .trainer import TrainedMap, train

log = logging.getLogger("dissom")

DEFAULTS = {
    "input": None,
    "from_matrix": None,
    "measure": "hausdorff_l2",
    "measure_is_squared": False,
    "rows": 10,
    "cols": 3,
    "q": 1,
    "t_max": None,
    "t_min": 0.5,
    "n_iter": 50,
    "seed": 0,
    "kernel_cutoff": 0.0,
    "output": ".",
}
# Fields that never change results and are left out of the echoed config.
EXECUTION_ONLY = ("output",)

EXIT_VALIDATION = 1
EXIT_IO = 2


def _bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", help="flat JSON config file")
    p.add_argument("--input", default=S, help="interval dataset CSV")
    p.add_argument("--measure", default=S, choices=MEASURES)
    p.add_argument("--measure_is_squared", "--measure-is-squared", dest="measure_is_squared",
                   type=_bool, default=S, help="measure already returns a squared value")
    p.add_argument("--rows", type=int, default=S)
    p.add_argument("--cols", type=int, default=S)
    p.add_argument("--q", type=int, default=S, help="referent items per neuron")
    p.add_argument("--t_max", "--t-max", dest="t_max", type=float, default=S)
    p.add_argument("--t_min", "--t-min", dest="t_min", type=float, default=S)
    p.add_argument("--n_iter", "--n-iter", dest="n_iter", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--kernel_cutoff", "--kernel-cutoff", dest="kernel_cutoff", type=float, default=S)
    p.add_argument("--output", default=S, help="output directory")
    p.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
    p.add_argument("--quiet", action="store_true", help="no per-iteration log lines")


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            try:
                loaded = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ValidationError("config file must hold a JSON object")
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ValidationError(f"unknown config fields: {', '.join(sorted(unknown))}")
        cfg.update(loaded)
    for key in DEFAULTS:
        if key in vars(args):
            cfg[key] = getattr(args, key)
    if cfg["measure"] not in MEASURES:
        raise ValidationError(f"unknown measure {cfg['measure']!r}")
    topology = MapTopology(int(cfg["rows"]), int(cfg["cols"]))
    if cfg["t_max"] is None:
        cfg["t_max"] = KernelSchedule.default_for(topology, float(cfg["t_min"])).t_max
    KernelSchedule(float(cfg["t_max"]), float(cfg["t_min"]), int(cfg["n_iter"]))
    if int(cfg["q"]) < 1:
        raise ValidationError("q must be >= 1")
    return cfg


def _echo(cfg: dict) -> dict:
    return {k: v for k, v in cfg.items() if k not in EXECUTION_ONLY}


def _comment(cfg: dict) -> str:
    return "# config " + json.dumps(_echo(cfg), sort_keys=True, separators=(",", ":")) + "\n"


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _load_matrix(cfg: dict, threads: int):
    if cfg["from_matrix"]:
        with open(cfg["from_matrix"], encoding="utf-8") as fh:
            return read_matrix(fh)
    if not cfg["input"]:
        raise ValidationError("no input: give --input or --from-matrix")
    dataset = read_interval_csv(cfg["input"])
    return build_matrix(dataset, cfg["measure"], bool(cfg["measure_is_squared"]), threads)


def _load_map(path: str) -> TrainedMap:
    with open(path, encoding="utf-8") as fh:
        return TrainedMap.from_json(fh.read())


def _topology_schedule(cfg: dict):
    topology = MapTopology(int(cfg["rows"]), int(cfg["cols"]))
    schedule = KernelSchedule(float(cfg["t_max"]), float(cfg["t_min"]), int(cfg["n_iter"]))
    return topology, schedule


def cmd_train(args) -> int:
    cfg = resolve_config(args)
    matrix = _load_matrix(cfg, args.threads)
    topology, schedule = _topology_schedule(cfg)
    trained = train(matrix, topology, schedule, q=int(cfg["q"]), seed=int(cfg["seed"]),
                    kernel_cutoff=float(cfg["kernel_cutoff"]), threads=args.threads)
    trained.extra = {"input": cfg["input"], "from_matrix": cfg["from_matrix"]}

    out = cfg["output"]
    os.makedirs(out, exist_ok=True)
    _write(os.path.join(out, "map.json"), trained.to_json())

    labels = trained.labels
    lines = [_comment(cfg), "label,winner,referent\n"]
    for i, w in enumerate(trained.winners):
        refs = " ".join(labels[j] for j in trained.referents[w])
        lines.append(f"{_csv_cell(labels[i])},{int(w)},{_csv_cell(refs)}\n")
    _write(os.path.join(out, "assignments.csv"), "".join(lines))

    trace = [_comment(cfg), "iteration,temperature,cost\n"]
    for t, e in enumerate(trained.cost_trace):
        trace.append(f"{t},{schedule.temperature_at(t)!r},{e!r}\n")
    _write(os.path.join(out, "cost_trace.csv"), "".join(trace))

    print(f"final E: {trained.cost_trace[-1]:.10g}")
    if trained.q == 1:
        print(f"quantization error: {quantization_error(trained, matrix):.10g}")
    return 0


def _csv_cell(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def cmd_evaluate(args) -> int:
    cfg = resolve_config(args)
    if not cfg["input"]:
        raise ValidationError("evaluate needs --input with lon/lat metadata")
    dataset = read_interval_csv(cfg["input"])
    for attr in ("lon", "lat"):
        if attr not in dataset.metadata:
            raise ValidationError(f"missing metadata: dataset has no {attr!r} column")
    out = cfg["output"]
    os.makedirs(out, exist_ok=True)
    rows = []
    map_path = args.map or os.path.join(out, "map.json")
    if args.map or not args.compare:
        trained = _load_map(map_path)
        if tuple(trained.labels) != tuple(dataset.labels):
            raise ValidationError("label mismatch between map and dataset")
        matrix = None
        if trained.measure in MEASURES:
            matrix = build_matrix(dataset, trained.measure, trained.measure_is_squared, args.threads)
        rows.append(evaluate_map(trained, dataset, matrix))
        report = DistortionReport(rows)
        _write(os.path.join(out, "distortions.csv"), _comment(cfg) + report.to_csv())
        sys.stdout.write(report.to_text())
    if args.compare:
        measures = [m.strip() for m in args.compare.split(",") if m.strip()]
        for m in measures:
            if m not in MEASURES:
                raise ValidationError(f"unknown measure {m!r}")
        topology, schedule = _topology_schedule(cfg)
        report = compare_measures(dataset, measures, topology, schedule, seed=int(cfg["seed"]),
                                  measure_is_squared=bool(cfg["measure_is_squared"]),
                                  kernel_cutoff=float(cfg["kernel_cutoff"]), threads=args.threads)
        _write(os.path.join(out, "comparison.csv"), _comment(cfg) + report.to_csv())
        _write(os.path.join(out, "comparison.txt"), report.to_text())
        sys.stdout.write(report.to_text())
    return 0


def cmd_project(args) -> int:
    cfg = resolve_config(args)
    matrix = _load_matrix(cfg, args.threads)
    trained = None
    if args.map:
        trained = _load_map(args.map)
        if tuple(trained.labels) != tuple(matrix.labels):
            raise ValidationError("label mismatch between map and dataset")
    emb = classical_scaling(matrix)
    if emb.degenerate:
        log.warning("non-positive leading eigenvalue; a coordinate column is zero")
    if emb.negative_mass > 0:
        log.info("negative eigenvalue mass %.4g (dissimilarity is not Euclidean)", emb.negative_mass)
    out = cfg["output"]
    os.makedirs(out, exist_ok=True)
    winners = trained.winners if trained else None
    _write(os.path.join(out, "embedding.csv"),
           _comment(cfg) + embedding_csv(emb, matrix.labels, winners))
    if trained:
        svg = emit_scatter_svg(emb, trained.winners, trained.referents, trained.topology,
                               labels=matrix.labels)
    else:
        svg = emit_scatter_svg(emb, labels=matrix.labels)
    desc = "<!-- " + json.dumps(_echo(cfg), sort_keys=True).replace("--", "- -") + " -->\n"
    head, body = svg.split("\n", 1)
    _write(os.path.join(out, "map.svg"), head + "\n" + desc + body)
    return 0


def cmd_distmatrix(args) -> int:
    cfg = resolve_config(args)
    if not cfg["input"]:
        raise ValidationError("dist-matrix needs --input")
    dataset = read_interval_csv(cfg["input"])
    matrix = build_matrix(dataset, cfg["measure"], bool(cfg["measure_is_squared"]), args.threads)
    path = args.out or os.path.join(cfg["output"], "matrix.csv")
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    _write(path, _comment(cfg) + write_matrix(matrix))
    return 0


def cmd_synth(args) -> int:
    if args.kind == "geo":
        dataset = geo_intervals(args.n, args.seed, args.noise)
    else:
        dataset, _ = two_groups(args.n, args.p, args.seed, args.spread, args.separation)
    text = format_interval_csv(dataset)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        _write(args.out, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dissom", description="Batch self-organizing map for dissimilarity data")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a map; writes map.json, assignments.csv, cost_trace.csv")
    _add_config_flags(p)
    p.add_argument("--from-matrix", "--from_matrix", dest="from_matrix", default=argparse.SUPPRESS,
                   help="train on an exported dissimilarity matrix instead of --input")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="longitude/latitude distortions of a trained map")
    _add_config_flags(p)
    p.add_argument("--map", help="map.json (default: <output>/map.json)")
    p.add_argument("--compare", help="comma-separated measures to train and compare")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("project", help="classical-scaling embedding and SVG scatter")
    _add_config_flags(p)
    p.add_argument("--map", help="trained map.json; without it the plot is uncolored")
    p.add_argument("--from-matrix", "--from_matrix", dest="from_matrix", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("dist-matrix", help="export the squared dissimilarity matrix")
    _add_config_flags(p)
    p.add_argument("--out", help="matrix file (default: <output>/matrix.csv)")
    p.set_defaults(func=cmd_distmatrix)

    p = sub.add_parser("synth", help="generate a synthetic interval dataset")
    p.add_argument("--kind", choices=("geo", "two-groups"), default="geo")
    p.add_argument("--n", type=int, default=265)
    p.add_argument("--p", type=int, default=3, help="variables (two-groups only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.3, help="geo only")
    p.add_argument("--spread", type=float, default=1.0, help="two-groups only")
    p.add_argument("--separation", type=float, default=20.0, help="two-groups only")
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if getattr(args, "quiet", False) else logging.INFO,
        format="%(message)s", stream=sys.stderr, force=True)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (IndexError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
