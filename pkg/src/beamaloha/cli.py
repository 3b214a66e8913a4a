"""Command-line interface.

Subcommands:
  simulate    run one sweep (exactly one of the g/r/theta grids)
  figure      run a named preset sweep family (fig3 .. fig6)
  bound       evaluate the non-cooperative throughput bound
  de          run the density-evolution recursion and print its trace
  graph-dump  sample one deployment and emit its connectivity graph

``simulate`` options may also be supplied through ``--config FILE``
holding flat ``key=value`` lines (same names as the long flags, with
underscores); explicit command-line flags win over file values.
"""
from __future__ import annotations

import argparse
import math
import sys

from . import analysis, sweep_io
from .geometry import TWO_PI, PppParams, Region, sample_deployment
from .graph import build_graph_indexed
from .harness import (
    ANALYSIS_NAMES,
    DECODER_NAMES,
    FIGURE_NAMES,
    ExperimentConfig,
    SweepSpec,
    run_figure,
    run_sweep,
)

_SIMULATE_DEFAULTS = {
    "lambda_bs": 1000.0,
    "g": 0.5,
    "r": 0.1,
    "theta": math.pi / 10,
    "p": 1.0,
    "trials": 100,
    "seed": 1,
    "boundary": "hard",
    "decoders": "noncoop,coop",
    "analysis": "bound,de_standard",
    "format": "csv",
    "workers": 1,
}

_CONVERTERS = {
    "lambda_bs": float,
    "g": float,
    "r": float,
    "theta": float,
    "p": float,
    "trials": int,
    "seed": int,
    "workers": int,
    "g_min": float,
    "g_max": float,
    "g_step": float,
    "r_min": float,
    "r_max": float,
    "r_step": float,
    "theta_min": float,
    "theta_max": float,
    "theta_step": float,
    "boundary": str,
    "decoders": str,
    "analysis": str,
    "format": str,
    "output": str,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beamaloha",
        description="Slotted-ALOHA multi-base-station simulator with randomized directional beams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one parameter sweep")
    sim.add_argument("--config", help="key=value file with defaults for the flags below")
    sim.add_argument("--lambda-bs", type=float, dest="lambda_bs")
    sim.add_argument("--g", type=float, help="fixed load when sweeping r or theta")
    sim.add_argument("--r", type=float, help="fixed beam range when sweeping g or theta")
    sim.add_argument("--theta", type=float, help="fixed beam width when sweeping g or r")
    sim.add_argument("--p", type=float, help="activity factor")
    for axis in ("g", "r", "theta"):
        for part in ("min", "max", "step"):
            sim.add_argument(f"--{axis}-{part}", type=float, dest=f"{axis}_{part}")
    sim.add_argument("--trials", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--boundary", choices=("hard", "torus"))
    sim.add_argument("--decoders", help="comma list from: " + ",".join(DECODER_NAMES))
    sim.add_argument("--analysis", help="comma list from: " + ",".join(ANALYSIS_NAMES))
    sim.add_argument("--format", choices=("csv", "json"))
    sim.add_argument("--output", help="output path (stdout when omitted)")
    sim.add_argument("--workers", type=int, help="parallel trial workers")

    fig = sub.add_parser("figure", help="run a preset sweep family")
    fig.add_argument("name", choices=FIGURE_NAMES)
    fig.add_argument("--trials", type=int, default=100)
    fig.add_argument("--seed", type=int, default=1)
    fig.add_argument("--boundary", choices=("hard", "torus"), default="hard")
    fig.add_argument("--format", choices=("csv", "json"), default="csv")
    fig.add_argument("--output", help="output path (stdout when omitted)")
    fig.add_argument("--workers", type=int, default=1)

    bnd = sub.add_parser("bound", help="evaluate the non-cooperative throughput bound")
    bnd.add_argument("--g", type=float)
    bnd.add_argument("--g-min", type=float, dest="g_min")
    bnd.add_argument("--g-max", type=float, dest="g_max")
    bnd.add_argument("--g-step", type=float, dest="g_step")
    bnd.add_argument("--lambda-bs", type=float, dest="lambda_bs", default=1000.0)
    bnd.add_argument("--r", type=float, default=0.1)
    bnd.add_argument("--theta", type=float, default=math.pi / 10)

    de = sub.add_parser("de", help="run density evolution and print the trace")
    de.add_argument("--variant", choices=analysis.DE_VARIANTS, default="standard")
    de.add_argument("--g", type=float, required=True)
    de.add_argument("--dbar-bs", type=float, dest="dbar_bs", required=True)
    de.add_argument("--max-iter", type=int, dest="max_iter", default=10_000)
    de.add_argument("--tol", type=float, default=1e-10)

    dump = sub.add_parser("graph-dump", help="emit one sampled connectivity graph")
    dump.add_argument("--lambda-ue", type=float, dest="lambda_ue", default=100.0)
    dump.add_argument("--lambda-bs", type=float, dest="lambda_bs", default=100.0)
    dump.add_argument("--p", type=float, default=1.0)
    dump.add_argument("--r", type=float, default=0.1)
    dump.add_argument("--theta", type=float, default=math.pi / 10)
    dump.add_argument("--seed", type=int, default=1)
    dump.add_argument("--boundary", choices=("hard", "torus"), default="hard")
    dump.add_argument("--output", help="output path (stdout when omitted)")

    return parser


def _read_config_file(path: str) -> dict[str, object]:
    values: dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CONVERTERS:
                raise ValueError(f"{path}:{lineno}: unknown option {key!r}")
            values[key] = _CONVERTERS[key](raw.strip())
    return values


def _merged_option(args: argparse.Namespace, file_values: dict[str, object], name: str):
    cli_value = getattr(args, name, None)
    if cli_value is not None:
        return cli_value
    if name in file_values:
        return file_values[name]
    return _SIMULATE_DEFAULTS.get(name)


def _sweep_from_options(opt) -> SweepSpec:
    axes = [
        axis
        for axis in ("g", "r", "theta")
        if any(opt(f"{axis}_{part}") is not None for part in ("min", "max", "step"))
    ]
    if len(axes) != 1:
        raise ValueError(
            "exactly one sweep axis must be given via --g-min/--g-max/--g-step, "
            "--r-min/--r-max/--r-step, or --theta-min/--theta-max/--theta-step"
        )
    axis = axes[0]
    parts = {part: opt(f"{axis}_{part}") for part in ("min", "max", "step")}
    missing = [p for p, v in parts.items() if v is None]
    if missing:
        raise ValueError(f"sweep axis {axis!r} is missing --{axis}-{'/--'.join(missing)}")
    return SweepSpec(axis=axis, start=parts["min"], stop=parts["max"], step=parts["step"])


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_simulate(args: argparse.Namespace) -> int:
    file_values = _read_config_file(args.config) if args.config else {}

    def opt(name: str):
        return _merged_option(args, file_values, name)

    sweep = _sweep_from_options(opt)
    decoders = frozenset(str(opt("decoders")).split(","))
    analysis_set = frozenset(s for s in str(opt("analysis")).split(",") if s)
    g = float(opt("g"))
    p = float(opt("p"))
    lambda_bs = float(opt("lambda_bs"))
    config = ExperimentConfig(
        params=PppParams(
            lambda_ue=(g * lambda_bs / p) if p > 0 else 0.0, lambda_bs=lambda_bs, p=p
        ),
        region=Region(boundary_mode=str(opt("boundary"))),
        theta=float(opt("theta")),
        r=float(opt("r")),
        sweep=sweep,
        trials=int(opt("trials")),
        seed=int(opt("seed")),
        decoders=decoders,
        analysis=analysis_set,
        output_path=opt("output"),
        output_format=str(opt("format")),
    )
    result = run_sweep(config, workers=int(opt("workers")))
    _emit(sweep_io.dumps_result(result, config.output_format), config.output_path)
    return 0


def _cmd_figure(args: argparse.Namespace) -> int:
    result = run_figure(
        args.name,
        trials=args.trials,
        seed=args.seed,
        boundary_mode=args.boundary,
        workers=args.workers,
    )
    _emit(sweep_io.dumps_result(result, args.format), args.output)
    return 0


def _cmd_bound(args: argparse.Namespace) -> int:
    grid_given = any(v is not None for v in (args.g_min, args.g_max, args.g_step))
    if grid_given:
        if None in (args.g_min, args.g_max, args.g_step):
            raise ValueError("--g-min, --g-max and --g-step must be given together")
        spec = SweepSpec(axis="g", start=args.g_min, stop=args.g_max, step=args.g_step)
        for g in spec.values():
            value = analysis.noncoop_bound(
                analysis.SystemParams(g=g, lambda_bs=args.lambda_bs, r=args.r, theta=args.theta)
            )
            print(f"{g:g} {value:.5f}")
        return 0
    if args.g is None:
        raise ValueError("either --g or a --g-min/--g-max/--g-step grid is required")
    value = analysis.noncoop_bound(
        analysis.SystemParams(g=args.g, lambda_bs=args.lambda_bs, r=args.r, theta=args.theta)
    )
    print(f"{value:.5f}")
    return 0


def _cmd_de(args: argparse.Namespace) -> int:
    trace = analysis.density_evolution(
        args.g, args.dbar_bs, variant=args.variant, max_iter=args.max_iter, tol=args.tol
    )
    print(f"variant={trace.variant} g={args.g:g} dbar_bs={args.dbar_bs:g}")
    for l in range(1, len(trace.q)):
        print(
            f"l={l} r={trace.r_seq[l - 1]:.8f} q={trace.q[l]:.8f} "
            f"collect_prob={trace.collect_prob[l]:.8f}"
        )
    print(
        f"converged={trace.converged} iterations={len(trace.r_seq)} "
        f"residual={trace.residual:.3e}"
    )
    if args.g > 0:
        print(f"throughput_upper={args.g * (1.0 - trace.q[-1]):.8f}")
    return 0


def _cmd_graph_dump(args: argparse.Namespace) -> int:
    dep = sample_deployment(
        PppParams(lambda_ue=args.lambda_ue, lambda_bs=args.lambda_bs, p=args.p),
        Region(boundary_mode=args.boundary),
        args.seed,
        theta=args.theta,
        r=args.r,
    )
    graph = build_graph_indexed(dep)
    _emit(graph.to_edge_list_text(), args.output)
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "figure": _cmd_figure,
    "bound": _cmd_bound,
    "de": _cmd_de,
    "graph-dump": _cmd_graph_dump,
}


def cli_main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
