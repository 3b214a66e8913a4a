"""Monte Carlo experiment engine: seeded trials, sweeps, figure presets.

A sweep varies exactly one axis (load ``g``, beam range ``r``, or beam
width ``theta``) over a regular grid, runs ``trials`` independent seeded
deployments per grid point, and aggregates normalized throughput
``T = n_collected / lambda_bs`` for the enabled decoders together with the
analytical columns. Trial seeds are derived from
``(config.seed, grid index, trial index)``, so every record is bit-identical
no matter how trials are scheduled.
"""
from __future__ import annotations

import concurrent.futures
import math
import statistics
from dataclasses import dataclass, field

from . import analysis
from .decoders import decode_cooperative_sic, decode_noncooperative
from .geometry import TWO_PI, Deployment, PppParams, Region, sample_deployment
from .graph import build_graph_indexed
from .seeding import derive_seed

SWEEP_AXES = ("g", "r", "theta")
DECODER_NAMES = ("noncoop", "coop")
ANALYSIS_NAMES = ("bound", "de_paper", "de_standard")
OUTPUT_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class SweepSpec:
    """Regular inclusive grid over one sweep axis."""

    axis: str
    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if self.step <= 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.stop < self.start:
            raise ValueError("stop must be >= start")

    def values(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        return [round(self.start + k * self.step, 10) for k in range(n + 1)]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one sweep needs: model parameters, grid, seeding, output."""

    params: PppParams
    region: Region
    theta: float
    r: float
    sweep: SweepSpec
    trials: int = 100
    seed: int = 1
    decoders: frozenset[str] = frozenset(DECODER_NAMES)
    analysis: frozenset[str] = frozenset(("bound", "de_standard"))
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.decoders:
            raise ValueError("at least one decoder must be enabled")
        unknown = self.decoders - set(DECODER_NAMES)
        if unknown:
            raise ValueError(f"unknown decoders: {sorted(unknown)}")
        unknown = self.analysis - set(ANALYSIS_NAMES)
        if unknown:
            raise ValueError(f"unknown analysis selections: {sorted(unknown)}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"output_format must be one of {OUTPUT_FORMATS}")
        if not 0 < self.theta <= TWO_PI:
            raise ValueError(f"theta must lie in (0, 2*pi], got {self.theta}")
        if self.r <= 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if not self.sweep.values():
            raise ValueError("sweep grid is empty")

    def point_setup(self, value: float) -> tuple[PppParams, float, float, float]:
        """Effective (params, theta, r, g) at one grid point.

        Sweeping ``g`` rescales the (unthinned) user intensity as
        ``lambda_ue = g * lambda_bs / p`` so that the effective load
        ``p * lambda_ue / lambda_bs`` equals the grid value; the other axes
        replace the beam template parameter and keep stored intensities.
        """
        base = self.params
        if self.sweep.axis == "g":
            if base.p == 0:
                if value > 0:
                    raise ValueError("activity factor 0 cannot realize a positive load")
                lam_ue = 0.0
            else:
                lam_ue = value * base.lambda_bs / base.p
            params = PppParams(lambda_ue=lam_ue, lambda_bs=base.lambda_bs, p=base.p)
            return params, self.theta, self.r, value
        g = base.p * base.lambda_ue / base.lambda_bs if base.lambda_bs > 0 else 0.0
        if self.sweep.axis == "r":
            return base, self.theta, value, g
        return base, value, self.r, g


@dataclass(frozen=True)
class TrialRecord:
    """One seeded deployment's decode outcome."""

    n_ue: int
    n_bs: int
    n_bs_deg1: int
    n_coll_noncoop: int | None
    n_coll_coop: int | None
    iterations: int
    residual_edges: int


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    g: float
    lambda_ue: float
    lambda_bs: float
    r: float
    theta: float
    trials: int
    mean_T_noncoop: float | None
    std_T_noncoop: float | None
    mean_T_coop: float | None
    std_T_coop: float | None
    bound_noncoop: float | None
    de_upper: float | None
    mean_iterations: float
    mean_residual_edges: float


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)


def estimate_throughput(n_coll_values: list[int], lambda_bs: float) -> tuple[float, float]:
    """Mean and sample standard deviation of ``n_coll / lambda_bs``.

    The standard deviation uses the n-1 normalization and is 0 for a single
    trial.
    """
    if not n_coll_values:
        raise ValueError("n_coll_values must be non-empty")
    if lambda_bs <= 0:
        raise ValueError(f"lambda_bs must be positive, got {lambda_bs}")
    mean = statistics.fmean(n_coll_values) / lambda_bs
    std = statistics.stdev(n_coll_values) / lambda_bs if len(n_coll_values) > 1 else 0.0
    return mean, std


def trial_seed(config_seed: int, point_index: int, trial_index: int) -> int:
    """Stable per-trial seed: SHA-256 over (seed, 'trial', point, trial)."""
    return derive_seed(config_seed, "trial", point_index, trial_index)


def run_trial(config: ExperimentConfig, point_index: int, trial_index: int) -> TrialRecord:
    """Sample one deployment at a grid point and run the enabled decoders."""
    values = config.sweep.values()
    params, theta, r, _ = config.point_setup(values[point_index])
    dep = sample_deployment(
        params,
        config.region,
        trial_seed(config.seed, point_index, trial_index),
        theta=theta,
        r=r,
    )
    return _decode_deployment(dep, config.decoders)


def _decode_deployment(dep: Deployment, decoders: frozenset[str]) -> TrialRecord:
    graph = build_graph_indexed(dep)
    n_bs_deg1 = int((graph.bs_degrees() == 1).sum())
    n_noncoop = None
    n_coop = None
    iterations = 0
    residual = graph.n_edges
    if "noncoop" in decoders:
        res = decode_noncooperative(graph)
        n_noncoop = len(res.collected)
        iterations = res.iterations
        residual = res.residual_edges
    if "coop" in decoders:
        res = decode_cooperative_sic(graph)
        n_coop = len(res.collected)
        iterations = res.iterations
        residual = res.residual_edges
    return TrialRecord(
        n_ue=dep.n_ue,
        n_bs=dep.n_bs,
        n_bs_deg1=n_bs_deg1,
        n_coll_noncoop=n_noncoop,
        n_coll_coop=n_coop,
        iterations=iterations,
        residual_edges=residual,
    )


def _trial_task(args: tuple[ExperimentConfig, int, int]) -> tuple[int, int, TrialRecord]:
    config, point_index, trial_index = args
    return point_index, trial_index, run_trial(config, point_index, trial_index)


def _aggregate_point(
    config: ExperimentConfig, value: float, records: list[TrialRecord]
) -> SweepRow:
    params, theta, r, g = config.point_setup(value)
    lam_bs = params.lambda_bs
    mean_nc = std_nc = mean_c = std_c = None
    if "noncoop" in config.decoders:
        mean_nc, std_nc = estimate_throughput([t.n_coll_noncoop for t in records], lam_bs)
    if "coop" in config.decoders:
        mean_c, std_c = estimate_throughput([t.n_coll_coop for t in records], lam_bs)
    bound = None
    if "bound" in config.analysis:
        bound = analysis.noncoop_bound(
            analysis.SystemParams(g=g, lambda_bs=lam_bs, r=r, theta=theta)
        )
    de_upper = None
    variant = _de_variant(config.analysis)
    if variant is not None:
        de_upper = analysis.de_throughput_upper(g, g * lam_bs * r**2 * theta / 2.0, variant)
    return SweepRow(
        sweep_value=value,
        g=g,
        lambda_ue=params.lambda_ue,
        lambda_bs=lam_bs,
        r=r,
        theta=theta,
        trials=config.trials,
        mean_T_noncoop=mean_nc,
        std_T_noncoop=std_nc,
        mean_T_coop=mean_c,
        std_T_coop=std_c,
        bound_noncoop=bound,
        de_upper=de_upper,
        mean_iterations=statistics.fmean(t.iterations for t in records),
        mean_residual_edges=statistics.fmean(t.residual_edges for t in records),
    )


def _de_variant(analysis_set: frozenset[str]) -> str | None:
    # standard is the reporting default when both variants are requested
    if "de_standard" in analysis_set:
        return "standard"
    if "de_paper" in analysis_set:
        return "paper"
    return None


def run_sweep(config: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Run all grid points; rows are ordered by ascending sweep value.

    ``workers > 1`` fans trials out to a process pool. Every trial is
    independently seeded, and records land in pre-assigned slots, so the
    result does not depend on scheduling.
    """
    values = config.sweep.values()
    slots: list[list[TrialRecord | None]] = [[None] * config.trials for _ in values]
    tasks = [
        (config, pi, ti) for pi in range(len(values)) for ti in range(config.trials)
    ]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            for pi, ti, rec in pool.map(_trial_task, tasks, chunksize=16):
                slots[pi][ti] = rec
    else:
        for task in tasks:
            pi, ti, rec = _trial_task(task)
            slots[pi][ti] = rec
    rows = [
        _aggregate_point(config, value, slots[pi]) for pi, value in enumerate(values)
    ]
    return SweepResult(rows=rows)


# Preset sweep families. Each preset fixes the station density at 1000 on the
# unit square and varies one axis per curve; multi-curve presets concatenate
# one sweep per curve value.
_FIG_DEFAULTS = {"lambda_bs": 1000.0, "p": 1.0}

FIGURE_NAMES = ("fig3", "fig4", "fig5", "fig6")


def figure_configs(
    name: str,
    trials: int = 100,
    seed: int = 1,
    boundary_mode: str = "hard",
    decoders: frozenset[str] = frozenset(DECODER_NAMES),
) -> list[ExperimentConfig]:
    """Experiment configurations making up one preset figure."""
    if name not in FIGURE_NAMES:
        raise ValueError(f"unknown figure preset {name!r}; choose from {FIGURE_NAMES}")
    region = Region(boundary_mode=boundary_mode)
    lam_bs = _FIG_DEFAULTS["lambda_bs"]
    p = _FIG_DEFAULTS["p"]

    def cfg(curve_idx: int, g: float, theta: float, r: float, sweep: SweepSpec) -> ExperimentConfig:
        return ExperimentConfig(
            params=PppParams(lambda_ue=g * lam_bs / p, lambda_bs=lam_bs, p=p),
            region=region,
            theta=theta,
            r=r,
            sweep=sweep,
            trials=trials,
            seed=derive_seed(seed, "figure", name, curve_idx),
            decoders=decoders,
        )

    if name == "fig3":
        return [cfg(0, 0.0, math.pi / 10, 0.1, SweepSpec("g", 0.0, 1.0, 0.05))]
    if name == "fig4":
        r_sweep = SweepSpec("r", 0.01, 0.3, 0.01)
        thetas = [0.1, 0.2, 0.3, TWO_PI]
        return [cfg(i, 1.0, th, 0.1, r_sweep) for i, th in enumerate(thetas)]
    if name == "fig5":
        r_sweep = SweepSpec("r", 0.01, 0.3, 0.01)
        loads = [0.6, 0.7, 0.8, 0.9, 1.0]
        return [cfg(i, g, 0.1, 0.1, r_sweep) for i, g in enumerate(loads)]
    theta_sweep = SweepSpec("theta", 0.05, 1.5, 0.05)
    ranges = [0.1, 0.15, 0.2, 0.25, 0.3]
    return [cfg(i, 0.5, math.pi / 10, r, theta_sweep) for i, r in enumerate(ranges)]


def run_figure(
    name: str,
    trials: int = 100,
    seed: int = 1,
    boundary_mode: str = "hard",
    workers: int = 1,
) -> SweepResult:
    """Run a preset figure; multi-curve presets concatenate curve results."""
    rows: list[SweepRow] = []
    for config in figure_configs(name, trials=trials, seed=seed, boundary_mode=boundary_mode):
        rows.extend(run_sweep(config, workers=workers).rows)
    return SweepResult(rows=rows)
