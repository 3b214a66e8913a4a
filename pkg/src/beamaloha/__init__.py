"""Monte Carlo simulator for multi-base-station slotted ALOHA with
randomized directional beams: Poisson deployments, bipartite coverage
graphs, singleton and SIC peeling decoders, analytical throughput bounds,
and a reproducible sweep harness.
"""

from .analysis import (
    BeamSolution,
    DeTrace,
    SystemParams,
    de_throughput_upper,
    density_evolution,
    noncoop_bound,
    optimal_beam_params,
)
from .decoders import (
    DecodeResult,
    decode_cooperative_sic,
    decode_noncooperative,
    residual_graph,
)
from .geometry import (
    Beam,
    Deployment,
    PolarOffset,
    PppParams,
    Region,
    covers,
    polar_offset,
    sample_deployment,
)
from .graph import (
    ConnectivityGraph,
    DegreeStats,
    build_graph,
    build_graph_indexed,
    degree_stats,
    theoretical_degree_pmf,
)
from .harness import (
    ExperimentConfig,
    SweepResult,
    SweepRow,
    SweepSpec,
    TrialRecord,
    estimate_throughput,
    figure_configs,
    run_figure,
    run_sweep,
    run_trial,
)
from .sweep_io import read_csv, read_json, write_csv, write_json

__version__ = "0.1.0"

__all__ = [
    "Beam",
    "BeamSolution",
    "ConnectivityGraph",
    "DecodeResult",
    "DegreeStats",
    "Deployment",
    "DeTrace",
    "ExperimentConfig",
    "PolarOffset",
    "PppParams",
    "Region",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "SystemParams",
    "TrialRecord",
    "build_graph",
    "build_graph_indexed",
    "covers",
    "de_throughput_upper",
    "decode_cooperative_sic",
    "decode_noncooperative",
    "degree_stats",
    "density_evolution",
    "estimate_throughput",
    "figure_configs",
    "noncoop_bound",
    "optimal_beam_params",
    "polar_offset",
    "read_csv",
    "read_json",
    "residual_graph",
    "run_figure",
    "run_sweep",
    "run_trial",
    "sample_deployment",
    "theoretical_degree_pmf",
    "write_csv",
    "write_json",
]
