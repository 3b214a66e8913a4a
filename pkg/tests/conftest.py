"""Shared test oracles: brute-force graph construction, sequential peeling,
and a configuration-model bipartite graph sampler.

These deliberately avoid the library's vectorized code paths so they can
serve as independent references.
"""
from __future__ import annotations

import math

import numpy as np

from beamaloha import ConnectivityGraph, Deployment, PppParams, Region, covers, sample_deployment


def brute_force_graph(dep: Deployment) -> ConnectivityGraph:
    """All-pairs edge set via the scalar coverage predicate, one pair at a time."""
    ue_idx, bs_idx = [], []
    beams = dep.ue_beams
    for i in range(dep.n_ue):
        for j in range(dep.n_bs):
            if covers(dep.ue_positions[i], beams[i], dep.bs_positions[j], dep.region):
                ue_idx.append(i)
                bs_idx.append(j)
    return ConnectivityGraph.from_edges(
        dep.n_ue, dep.n_bs, np.array(ue_idx, dtype=np.int64), np.array(bs_idx, dtype=np.int64)
    )


def sequential_peel(graph: ConnectivityGraph, rng: np.random.Generator) -> set[int]:
    """Peel one singleton station at a time, scanning stations in a shuffled order."""
    bs_sets = [set(graph.bs_neighbors(j).tolist()) for j in range(graph.n_bs)]
    ue_sets = [graph.ue_neighbors(i).tolist() for i in range(graph.n_ue)]
    order = list(range(graph.n_bs))
    rng.shuffle(order)
    collected: set[int] = set()
    progress = True
    while progress:
        progress = False
        for j in order:
            if len(bs_sets[j]) == 1:
                (i,) = bs_sets[j]
                collected.add(i)
                for jj in ue_sets[i]:
                    bs_sets[jj].discard(i)
                progress = True
    return collected


def sample_configuration_model(
    n_bs: int, g: float, dbar_bs: float, seed: int
) -> tuple[ConnectivityGraph, int]:
    """Bipartite configuration model matching the asymptotic degree laws.

    ``round(g * n_bs)`` users draw Poisson(dbar_bs / g) degrees and attach
    each edge to a uniformly random station, so station degrees tend to
    Poisson(dbar_bs). Duplicate user-station pairs collapse (negligible at
    these sizes).
    """
    rng = np.random.default_rng(seed)
    n_ue = int(round(g * n_bs))
    deg = rng.poisson(dbar_bs / g, n_ue)
    ue_idx = np.repeat(np.arange(n_ue, dtype=np.int64), deg)
    bs_idx = rng.integers(0, n_bs, int(deg.sum()), dtype=np.int64)
    return ConnectivityGraph.from_edges(n_ue, n_bs, ue_idx, bs_idx), n_ue


def random_deployment(
    rng: np.random.Generator,
    lam_lo: float = 5.0,
    lam_hi: float = 150.0,
    r_lo: float = 0.02,
    r_hi: float = 0.4,
) -> Deployment:
    """One deployment with parameters drawn across the model space."""
    mode = "torus" if rng.integers(2) else "hard"
    params = PppParams(
        lambda_ue=float(rng.uniform(lam_lo, lam_hi)),
        lambda_bs=float(rng.uniform(lam_lo, lam_hi)),
        p=float(rng.uniform(0.3, 1.0)),
    )
    return sample_deployment(
        params,
        Region(boundary_mode=mode),
        int(rng.integers(2**63)),
        theta=float(rng.uniform(0.05, 2 * math.pi)),
        r=float(rng.uniform(r_lo, r_hi)),
    )
