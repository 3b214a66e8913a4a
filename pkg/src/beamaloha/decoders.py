"""Per-slot decoding algorithms on the connectivity graph.

Non-cooperative decoding collects exactly the users heard by a degree-1
station. Cooperative decoding additionally subtracts every collected
user's signal from all stations (successive interference cancellation),
which peels the graph round by round until no degree-1 station remains or
an iteration cap is reached. Both decoders leave the input graph untouched.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import ConnectivityGraph, concat_ranges


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one decode: who was collected, and what remains.

    ``per_iteration_collected`` holds the count of users newly collected in
    each productive peeling round (the first entry equals the
    non-cooperative count whenever any round ran). ``residual_edges`` counts
    edges incident to uncollected users; when peeling terminated naturally
    the residual is a stopping set, i.e. no station keeps degree exactly 1.
    """

    collected: frozenset[int]
    iterations: int
    per_iteration_collected: list[int]
    residual_edges: int


def _bs_state(graph: ConnectivityGraph) -> tuple[np.ndarray, np.ndarray]:
    """Per-station degree and sum-of-neighbor-indices working arrays."""
    edge_ue, edge_bs = graph.edge_arrays()
    deg = np.bincount(edge_bs, minlength=graph.n_bs).astype(np.int64)
    acc = np.bincount(edge_bs, weights=edge_ue.astype(np.float64), minlength=graph.n_bs)
    return deg, acc.astype(np.int64)


def decode_noncooperative(graph: ConnectivityGraph) -> DecodeResult:
    """Collect users adjacent to a degree-1 station; no cancellation.

    Stations hearing zero or two-plus users waste the slot.
    """
    deg, acc = _bs_state(graph)
    singles = np.flatnonzero(deg == 1)
    collected = np.unique(acc[singles]) if singles.size else np.empty(0, np.int64)
    removed = int(graph.ue_degrees()[collected].sum()) if collected.size else 0
    return DecodeResult(
        collected=frozenset(int(i) for i in collected),
        iterations=1,
        per_iteration_collected=[int(collected.size)],
        residual_edges=graph.n_edges - removed,
    )


def decode_cooperative_sic(
    graph: ConnectivityGraph, max_iterations: int | None = None
) -> DecodeResult:
    """Iterative peeling with interference cancellation across all stations.

    Each round collects every user adjacent to a currently-degree-1 station,
    then removes all edges of the newly collected users; a round that
    collects nobody terminates the decode. ``max_iterations`` caps the
    number of rounds (``None`` runs to natural termination, which needs at
    most ``n_ue`` rounds since every counted round collects someone).
    """
    if max_iterations is not None and max_iterations < 1:
        raise ValueError(f"max_iterations must be >= 1, got {max_iterations}")
    deg, acc = _bs_state(graph)
    ue_deg = graph.ue_degrees()
    ue_ptr = graph.ue_ptr
    collected_parts: list[np.ndarray] = []
    per_round: list[int] = []
    rounds = 0
    while max_iterations is None or rounds < max_iterations:
        singles = np.flatnonzero(deg == 1)
        if singles.size == 0:
            break
        newly = np.unique(acc[singles])
        rounds += 1
        per_round.append(int(newly.size))
        collected_parts.append(newly)
        # SIC step: remove every edge of the users collected this round.
        counts = ue_deg[newly]
        hit_bs = graph.ue_adj[concat_ranges(ue_ptr[newly], counts)]
        deg -= np.bincount(hit_bs, minlength=graph.n_bs)
        ue_rep = np.repeat(newly, counts)
        acc -= np.bincount(hit_bs, weights=ue_rep.astype(np.float64), minlength=graph.n_bs).astype(
            np.int64
        )
    collected = (
        np.concatenate(collected_parts) if collected_parts else np.empty(0, np.int64)
    )
    return DecodeResult(
        collected=frozenset(int(i) for i in collected),
        iterations=rounds,
        per_iteration_collected=per_round,
        residual_edges=int(deg.sum()),
    )


def residual_graph(graph: ConnectivityGraph, result: DecodeResult) -> ConnectivityGraph:
    """Subgraph induced by the uncollected users (diagnostic for stopping sets).

    Station and user indices are preserved. Raises if the result does not
    belong to the graph (collected set out of range, or edge counts that do
    not reconcile with ``result.residual_edges``).
    """
    if result.collected and (
        min(result.collected) < 0 or max(result.collected) >= graph.n_ue
    ):
        raise ValueError("result does not match graph: collected user out of range")
    keep = np.ones(graph.n_ue, dtype=bool)
    keep[list(result.collected)] = False
    edge_ue, edge_bs = graph.edge_arrays()
    mask = keep[edge_ue]
    if int(mask.sum()) != result.residual_edges:
        raise ValueError(
            "result does not match graph: residual edge count "
            f"{int(mask.sum())} != {result.residual_edges}"
        )
    return ConnectivityGraph.from_edges(graph.n_ue, graph.n_bs, edge_ue[mask], edge_bs[mask])
