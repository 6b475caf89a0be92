"""End-to-end orchestration: one entry point for a full inference run.

The command line layer and the experiment sweeps both go through
run_inference so that every run applies the same stages in the same
order: partition, core-relative voting, periphery propagation,
thresholding, then heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .core import CoreGraph, KShellIndex, corrupt_core, grow_core, k_shell_decompose
from .engine import (
    InferenceConfig,
    PathPartition,
    finalize,
    partition_paths,
    phase1,
    phase2,
)
from .graph import (
    METHOD_SIBLING_DB,
    AsGraph,
    AsPath,
    Classification,
    EdgeKey,
    RelType,
)
from .heuristics import HeuristicConfig, apply_tiebreaks, infer_gap_p2p
from .ingest import SiblingSet
from .metrics import (
    ReferenceSet,
    RunMetrics,
    compare,
    summarize_classifications,
    vote_share_histogram,
)


@dataclass
class RunResult:
    """Everything a single inference run produced."""

    graph: AsGraph
    core: CoreGraph
    partition: PathPartition
    classifications: dict[EdgeKey, Classification]
    sibling_records: list[Classification] = field(default_factory=list)
    phase1_voted: set[EdgeKey] = field(default_factory=set)
    phase2_rounds: int = 0
    valley_paths: int = 0

    def all_records(self) -> list[Classification]:
        """Edge classifications plus sibling records, in stable order."""
        records = [self.classifications[key] for key in sorted(self.classifications)]
        records.extend(self.sibling_records)
        return records


def run_inference(
    graph: AsGraph,
    paths: Sequence[AsPath],
    core: CoreGraph,
    engine_config: InferenceConfig | None = None,
    heuristic_config: HeuristicConfig | None = None,
    kshell: KShellIndex | None = None,
    siblings: SiblingSet | None = None,
) -> RunResult:
    """Run the full pipeline without mutating the input graph.

    Votes accumulate on a structural copy, so repeated runs over the same
    graph (as in the sweeps) stay independent.
    """
    engine_config = engine_config or InferenceConfig()
    heuristic_config = heuristic_config or HeuristicConfig()

    work = graph.copy_unvoted()
    partition = partition_paths(paths, core, engine_config.max_core_hops)
    p1 = phase1(work, partition.through_core, core, engine_config)
    p2 = phase2(work, partition.periphery, engine_config)
    classifications = finalize(work, engine_config, core, p1.voted_edges)

    classifications.update(infer_gap_p2p(partition.periphery, classifications))

    if heuristic_config.tiebreak is not None:
        if heuristic_config.tiebreak == "kshell" and kshell is None:
            kshell = k_shell_decompose(graph)
        classifications.update(
            apply_tiebreaks(work, classifications, heuristic_config, kshell)
        )

    sibling_records = []
    if siblings is not None:
        for pair in siblings.pairs():
            sibling_records.append(
                Classification(pair, RelType.S2S, METHOD_SIBLING_DB)
            )

    return RunResult(
        graph=work,
        core=core,
        partition=partition,
        classifications=classifications,
        sibling_records=sibling_records,
        phase1_voted=p1.voted_edges,
        phase2_rounds=p2.rounds,
        valley_paths=p1.valley_paths,
    )


def summarize(result: RunResult, reference: ReferenceSet | None = None) -> RunMetrics:
    edges, counts, pct_classified, pct_deterministic, pct_heuristic = (
        summarize_classifications(result.all_records())
    )
    metrics = RunMetrics(
        edges=edges,
        paths_total=result.partition.total,
        pct_classified=pct_classified,
        pct_deterministic=pct_deterministic,
        pct_heuristic=pct_heuristic,
        method_counts=counts,
        histogram=vote_share_histogram(result.graph),
    )
    total_paths = result.partition.total
    if total_paths:
        invalid = len(result.partition.invalid) + result.valley_paths
        metrics.pct_through_core = (
            100.0 * len(result.partition.through_core) / total_paths
        )
        metrics.pct_invalid_paths = 100.0 * invalid / total_paths
    if reference is not None:
        cmp = compare(result.all_records(), reference)
        metrics.pct_match_reference_overall = cmp.pct_match_overall
        metrics.pct_match_reference_both = cmp.pct_match_both
    return metrics


def corruption_sweep(
    graph: AsGraph,
    paths: Sequence[AsPath],
    core: CoreGraph,
    fractions: Sequence[float],
    seeds: Sequence[int],
    engine_config: InferenceConfig | None = None,
    heuristic_config: HeuristicConfig | None = None,
    reference: ReferenceSet | None = None,
) -> list[dict[str, object]]:
    """Re-run inference with progressively randomized cores.

    Each row holds one (fraction, seed) cell; fraction 0 is re-run as-is,
    so its row equals the uncorrupted run.
    """
    kshell = None
    if heuristic_config is not None and heuristic_config.tiebreak == "kshell":
        kshell = k_shell_decompose(graph)
    rows: list[dict[str, object]] = []
    for fraction in fractions:
        replace = round(fraction * len(core.vertices))
        for seed in seeds:
            corrupted = corrupt_core(core, graph, replace, seed)
            result = run_inference(
                graph, paths, corrupted, engine_config, heuristic_config, kshell
            )
            metrics = summarize(result, reference)
            row: dict[str, object] = {
                "fraction": fraction,
                "seed": seed,
                "replaced": replace,
            }
            row.update(metrics.row())
            rows.append(row)
    return rows


def core_size_sweep(
    graph: AsGraph,
    paths: Sequence[AsPath],
    strategy: str,
    sizes: Sequence[int],
    engine_config: InferenceConfig | None = None,
    heuristic_config: HeuristicConfig | None = None,
    reference: ReferenceSet | None = None,
) -> list[dict[str, object]]:
    """Grow cores of increasing size and record how the run responds."""
    kshell = k_shell_decompose(graph) if strategy == "kshell" else None
    tiebreak_kshell = (
        heuristic_config is not None and heuristic_config.tiebreak == "kshell"
    )
    if tiebreak_kshell and kshell is None:
        kshell = k_shell_decompose(graph)
    rows: list[dict[str, object]] = []
    for size in sizes:
        core = grow_core(graph, strategy, size, kshell)
        result = run_inference(
            graph, paths, core, engine_config, heuristic_config, kshell
        )
        metrics = summarize(result, reference)
        row: dict[str, object] = {
            "size": size,
            "strategy": strategy,
            "core_vertices": core.n_vertices,
            "core_edges": core.n_edges,
        }
        row.update(metrics.row())
        rows.append(row)
    return rows
