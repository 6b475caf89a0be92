"""Run metrics, reference comparison, stability, and robustness sweeps.

Reference files use one record per line, ``A|B|code``, where code -1 means
A is a provider of B, 0 means peering, and 1 means the pair are siblings.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from .errors import ParseError
from .graph import (
    DETERMINISTIC_METHODS,
    HEURISTIC_METHODS,
    METHOD_SIBLING_DB,
    AsGraph,
    Classification,
    EdgeKey,
    RelType,
    edge_key,
)
from .ingest import SiblingSet

HISTOGRAM_BINS = 20


@dataclass
class ReferenceSet:
    """External relationship labels in canonical low->high order."""

    rels: dict[EdgeKey, RelType] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rels)

    def get(self, key: EdgeKey) -> RelType | None:
        return self.rels.get(key)


def load_reference(
    lines: Iterable[str],
    siblings: SiblingSet | None = None,
    source: str = "<reference>",
) -> ReferenceSet:
    """Parse a reference file, mapping ASes through the sibling merge.

    Records that collapse onto a single AS after merging are skipped. Two
    records that disagree about the same pair make the file unusable and
    raise a parse error.
    """
    rels: dict[EdgeKey, RelType] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields_ = line.split("|")
        if len(fields_) != 3:
            raise ParseError(f"expected A|B|code, got {line!r}", source, lineno)
        try:
            a, b, code = int(fields_[0]), int(fields_[1]), int(fields_[2])
        except ValueError:
            raise ParseError(f"bad record {line!r}", source, lineno) from None
        if siblings is not None:
            a = siblings.representative(a)
            b = siblings.representative(b)
        if a == b:
            continue
        if code == -1:
            rel = RelType.P2C if a < b else RelType.C2P
        elif code == 0:
            rel = RelType.P2P
        elif code == 1:
            rel = RelType.S2S
        else:
            raise ParseError(f"unknown relationship code {code}", source, lineno)
        key = edge_key(a, b)
        existing = rels.get(key)
        if existing is not None and existing is not rel:
            raise ParseError(
                f"conflicting records for pair {key}: {existing.value} vs {rel.value}",
                source,
                lineno,
            )
        rels[key] = rel
    return ReferenceSet(rels)


@dataclass
class CompareResult:
    """Agreement between a run's labels and a reference.

    Denominators: pct_match_overall divides matches by every edge of the
    inferred graph; pct_match_both divides by the edges both sides
    classified. Sibling reference records never count toward agreement,
    but pairs that should have been merged away are reported.
    """

    edges_total: int = 0
    both_classified: int = 0
    matches: int = 0
    reference_only: int = 0
    s2s_unmerged: int = 0

    @property
    def pct_match_overall(self) -> float:
        return 100.0 * self.matches / self.edges_total if self.edges_total else 0.0

    @property
    def pct_match_both(self) -> float | None:
        if self.both_classified == 0:
            return None
        return 100.0 * self.matches / self.both_classified


def compare(
    classifications: Iterable[Classification], reference: ReferenceSet
) -> CompareResult:
    result = CompareResult()
    seen: set[EdgeKey] = set()
    for cls in classifications:
        if cls.method == METHOD_SIBLING_DB:
            continue
        seen.add(cls.edge)
        result.edges_total += 1
        ref = reference.get(cls.edge)
        if ref is RelType.S2S:
            result.s2s_unmerged += 1
            continue
        if ref is None or not cls.classified:
            continue
        result.both_classified += 1
        if cls.rel is ref:
            result.matches += 1
    result.reference_only = sum(1 for key in reference.rels if key not in seen)
    return result


def stability(
    a: Iterable[Classification], b: Iterable[Classification]
) -> tuple[float | None, int]:
    """Agreement on edges classified in both runs; None when none overlap."""
    labels_a = {c.edge: c.rel for c in a if c.classified}
    labels_b = {c.edge: c.rel for c in b if c.classified}
    shared = labels_a.keys() & labels_b.keys()
    if not shared:
        return None, 0
    agree = sum(1 for key in shared if labels_a[key] is labels_b[key])
    return agree / len(shared), len(shared)


def vote_share_histogram(
    graph: AsGraph, bins: int = HISTOGRAM_BINS
) -> list[tuple[float, float, int]]:
    """Histogram of per-edge p2c vote shares (low->high reading).

    Only edges with at least one classification vote are counted, so the
    bin counts sum to the number of voted edges. A clean corpus is bimodal:
    everything lands in the bins containing 0 and 1.
    """
    shares = []
    for key in graph.edges:
        tally = graph.tally(key)
        total = tally.classification_votes()
        if total:
            shares.append(tally.high_customer / total)
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(shares, bins=edges)
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(bins)
    ]


@dataclass
class RunMetrics:
    """Headline numbers for one inference run.

    Percentages over edges use the inferred graph's edge count as the
    denominator; percentages over paths use the partition total (valid,
    periphery, and invalid paths together). pct_invalid_paths counts both
    paths over the core hop limit and paths that drew an invalid vote.
    """

    edges: int = 0
    paths_total: int = 0
    pct_through_core: float = 0.0
    pct_invalid_paths: float = 0.0
    pct_classified: float = 0.0
    pct_deterministic: float = 0.0
    pct_heuristic: float = 0.0
    pct_match_reference_overall: float | None = None
    pct_match_reference_both: float | None = None
    method_counts: dict[str, int] = field(default_factory=dict)
    histogram: list[tuple[float, float, int]] = field(default_factory=list)

    def row(self) -> dict[str, object]:
        row: dict[str, object] = {
            "edges": self.edges,
            "paths_total": self.paths_total,
            "pct_through_core": round(self.pct_through_core, 4),
            "pct_invalid_paths": round(self.pct_invalid_paths, 4),
            "pct_classified": round(self.pct_classified, 4),
            "pct_deterministic": round(self.pct_deterministic, 4),
            "pct_heuristic": round(self.pct_heuristic, 4),
            "pct_match_reference_overall": (
                "" if self.pct_match_reference_overall is None
                else round(self.pct_match_reference_overall, 4)
            ),
            "pct_match_reference_both": (
                "" if self.pct_match_reference_both is None
                else round(self.pct_match_reference_both, 4)
            ),
        }
        for method in sorted(self.method_counts):
            row[f"method_{method.replace('-', '_')}"] = self.method_counts[method]
        return row


def summarize_classifications(
    classifications: Iterable[Classification],
) -> tuple[int, dict[str, int], float, float, float]:
    """Edge count, per-method counts, and classified shares in percent."""
    counts: dict[str, int] = {}
    edges = 0
    classified = deterministic = heuristic = 0
    for cls in classifications:
        if cls.method == METHOD_SIBLING_DB:
            counts[METHOD_SIBLING_DB] = counts.get(METHOD_SIBLING_DB, 0) + 1
            continue
        edges += 1
        counts[cls.method] = counts.get(cls.method, 0) + 1
        if cls.classified:
            classified += 1
        if cls.method in DETERMINISTIC_METHODS:
            deterministic += 1
        elif cls.method in HEURISTIC_METHODS:
            heuristic += 1
    if edges == 0:
        return 0, counts, 0.0, 0.0, 0.0
    return (
        edges,
        counts,
        100.0 * classified / edges,
        100.0 * deterministic / edges,
        100.0 * heuristic / edges,
    )


def write_metrics_csv(
    rows: Sequence[Mapping[str, object]], stream: TextIO
) -> None:
    """Write rows with a fixed, order-stable header union."""
    if not rows:
        return
    header: list[str] = []
    for row in rows:
        for name in row:
            if name not in header:
                header.append(name)
    writer = csv.DictWriter(stream, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({name: row.get(name, "") for name in header})


def write_histogram_csv(
    histogram: Sequence[tuple[float, float, int]], stream: TextIO
) -> None:
    stream.write("bin_lo,bin_hi,count\n")
    for lo, hi, count in histogram:
        stream.write(f"{lo:.2f},{hi:.2f},{count}\n")


CLASSIFICATION_HEADER = (
    "low,high,rel,method,share_c2p,share_p2c,share_p2p,votes_invalid"
)


def write_classifications_csv(
    records: Iterable[Classification], stream: TextIO
) -> None:
    """Write classification records; byte-stable for identical runs."""
    stream.write(CLASSIFICATION_HEADER + "\n")
    for cls in records:
        stream.write(
            f"{cls.edge[0]},{cls.edge[1]},{cls.rel.value},{cls.method},"
            f"{cls.share_c2p:.6f},{cls.share_p2c:.6f},{cls.share_p2p:.6f},"
            f"{cls.invalid_votes}\n"
        )
