"""Path corpus loading: parsing, sibling merging, cleanup, noise filtering.

Input conventions:

* BGP path files: one path per line, space separated AS numbers, optional
  trailing ``weight=K`` token, ``#`` starts a comment line.
* Traceroute path files: same, but each line is prefixed ``agent_id|``.
* Sibling files: two AS numbers per line; each line declares the pair to
  belong to one organisation.

Paths are normalized before use: sibling ASes are collapsed onto one
representative, consecutive duplicate hops (prepending artifacts) are
merged, and a path that revisits an AS is cut just before the hop that
closes the loop. Traceroute-only edges reported by fewer than two
measurement agents are dropped and the affected paths are split around
them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError
from .graph import MAX_ASN, AsGraph, AsPath, EdgeKey, edge_key

DROP_SHORT = "short"
DROP_LOOP = "loop"


class SiblingSet:
    """Union-find over AS numbers; the representative is the smallest member.

    ASes never mentioned in a sibling file are their own representative.
    """

    def __init__(self):
        self._parent: dict[int, int] = {}
        self._pairs: set[EdgeKey] = set()

    def representative(self, asn: int) -> int:
        parent = self._parent
        if asn not in parent:
            return asn
        root = asn
        while parent[root] != root:
            root = parent[root]
        while parent[asn] != root:
            parent[asn], asn = root, parent[asn]
        return root

    def merge(self, a: int, b: int) -> None:
        """Declare a and b siblings. Records the pair for later reporting."""
        self._pairs.add(edge_key(a, b))
        ra = self.representative(a)
        rb = self.representative(b)
        self._parent.setdefault(ra, ra)
        self._parent.setdefault(rb, rb)
        if ra == rb:
            return
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        self._parent[hi] = lo

    def pairs(self) -> list[EdgeKey]:
        """Declared sibling pairs, deduplicated, in sorted order."""
        return sorted(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)


def load_sibling_pairs(lines: Iterable[str], source: str = "<siblings>") -> SiblingSet:
    """Parse a sibling file into a SiblingSet.

    A pair naming the same AS twice is rejected: a self-sibling carries no
    information and usually indicates a malformed file.
    """
    siblings = SiblingSet()
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(
                f"expected two AS numbers, got {line!r}", source, lineno
            )
        try:
            a, b = (_parse_asn(t) for t in tokens)
        except ValueError as exc:
            raise ParseError(str(exc), source, lineno) from None
        if a == b:
            raise ParseError(f"AS {a} declared sibling of itself", source, lineno)
        siblings.merge(a, b)
    return siblings


def _parse_asn(token: str) -> int:
    value = int(token)
    # AS 0 is reserved and never routes, so it marks a malformed line.
    if not (1 <= value <= MAX_ASN):
        raise ValueError(f"AS number out of range: {token}")
    return value


@dataclass(frozen=True)
class NormalizedPath:
    """Outcome of normalizing one raw hop sequence."""

    hops: tuple[int, ...] | None
    truncated: bool = False
    drop_reason: str | None = None


def normalize_path(
    raw_hops: Sequence[int], siblings: SiblingSet | None = None
) -> NormalizedPath:
    """Normalize a raw hop sequence.

    Steps, in order: map every hop to its sibling representative, merge
    consecutive duplicates, and if a hop closes a loop keep only the strict
    prefix before it. Results with fewer than two hops are dropped.
    """
    if siblings is not None:
        mapped = [siblings.representative(h) for h in raw_hops]
    else:
        mapped = list(raw_hops)

    collapsed = [h for i, h in enumerate(mapped) if i == 0 or h != mapped[i - 1]]

    truncated = False
    seen: set[int] = set()
    hops: list[int] = []
    for h in collapsed:
        if h in seen:
            truncated = True
            break
        seen.add(h)
        hops.append(h)

    if len(hops) < 2:
        reason = DROP_LOOP if truncated else DROP_SHORT
        return NormalizedPath(None, truncated, reason)
    return NormalizedPath(tuple(hops), truncated, None)


@dataclass
class IngestReport:
    """Counters describing what ingestion kept, trimmed, and discarded."""

    paths_read: int = 0
    paths_dropped_loop: int = 0
    paths_dropped_short: int = 0
    paths_truncated_loop: int = 0
    edges_filtered_single_agent: int = 0
    paths_split: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "paths_read": self.paths_read,
            "paths_dropped_loop": self.paths_dropped_loop,
            "paths_dropped_short": self.paths_dropped_short,
            "paths_truncated_loop": self.paths_truncated_loop,
            "edges_filtered_single_agent": self.edges_filtered_single_agent,
            "paths_split": self.paths_split,
        }


@dataclass(frozen=True)
class RawPath:
    hops: tuple[int, ...]
    source: str
    agent: str
    weight: int


def parse_path_line(line: str, source: str) -> RawPath | None:
    """Parse one line of a path file; returns None for blanks and comments.

    Raises ValueError on malformed content; callers add file/line context.
    """
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None

    agent = ""
    body = stripped
    if source == "trace":
        if "|" not in stripped:
            raise ValueError("traceroute line is missing the agent_id| prefix")
        agent, body = stripped.split("|", 1)
        agent = agent.strip()
        if not agent:
            raise ValueError("empty agent id")
    if "|" in body:
        raise ValueError("unexpected '|' in path hops")

    tokens = body.split()
    weight = 1
    if tokens and tokens[-1].startswith("weight="):
        try:
            weight = int(tokens[-1][len("weight="):])
        except ValueError:
            raise ValueError(f"bad weight token {tokens[-1]!r}") from None
        if weight < 1:
            raise ValueError(f"weight must be >= 1, got {weight}")
        tokens = tokens[:-1]
    if not tokens:
        raise ValueError("no hops on line")

    hops = tuple(_parse_asn(t) for t in tokens)
    return RawPath(hops, source, agent, weight)


def read_path_file(
    stream: Iterable[str], source: str, name: str = "<paths>"
) -> list[RawPath]:
    raws = []
    for lineno, line in enumerate(stream, 1):
        try:
            raw = parse_path_line(line, source)
        except ValueError as exc:
            raise ParseError(str(exc), name, lineno) from None
        if raw is not None:
            raws.append(raw)
    return raws


@dataclass
class FilterStats:
    edges_removed: int = 0
    paths_split: int = 0


def filter_single_agent_edges(
    paths: Iterable[AsPath], min_agents: int = 2
) -> tuple[list[AsPath], FilterStats]:
    """Drop traceroute-only edges observed by fewer than min_agents agents.

    An edge survives if at least min_agents distinct agents reported it or
    if it appears in any BGP path. Traceroute paths containing a removed
    edge are split at the removed edges into maximal sub-paths of at least
    two hops; BGP paths pass through untouched.
    """
    paths = list(paths)
    bgp_edges: set[EdgeKey] = set()
    agents: dict[EdgeKey, set[str]] = {}
    for path in paths:
        if path.source == "bgp":
            for u, v in path.edges():
                bgp_edges.add(edge_key(u, v))
        else:
            for u, v in path.edges():
                agents.setdefault(edge_key(u, v), set()).add(path.agent)

    removed = {
        key
        for key, seen_by in agents.items()
        if len(seen_by) < min_agents and key not in bgp_edges
    }

    stats = FilterStats(edges_removed=len(removed))
    if not removed:
        return paths, stats

    kept: list[AsPath] = []
    for path in paths:
        if path.source == "bgp":
            kept.append(path)
            continue
        cut = [
            i
            for i, (u, v) in enumerate(path.edges())
            if edge_key(u, v) in removed
        ]
        if not cut:
            kept.append(path)
            continue
        stats.paths_split += 1
        segment_start = 0
        for i in cut:
            segment = path.hops[segment_start : i + 1]
            if len(segment) >= 2:
                kept.append(
                    AsPath(segment, path.source, path.agent, path.weight)
                )
            segment_start = i + 1
        tail = path.hops[segment_start:]
        if len(tail) >= 2:
            kept.append(AsPath(tail, path.source, path.agent, path.weight))
    return kept, stats


def ingest_paths(
    raw_paths: Iterable[RawPath],
    siblings: SiblingSet | None = None,
    min_agents: int = 2,
) -> tuple[list[AsPath], IngestReport]:
    """Normalize raw paths and apply the multi-agent edge filter."""
    report = IngestReport()
    normalized: list[AsPath] = []
    for raw in raw_paths:
        report.paths_read += 1
        result = normalize_path(raw.hops, siblings)
        if result.truncated:
            report.paths_truncated_loop += 1
        if result.hops is None:
            if result.drop_reason == DROP_LOOP:
                report.paths_dropped_loop += 1
            else:
                report.paths_dropped_short += 1
            continue
        normalized.append(AsPath(result.hops, raw.source, raw.agent, raw.weight))

    kept, stats = filter_single_agent_edges(normalized, min_agents)
    report.edges_filtered_single_agent = stats.edges_removed
    report.paths_split = stats.paths_split
    return kept, report


def load_corpus(
    bgp_streams: Sequence[tuple[str, Iterable[str]]] = (),
    trace_streams: Sequence[tuple[str, Iterable[str]]] = (),
    siblings: SiblingSet | None = None,
    min_agents: int = 2,
) -> tuple[list[AsPath], IngestReport]:
    """Read, normalize, and filter a whole corpus.

    Streams are given as (name, line iterable) pairs; the name is only used
    in parse error messages.
    """
    raws: list[RawPath] = []
    for name, stream in bgp_streams:
        raws.extend(read_path_file(stream, "bgp", name))
    for name, stream in trace_streams:
        raws.extend(read_path_file(stream, "trace", name))
    return ingest_paths(raws, siblings, min_agents)


def build_graph(paths: Iterable[AsPath]) -> AsGraph:
    """Union of all path edges, with zeroed vote tallies."""
    graph = AsGraph()
    for path in paths:
        graph.add_path_edges(path)
    return graph
