"""Bounded heuristics for edges the deterministic phases left open."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .core import KShellIndex
from .errors import ConfigurationError
from .graph import (
    METHOD_DEGREE_TIEBREAK,
    METHOD_GAP_P2P,
    METHOD_KSHELL_TIEBREAK,
    AsGraph,
    AsPath,
    Classification,
    EdgeKey,
    RelType,
    oriented,
)

TIEBREAK_DEGREE = "degree"
TIEBREAK_KSHELL = "kshell"


@dataclass
class HeuristicConfig:
    """Degree-ratio band and tie-break selector.

    tiebreak None leaves sub-threshold edges unclassified; "degree" and
    "kshell" pick a winner for every remaining edge that is not valley
    flagged.
    """

    degree_ratio_low: float = 0.8
    degree_ratio_high: float = 1.2
    tiebreak: str | None = None

    def __post_init__(self):
        if not 0 < self.degree_ratio_low <= 1 <= self.degree_ratio_high:
            raise ConfigurationError(
                "degree ratio band must satisfy 0 < low <= 1 <= high, got "
                f"[{self.degree_ratio_low}, {self.degree_ratio_high}]"
            )
        if self.tiebreak not in (None, TIEBREAK_DEGREE, TIEBREAK_KSHELL):
            raise ConfigurationError(f"unknown tiebreak {self.tiebreak!r}")


def infer_gap_p2p(
    periphery: Iterable[AsPath],
    classifications: Mapping[EdgeKey, Classification],
) -> dict[EdgeKey, Classification]:
    """Label single unclassified edges wedged between uphill and downhill.

    A path with exactly one unclassified edge whose immediate predecessor
    is c2p and immediate successor is p2c (in traversal order) pins that
    edge at the top of the path, where the only consistent reading is a
    peering. Edges at the path boundary have no such context and are left
    alone, as are paths with two or more open edges. Existing labels are
    never overwritten.
    """
    updates: dict[EdgeKey, Classification] = {}
    for path in periphery:
        keys: list[EdgeKey] = []
        rels: list[RelType | None] = []
        for u, v in path.edges():
            key = (u, v) if u < v else (v, u)
            cls = classifications.get(key)
            if cls is None or cls.rel is RelType.UNCLASSIFIED:
                rels.append(None)
            else:
                rels.append(oriented(cls.rel, u, v))
            keys.append(key)
        gaps = [i for i, r in enumerate(rels) if r is None]
        if len(gaps) != 1:
            continue
        i = gaps[0]
        if i == 0 or i == len(rels) - 1:
            continue
        if rels[i - 1] is RelType.C2P and rels[i + 1] is RelType.P2C:
            key = keys[i]
            base = classifications.get(key)
            if base is not None and key not in updates:
                updates[key] = replace(base, rel=RelType.P2P, method=METHOD_GAP_P2P)
    return updates


def tiebreak(
    edge: EdgeKey,
    graph: AsGraph,
    config: HeuristicConfig,
    kshell: KShellIndex | None = None,
) -> tuple[RelType, str]:
    """Pick a relationship for one edge from structural rank alone.

    Degree mode: if the endpoint degree ratio falls inside the configured
    band the edge is a peering, otherwise the higher-degree endpoint is
    the provider. K-shell mode does the same with shell numbers, peering
    on equal shells. The result is reported in canonical low->high order,
    so it cannot depend on argument order.
    """
    low, high = edge
    if config.tiebreak == TIEBREAK_KSHELL:
        if kshell is None:
            raise ConfigurationError("kshell tiebreak requested without a shell index")
        shell_low, shell_high = kshell[low], kshell[high]
        if shell_low == shell_high:
            return RelType.P2P, METHOD_KSHELL_TIEBREAK
        if shell_low > shell_high:
            return RelType.P2C, METHOD_KSHELL_TIEBREAK
        return RelType.C2P, METHOD_KSHELL_TIEBREAK
    if config.tiebreak == TIEBREAK_DEGREE:
        deg_low, deg_high = graph.degree(low), graph.degree(high)
        ratio = deg_low / deg_high
        if config.degree_ratio_low <= ratio <= config.degree_ratio_high:
            return RelType.P2P, METHOD_DEGREE_TIEBREAK
        if deg_low > deg_high:
            return RelType.P2C, METHOD_DEGREE_TIEBREAK
        return RelType.C2P, METHOD_DEGREE_TIEBREAK
    raise ConfigurationError("no tiebreak strategy configured")


def apply_tiebreaks(
    graph: AsGraph,
    classifications: Mapping[EdgeKey, Classification],
    config: HeuristicConfig,
    kshell: KShellIndex | None = None,
) -> dict[EdgeKey, Classification]:
    """Tie-break every unclassified edge except valley-flagged ones.

    Valley-flagged edges (only invalid votes) were never seen behaving
    like a normal link, so guessing a relationship for them would be
    noise, not inference.
    """
    updates: dict[EdgeKey, Classification] = {}
    for key, cls in classifications.items():
        if cls.rel is not RelType.UNCLASSIFIED or cls.valley_only:
            continue
        rel, method = tiebreak(key, graph, config, kshell)
        updates[key] = replace(cls, rel=rel, method=method)
    return updates
