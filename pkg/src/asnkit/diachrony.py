"""Century-by-century evolution of the top of the syntactic hierarchy.

Per-century networks are compared through level ranks: position 1 is the
node with the smallest forward level (the top of the hierarchy), ties broken
by outgoing weight and then (role, lemma).  Trajectories expose the rank and
frequency history of chosen nodes; emergence detection flags nodes that jump
into the top band after having been absent or far below it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .hierarchy import HierarchyLevels, HierarchyStats, influence_ranking
from .network import Asn, NodeKey, heads
from .powerlaw import PowerLawFit
from .stats import NetworkSummary

__all__ = [
    "CenturyRecord",
    "DiachronicSeries",
    "TrajectoryPoint",
    "HeadTrajectory",
    "EmergenceEvent",
    "track",
    "detect_emergent_heads",
    "phase_space",
]


@dataclass(frozen=True)
class CenturyRecord:
    """All per-century analysis results bundled together.

    ``hierarchy`` is ``None`` for edgeless networks (their statistics are
    undefined) and ``fit`` is ``None`` when the degree data cannot support a
    power-law fit.
    """

    century: int
    summary: NetworkSummary
    hierarchy: HierarchyStats | None = None
    fit: PowerLawFit | None = None


@dataclass(frozen=True)
class DiachronicSeries:
    """Century records in strictly increasing century order."""

    records: tuple[CenturyRecord, ...]

    def __post_init__(self) -> None:
        centuries = [r.century for r in self.records]
        if any(b <= a for a, b in zip(centuries, centuries[1:])):
            raise ValueError(
                f"centuries must be strictly increasing, got {centuries}"
            )


@dataclass(frozen=True)
class TrajectoryPoint:
    """One node's standing in one century's network."""

    century: int
    present: bool
    level: float | None
    level_rank: int | None
    frequency: int
    is_head: bool


@dataclass(frozen=True)
class HeadTrajectory:
    """Rank/frequency history of one node across the series."""

    key: NodeKey
    points: tuple[TrajectoryPoint, ...]


@dataclass(frozen=True)
class EmergenceEvent:
    """A node entering the top band of the hierarchy.

    ``prior_rank`` is ``None`` when the node was absent from the previous
    century's network.
    """

    key: NodeKey
    century: int
    prior_rank: int | None
    new_rank: int


def _validate_slices(
    slices: Sequence[tuple[Asn, HierarchyLevels]]
) -> list[int]:
    centuries: list[int] = []
    for asn, _levels in slices:
        if asn.century is None:
            raise ValueError("every network in a series needs a century")
        centuries.append(asn.century)
    if any(b <= a for a, b in zip(centuries, centuries[1:])):
        raise ValueError(
            f"networks must be ordered by strictly increasing century, "
            f"got {centuries}"
        )
    return centuries


def _rank_maps(
    slices: Sequence[tuple[Asn, HierarchyLevels]]
) -> list[dict[NodeKey, int]]:
    """1-based level rank of every node, per slice."""
    maps = []
    for asn, levels in slices:
        ranking = influence_ranking(asn, levels)
        maps.append({key: pos for pos, (key, _, _) in enumerate(ranking, start=1)})
    return maps


def track(
    keys: Iterable[NodeKey], slices: Sequence[tuple[Asn, HierarchyLevels]]
) -> list[HeadTrajectory]:
    """Follow chosen nodes through the series.

    For every century a node is present in, the trajectory records its
    forward level, its level rank, its token frequency, and whether it is a
    head (no in-neighbours).  Absent centuries yield placeholder points with
    ``present=False`` and frequency 0, keeping trajectories aligned.
    """
    centuries = _validate_slices(slices)
    ranks = _rank_maps(slices)
    head_sets = [set(heads(asn)) for asn, _levels in slices]

    trajectories = []
    for key in keys:
        points = []
        for i, (asn, levels) in enumerate(slices):
            if key in asn.frequency:
                points.append(
                    TrajectoryPoint(
                        century=centuries[i],
                        present=True,
                        level=levels.forward[key],
                        level_rank=ranks[i][key],
                        frequency=asn.frequency[key],
                        is_head=key in head_sets[i],
                    )
                )
            else:
                points.append(
                    TrajectoryPoint(
                        century=centuries[i],
                        present=False,
                        level=None,
                        level_rank=None,
                        frequency=0,
                        is_head=False,
                    )
                )
        trajectories.append(HeadTrajectory(key=key, points=tuple(points)))
    return trajectories


def detect_emergent_heads(
    slices: Sequence[tuple[Asn, HierarchyLevels]],
    band: int = 10,
    min_gain: int = 5,
) -> list[EmergenceEvent]:
    """Flag nodes that newly enter the top ``band`` of the level ranking.

    A node emerges at the earliest century where its rank is within the top
    band while in the previous century it was either absent or ranked at
    least ``band + min_gain`` (the gain margin keeps rank jitter around the
    band boundary from raising events).  Presence in the first slice is
    baseline, not emergence, so a series of identical slices yields no
    events.  One event is reported per node; events are ordered by century,
    then new rank, then node key.
    """
    if band < 1:
        raise ValueError(f"band must be >= 1, got {band}")
    if min_gain < 0:
        raise ValueError(f"min_gain must be >= 0, got {min_gain}")
    centuries = _validate_slices(slices)
    ranks = _rank_maps(slices)

    events = []
    flagged: set[NodeKey] = set()
    for i in range(1, len(slices)):
        for key, rank in ranks[i].items():
            if rank > band or key in flagged:
                continue
            prior = ranks[i - 1].get(key)
            if prior is None or prior >= band + min_gain:
                events.append(
                    EmergenceEvent(
                        key=key,
                        century=centuries[i],
                        prior_rank=prior,
                        new_rank=rank,
                    )
                )
                flagged.add(key)
    events.sort(key=lambda e: (e.century, e.new_rank, e.key.sort_key))
    return events


def phase_space(series: DiachronicSeries) -> list[tuple[int, float, float]]:
    """(century, democracy, incoherence) points for the whole series.

    Raises
    ------
    ValueError
        When any record lacks hierarchy statistics.
    """
    points = []
    for record in series.records:
        if record.hierarchy is None:
            raise ValueError(
                f"century {record.century} has no hierarchy statistics"
            )
        points.append(
            (record.century, record.hierarchy.democracy, record.hierarchy.incoherence)
        )
    return points
