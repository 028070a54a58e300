"""Group Evolution Discovery (GED).

Groups in consecutive timeframes are compared with the inclusion measure,
which weights the shared fraction of a group by the share of the group's
importance those shared members carry. Each pair of groups receives at
most one event; forming and dissolving are decided per group.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import ParameterError
from .importance import MIN_NODES, ImportanceVector, SpConfig, group_importance
from .tsn import Group, Grouping, TemporalNetwork


class EventType(str, Enum):
    CONTINUING = "continuing"
    SHRINKING = "shrinking"
    GROWING = "growing"
    SPLITTING = "splitting"
    MERGING = "merging"
    DISSOLVING = "dissolving"
    FORMING = "forming"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Thresholds:
    """Inclusion thresholds in percent."""

    alpha: float = 50.0
    beta: float = 50.0
    form_dissolve: float = 10.0

    def __post_init__(self):
        for name in ("alpha", "beta", "form_dissolve"):
            value = getattr(self, name)
            if not 0 <= value <= 100:
                raise ParameterError(f"{name} must be within [0, 100], got {value}")
        if self.alpha < 50 or self.beta < 50:
            warnings.warn(
                f"alpha={self.alpha}, beta={self.beta}: values below 50 match groups "
                "that share less than half of their members",
                stacklevel=2,
            )

    @property
    def label(self) -> str:
        return f"{self.alpha:g}/{self.beta:g}/{self.form_dissolve:g}"


@dataclass(frozen=True)
class InclusionPair:
    g1: Group
    g2: Group
    i12: float
    i21: float
    shared: int


@dataclass(frozen=True)
class EventRecord:
    event: EventType
    group1: Optional[int]
    frame1: int
    group2: Optional[int]
    frame2: int
    i12: float
    i21: float
    thresholds: Thresholds

    @property
    def pair(self) -> tuple:
        return (self.frame1, self.group1, self.frame2, self.group2)


def overlap(g1: Group, g2: Group) -> float:
    """Shared members relative to the bigger group, in percent."""
    if not g1.members or not g2.members:
        raise ParameterError("overlap of an empty group")
    return len(g1.members & g2.members) / max(len(g1), len(g2)) * 100


def inclusion_quantity_only(g1: Group, g2: Group) -> float:
    if not g1.members:
        raise ParameterError("inclusion of an empty group")
    return len(g1.members & g2.members) / len(g1) * 100


def inclusion(g1: Group, g2: Group, importance_in_g1: ImportanceVector) -> float:
    """Inclusion of ``g1`` in ``g2`` in percent.

    ``importance_in_g1`` must be computed on g1's own induced subgraph.
    """
    total = importance_in_g1.total(g1.members)
    if total <= 0:
        raise ParameterError(f"group {g1.group_id}@{g1.frame_index} has zero total importance")
    shared = g1.members & g2.members
    if shared == g1.members:
        # exact, independent of float summation order
        return 100.0
    quantity = len(shared) / len(g1)
    quality = importance_in_g1.total(shared) / total
    return quantity * quality * 100


def classify_pair(
    pair: InclusionPair,
    size1: int = None,
    size2: int = None,
    matches_g1_next: int = 1,
    matches_g2_prev: int = 1,
    th: Thresholds = None,
) -> Optional[EventType]:
    """Event for one pair of groups, or ``None``.

    ``matches_g1_next`` counts the threshold-passing pairs between g1 and the
    next frame, ``matches_g2_prev`` those between g2 and the previous frame.
    """
    th = th or Thresholds()
    size1 = len(pair.g1) if size1 is None else size1
    size2 = len(pair.g2) if size2 is None else size2
    pass1 = pair.i12 >= th.alpha
    pass2 = pair.i21 >= th.beta

    if pass1 and pass2:
        if size1 == size2:
            return EventType.CONTINUING
        return EventType.SHRINKING if size1 > size2 else EventType.GROWING
    if not (pass1 or pass2):
        return None
    # exactly one inclusion passes; multi-match events take precedence
    if size1 >= size2 and matches_g2_prev > 1:
        return EventType.SPLITTING
    if size1 <= size2 and matches_g1_next > 1:
        return EventType.MERGING
    if pass2 and size1 >= size2 and matches_g2_prev == 1:
        return EventType.SHRINKING
    if pass1 and size1 <= size2 and matches_g1_next == 1:
        return EventType.GROWING
    return None


class _InclusionCalculator:
    def __init__(self, tsn, measure, cfg):
        self.tsn = tsn
        self.measure = measure
        self.cfg = cfg
        self._cache = {}

    def importance(self, group: Group) -> Optional[ImportanceVector]:
        key = group.key
        if key not in self._cache:
            vec = None
            # groups too small for the measure, or with zero total importance
            # (e.g. betweenness inside a clique), fall back to quantity only
            if self.measure != "none" and len(group) >= MIN_NODES[self.measure]:
                frame = self.tsn.frame(group.frame_index)
                vec = group_importance(frame, group, self.measure, self.cfg)
                if vec.total(group.members) <= 0:
                    vec = None
            self._cache[key] = vec
        return self._cache[key]

    def __call__(self, g1: Group, g2: Group) -> float:
        if not g1.members & g2.members:
            return 0.0
        vec = self.importance(g1)
        if vec is None:
            return inclusion_quantity_only(g1, g2)
        return inclusion(g1, g2, vec)


def _check_inputs(tsn, grouping, measure):
    if measure != "none" and tsn is None:
        raise ParameterError(f"measure {measure!r} needs the temporal network")
    if tsn is not None:
        frames = list(range(1, len(tsn) + 1))
        extra = sorted(set(grouping.frames) - set(frames))
        if extra:
            raise ParameterError(f"grouping has frame {extra[0]} but the network has {len(tsn)} frames")
        for g in grouping:
            missing = g.members - tsn.frame(g.frame_index).nodes
            if missing:
                raise ParameterError(
                    f"group {g.group_id}@{g.frame_index}: node {min(missing)} is not in that timeframe"
                )
        return frames
    if not grouping.frames:
        return []
    return list(range(min(grouping.frames), max(grouping.frames) + 1))


def inclusion_pairs(tsn, grouping, measure="sp", cfg=None, frame=None) -> list:
    """Both inclusions for every group pair between ``frame`` and ``frame + 1``.

    With ``frame`` left as None all consecutive frame pairs are covered.
    """
    frames = _check_inputs(tsn, grouping, measure)
    calc = _InclusionCalculator(tsn, measure, cfg or SpConfig())
    starts = frames[:-1] if frame is None else [frame]
    pairs = []
    for f in starts:
        for g1 in grouping.groups(f):
            for g2 in grouping.groups(f + 1):
                pairs.append(InclusionPair(g1, g2, calc(g1, g2), calc(g2, g1), len(g1.members & g2.members)))
    return pairs


def ged_track(
    tsn: Optional[TemporalNetwork],
    grouping: Grouping,
    measure: str = "sp",
    th: Thresholds = None,
    cfg: SpConfig = None,
    pairs: list = None,
) -> list:
    """Assign GED events between every pair of consecutive timeframes.

    Pass one computes both inclusions for every pair and records candidate
    matches (at least one inclusion reaching its threshold); pass two
    classifies each candidate using the per-group match counts. ``pairs``
    lets a threshold sweep reuse precomputed inclusions.
    """
    th = th or Thresholds()
    frames = _check_inputs(tsn, grouping, measure if pairs is None else "none")
    if pairs is None:
        pairs = inclusion_pairs(tsn, grouping, measure, cfg)
    by_frame = {}
    for p in pairs:
        by_frame.setdefault(p.g1.frame_index, []).append(p)

    events = []
    for f in frames[:-1]:
        frame_pairs = by_frame.get(f, [])
        candidates = [
            p for p in frame_pairs
            if p.shared > 0 and (p.i12 >= th.alpha or p.i21 >= th.beta)
        ]
        next_count, prev_count = {}, {}
        for p in candidates:
            next_count[p.g1.group_id] = next_count.get(p.g1.group_id, 0) + 1
            prev_count[p.g2.group_id] = prev_count.get(p.g2.group_id, 0) + 1
        for p in candidates:
            event = classify_pair(
                p, len(p.g1), len(p.g2),
                next_count[p.g1.group_id], prev_count[p.g2.group_id], th,
            )
            if event is not None:
                events.append(EventRecord(event, p.g1.group_id, f, p.g2.group_id, f + 1, p.i12, p.i21, th))

        # forming / dissolving: every inclusion with the other frame below the cut-off
        best_next = {g.group_id: (0.0, 0.0) for g in grouping.groups(f)}
        best_prev = {g.group_id: (0.0, 0.0) for g in grouping.groups(f + 1)}
        for p in frame_pairs:
            a, b = best_next[p.g1.group_id]
            best_next[p.g1.group_id] = (max(a, p.i12), max(b, p.i21))
            a, b = best_prev[p.g2.group_id]
            best_prev[p.g2.group_id] = (max(a, p.i12), max(b, p.i21))
        for gid, (i12, i21) in sorted(best_next.items()):
            if i12 < th.form_dissolve and i21 < th.form_dissolve:
                events.append(EventRecord(EventType.DISSOLVING, gid, f, None, f + 1, i12, i21, th))
        for gid, (i12, i21) in sorted(best_prev.items()):
            if i12 < th.form_dissolve and i21 < th.form_dissolve:
                events.append(EventRecord(EventType.FORMING, None, f, gid, f + 1, i12, i21, th))

    events.sort(key=lambda e: (e.frame1, e.group1 is None, e.group1 or 0, e.group2 is None, e.group2 or 0))
    return events


@dataclass(frozen=True)
class EvolutionChain:
    records: tuple

    def __len__(self):
        return len(self.records)

    @property
    def events(self) -> list:
        return [r.event for r in self.records]


def build_evolution_chains(events) -> list:
    """Follow group lineage forward through the event list.

    A chain starts at a forming record or at a pair record whose source
    group has no incoming record; a split produces one chain per branch,
    so branches share their prefix.
    """
    events = list(events)
    outgoing = {}
    has_incoming = set()
    for r in events:
        if r.group1 is not None:
            outgoing.setdefault((r.frame1, r.group1), []).append(r)
        if r.group2 is not None:
            has_incoming.add((r.frame2, r.group2))

    starts = [r for r in events if r.event == EventType.FORMING]
    starts += [
        r for r in events
        if r.group1 is not None and (r.frame1, r.group1) not in has_incoming
    ]

    chains = []
    for start in starts:
        stack = [(start,)]
        while stack:
            path = stack.pop()
            last = path[-1]
            nxt = outgoing.get((last.frame2, last.group2), []) if last.group2 is not None else []
            if not nxt:
                chains.append(EvolutionChain(path))
                continue
            for r in reversed(nxt):
                stack.append(path + (r,))
    return chains
