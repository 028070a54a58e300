"""Analysis reports over tracking results: inclusion detail, migration,
method comparison, evolution listings and threshold sweeps."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParameterError
from .ged import EventType, Thresholds, build_evolution_chains, ged_track, inclusion, inclusion_quantity_only
from .importance import ImportanceVector
from .tsn import Group, Grouping

SWEEP_EVENT_COLUMNS = {
    "form": EventType.FORMING,
    "dissolve": EventType.DISSOLVING,
    "shrink": EventType.SHRINKING,
    "growth": EventType.GROWING,
    "continue": EventType.CONTINUING,
    "split": EventType.SPLITTING,
    "merge": EventType.MERGING,
}


def _uniform(group: Group) -> ImportanceVector:
    return ImportanceVector({n: 1.0 for n in group.members}, "none", scope=group.group_id)


def core_members(group: Group, importance: ImportanceVector) -> list:
    """Top half of the group (rounded up) by descending importance, ties by node id."""
    ordered = sorted(group.members, key=lambda n: (-importance.scores[n], n))
    return ordered[: math.ceil(len(ordered) / 2)]


@dataclass(frozen=True)
class InclusionReport:
    group1: int
    frame1: int
    group2: int
    frame2: int
    inclusion12: float
    inclusion21: float
    size1: int
    size2: int
    intersection: tuple
    importance_total1: float
    importance_total2: float
    importance_shared1: float
    importance_shared2: float
    core1: tuple
    core2: tuple
    core_importance1: float
    core_importance2: float


def report_inclusion(g1: Group, g2: Group, importance1: ImportanceVector = None,
                     importance2: ImportanceVector = None) -> InclusionReport:
    if g2.frame_index != g1.frame_index + 1:
        raise ParameterError(
            f"groups must be in consecutive timeframes, got {g1.frame_index} and {g2.frame_index}"
        )
    imp1 = importance1 or _uniform(g1)
    imp2 = importance2 or _uniform(g2)
    shared = g1.members & g2.members
    i12 = inclusion(g1, g2, imp1) if importance1 else inclusion_quantity_only(g1, g2)
    i21 = inclusion(g2, g1, imp2) if importance2 else inclusion_quantity_only(g2, g1)
    core1, core2 = core_members(g1, imp1), core_members(g2, imp2)
    return InclusionReport(
        g1.group_id, g1.frame_index, g2.group_id, g2.frame_index, i12, i21,
        len(g1), len(g2), tuple(sorted(shared)),
        imp1.total(g1.members), imp2.total(g2.members),
        imp1.total(shared), imp2.total(shared),
        tuple(core1), tuple(core2), imp1.total(core1), imp2.total(core2),
    )


@dataclass(frozen=True)
class MigrationReport:
    group: int
    frame: int
    size: int
    core_size: int
    successors: tuple = ()  # (group_id, size)
    migrants: tuple = ()
    avg_rank_before: Optional[float] = None
    avg_rank_after: Optional[float] = None
    destinations: dict = field(default_factory=dict)  # migrant -> tuple of group ids
    note: str = ""

    @property
    def migrated(self) -> int:
        return len(self.migrants)


def report_migration(group: Group, events, grouping: Grouping, importances: dict = None) -> MigrationReport:
    """Where members of ``group`` went in the next timeframe.

    ``importances`` maps ``(frame, group_id)`` to the group's importance
    vector; ranks fall back to a single shared rank without it.
    """
    importances = importances or {}
    imp = importances.get(group.key) or _uniform(group)
    core_size = len(core_members(group, imp))
    base = dict(group=group.group_id, frame=group.frame_index, size=len(group), core_size=core_size)

    mine = [e for e in events if e.group1 == group.group_id and e.frame1 == group.frame_index]
    successors = sorted({e.group2 for e in mine if e.group2 is not None})
    dissolved = any(e.event == EventType.DISSOLVING for e in mine)
    if not successors and not dissolved:
        return MigrationReport(**base, note="no successor")

    nxt = group.frame_index + 1
    succ_groups = [grouping.get(nxt, gid) for gid in successors]
    kept = frozenset().union(*(g.members for g in succ_groups))
    migrants = sorted(group.members - kept)

    avg_before = None
    if migrants:
        avg_before = sum(imp.ranking[n] for n in migrants) / len(migrants)

    destinations, after_ranks = {}, []
    for n in migrants:
        homes = [g for g in grouping.groups(nxt) if n in g.members and g.group_id not in successors]
        destinations[n] = tuple(g.group_id for g in homes)
        for g in homes:
            rank_vec = importances.get(g.key) or _uniform(g)
            after_ranks.append(rank_vec.ranking[n])
    avg_after = sum(after_ranks) / len(after_ranks) if after_ranks else None

    note = "dissolved" if dissolved and not successors else ""
    return MigrationReport(
        **base,
        successors=tuple((g.group_id, len(g)) for g in succ_groups),
        migrants=tuple(migrants),
        avg_rank_before=avg_before,
        avg_rank_after=avg_after,
        destinations=destinations,
        note=note,
    )


def _event_name(e) -> str:
    if isinstance(e, dict):
        return e.get("event_type") or "match"
    name = getattr(e, "event", None)
    return str(name) if name is not None else "match"


def _event_key(e) -> tuple:
    if isinstance(e, dict):
        def num(col):
            v = e.get(col, "")
            return int(v) if v not in ("", None) else None
        return (num("timeframe1"), num("group1"), num("timeframe2"), num("group2"))
    return (e.frame1, e.group1, e.frame2, e.group2)


@dataclass(frozen=True)
class CompareReport:
    both: tuple      # (key, types in A, types in B)
    only_a: tuple    # (key, types in A)
    only_b: tuple    # (key, types in B)


def report_compare(events_a, events_b, grouping: Grouping = None) -> CompareReport:
    """Side-by-side events per group pair. Keys are ``(frame1, group1, frame2, group2)``.

    Accepts event objects from any tracker or rows read back from the TSV tables.
    """
    def collect(events):
        out = {}
        for e in events:
            out.setdefault(_event_key(e), set()).add(_event_name(e))
        return out

    a, b = collect(events_a), collect(events_b)
    if grouping is not None:
        known = {(g.frame_index, g.group_id) for g in grouping}
        for f1, g1, f2, g2 in list(a) + list(b):
            if (g1 is not None and (f1, g1) not in known) or (g2 is not None and (f2, g2) not in known):
                warnings.warn("compared events reference groups missing from the grouping", stacklevel=2)
                break

    def order(keys):
        return sorted(keys, key=lambda k: tuple(-1 if x is None else x for x in k))

    both = tuple((k, tuple(sorted(a[k])), tuple(sorted(b[k]))) for k in order(a.keys() & b.keys()))
    only_a = tuple((k, tuple(sorted(a[k]))) for k in order(a.keys() - b.keys()))
    only_b = tuple((k, tuple(sorted(b[k]))) for k in order(b.keys() - a.keys()))
    return CompareReport(both, only_a, only_b)


@dataclass(frozen=True)
class GroupEvolution:
    group: int
    frame: int
    backward: tuple
    forward: tuple


def report_group_evolution(events, frame: int, group_id: int, grouping: Grouping = None) -> GroupEvolution:
    """Matches of one group into the previous and next timeframe."""
    if grouping is not None:
        grouping.get(frame, group_id)  # raises KeyError for unknown groups
    backward = tuple(e for e in events if e.group2 == group_id and e.frame2 == frame)
    forward = tuple(e for e in events if e.group1 == group_id and e.frame1 == frame)
    if grouping is None and not backward and not forward:
        raise KeyError(f"no events mention group {group_id} in frame {frame}")
    return GroupEvolution(group_id, frame, backward, forward)


def evolution_table(events, n_frames: int = None) -> tuple:
    """Chain-per-row grid: alternating event and group columns.

    Column ``T<f>`` holds the chain's group in frame ``f``; the event column
    after it holds the event into frame ``f + 1``. Empty leading and trailing
    columns are dropped. Returns ``(header, rows)``.
    """
    chains = build_evolution_chains(events)
    if not chains:
        return [], []
    if n_frames is None:
        n_frames = max(r.frame2 for c in chains for r in c.records)
    # cells: index 2f-2 = event into frame f, index 2f-1 = group in frame f, last = event out of T_n
    width = 2 * n_frames + 1
    header = []
    for f in range(1, n_frames + 1):
        header += ["event", f"T{f}"]
    header.append("event")
    rows = []
    for chain in chains:
        cells = [""] * width
        for r in chain.records:
            cells[2 * r.frame2 - 2] = str(r.event)
            if r.group1 is not None:
                cells[2 * r.frame1 - 1] = f"G{r.group1}"
            if r.group2 is not None:
                cells[2 * r.frame2 - 1] = f"G{r.group2}"
        rows.append(cells)
    used = [i for i in range(width) if any(row[i] for row in rows)]
    lo, hi = used[0], used[-1]
    return header[lo:hi + 1], [row[lo:hi + 1] for row in rows]


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    beta: float
    counts: dict

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def as_list(self) -> list:
        return [f"{self.alpha:g}", f"{self.beta:g}"] + [self.counts[c] for c in SWEEP_EVENT_COLUMNS] + [self.total]


@dataclass(frozen=True)
class SweepReport:
    rows: tuple
    events: dict  # (alpha, beta) -> list of EventRecord

    def cell(self, alpha, beta) -> SweepRow:
        for r in self.rows:
            if r.alpha == alpha and r.beta == beta:
                return r
        raise KeyError((alpha, beta))


def threshold_sweep(grouping: Grouping, pairs, alphas, betas, form_dissolve: float = 10.0,
                    tsn=None) -> SweepReport:
    """Run GED over an ``alphas x betas`` grid reusing precomputed inclusion pairs.

    Pass ``tsn`` so timeframes without groups at either end still count for
    forming and dissolving, exactly as in a single run.
    """
    rows, runs = [], {}
    for alpha in alphas:
        for beta in betas:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                th = Thresholds(alpha, beta, form_dissolve)
            events = ged_track(tsn, grouping, "none", th, pairs=pairs)
            counts = {col: 0 for col in SWEEP_EVENT_COLUMNS}
            lookup = {v: k for k, v in SWEEP_EVENT_COLUMNS.items()}
            for e in events:
                counts[lookup[e.event]] += 1
            rows.append(SweepRow(alpha, beta, counts))
            runs[(alpha, beta)] = events
    return SweepReport(tuple(rows), runs)
