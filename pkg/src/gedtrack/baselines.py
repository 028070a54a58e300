"""Baseline trackers: Asur et al. event rules and Palla et al. joint-graph matching."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .community import cpm_extract
from .errors import ParameterError
from .tsn import Grouping, TemporalNetwork, join_frames

ASUR_EVENTS = ("continue", "form", "dissolve", "merge", "split")


@dataclass(frozen=True)
class AsurEvent:
    event: str
    group1: Optional[int]
    frame1: int
    group2: Optional[int]
    frame2: int
    overlap: Optional[float]

    @property
    def pair(self) -> tuple:
        return (self.frame1, self.group1, self.frame2, self.group2)


def _pair_overlap(a, b) -> float:
    return len(a & b) / max(len(a), len(b)) * 100


def _combined_overlap(a, b, target, kappa) -> bool:
    """Union of ``a`` and ``b`` overlaps ``target`` by more than kappa percent,
    and each of them has more than half of its members in ``target``."""
    union = a | b
    if len(union & target) / max(len(union), len(target)) * 100 <= kappa:
        return False
    return len(a & target) > len(a) / 2 and len(b & target) > len(b) / 2


def asur_events(grouping: Grouping, kappa: float = 50.0) -> list:
    """Continue, form, dissolve, merge and split between consecutive frames.

    Merge and split emit one record per participating pair, carrying that
    pair's overlap (shared members over the bigger group). On overlapping
    groups a pair can collect several events.
    """
    if not 0 < kappa <= 100:
        raise ParameterError(f"kappa must lie in (0, 100], got {kappa}")
    frames = grouping.frames
    if not frames:
        return []
    events = []
    for f in range(min(frames), max(frames)):
        now, nxt = grouping.groups(f), grouping.groups(f + 1)

        for g1 in now:
            for g2 in nxt:
                if g1.members == g2.members:
                    events.append(AsurEvent("continue", g1.group_id, f, g2.group_id, f + 1, 100.0))

        for g1 in now:
            if not any(len(g1.members & g2.members) > 1 for g2 in nxt):
                events.append(AsurEvent("dissolve", g1.group_id, f, None, f + 1, None))
        for g2 in nxt:
            if not any(len(g2.members & g1.members) > 1 for g1 in now):
                events.append(AsurEvent("form", None, f, g2.group_id, f + 1, None))

        merged = set()
        for gk, gl in combinations(now, 2):
            for gj in nxt:
                if _combined_overlap(gk.members, gl.members, gj.members, kappa):
                    merged.add((gk.group_id, gj.group_id))
                    merged.add((gl.group_id, gj.group_id))
        split = set()
        for gk, gl in combinations(nxt, 2):
            for gj in now:
                if _combined_overlap(gk.members, gl.members, gj.members, kappa):
                    split.add((gj.group_id, gk.group_id))
                    split.add((gj.group_id, gl.group_id))

        members_now = {g.group_id: g.members for g in now}
        members_nxt = {g.group_id: g.members for g in nxt}
        for name, pairs in (("split", split), ("merge", merged)):
            for a, b in sorted(pairs):
                ov = _pair_overlap(members_now[a], members_nxt[b])
                events.append(AsurEvent(name, a, f, b, f + 1, ov))

    events.sort(key=lambda e: (e.frame1, e.group1 is None, e.group1 or 0, e.group2 or 0, e.event))
    return events


@dataclass(frozen=True)
class Containment:
    group_id: int
    frame: int
    joint_group: int
    joint_frame: int


@dataclass(frozen=True)
class PallaMatch:
    group1: int
    frame1: int
    group2: int
    frame2: int
    overlap: float
    joint_group: int


@dataclass(frozen=True)
class PallaResult:
    matches: tuple
    unmatched: tuple  # (group_id, frame) of contained next-frame groups left without a match


def jaccard(a, b) -> float:
    union = a | b
    return len(a & b) / len(union) * 100 if union else 0.0


def joint_grouping(tsn: TemporalNetwork, k: int = 6) -> Grouping:
    """CPM on every joined pair of frames; groups are filed under the earlier frame."""
    groups = []
    for i in range(1, len(tsn)):
        groups.extend(cpm_extract(join_frames(tsn.frame(i), tsn.frame(i + 1)), k))
    return Grouping.from_groups(groups)


def palla_containment(grouping: Grouping, joint: Grouping) -> list:
    """Single-frame groups that are subsets of a joint-graph group.

    Joint group ``J`` filed under frame ``i`` covers frames ``i`` and ``i + 1``.
    """
    records = []
    for jf in joint.frames:
        for jg in joint.groups(jf):
            for f in (jf, jf + 1):
                for g in grouping.groups(f):
                    if g.members <= jg.members:
                        records.append(Containment(g.group_id, f, jg.group_id, jf))
    return records


def palla_match(containment, grouping: Grouping) -> PallaResult:
    """Greedy matching by descending relative overlap inside joint groups.

    Each earlier-frame group is matched at most once; ties go to the smaller
    earlier-frame group id. Pairs sharing no node are dropped.
    """
    by_joint = {}
    for c in containment:
        by_joint.setdefault((c.joint_frame, c.joint_group), []).append(c)

    candidates = {}
    contained_next = set()
    for (jf, jg), recs in sorted(by_joint.items()):
        first = sorted({c.group_id for c in recs if c.frame == jf})
        second = sorted({c.group_id for c in recs if c.frame == jf + 1})
        contained_next.update((g, jf + 1) for g in second)
        for a in first:
            ma = grouping.get(jf, a).members
            for b in second:
                key = (jf, a, b)
                if key not in candidates:
                    candidates[key] = (jaccard(ma, grouping.get(jf + 1, b).members), jg)

    ordered = sorted(candidates.items(), key=lambda kv: (kv[0][0], -kv[1][0], kv[0][1], kv[0][2]))
    matched_first, matched_second = set(), set()
    matches = []
    for (jf, a, b), (ov, jg) in ordered:
        if ov <= 0 or (jf, a) in matched_first:
            continue
        matched_first.add((jf, a))
        matched_second.add((b, jf + 1))
        matches.append(PallaMatch(a, jf, b, jf + 1, ov, jg))
    unmatched = tuple(sorted(contained_next - matched_second, key=lambda t: (t[1], t[0])))
    return PallaResult(tuple(matches), unmatched)
