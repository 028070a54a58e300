"""Temporal social network data model.

A temporal network is an ordered list of timeframes; each timeframe is a
directed weighted graph without self-loops. Groups are node subsets
attached to one timeframe, and a :class:`Grouping` collects the groups of
every timeframe (groups inside one frame may overlap).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import FormatError, ParameterError

NodeId = int


class WeightedEdge(NamedTuple):
    source: NodeId
    target: NodeId
    weight: float


class Interaction(NamedTuple):
    source: NodeId
    target: NodeId
    weight: float
    timestamp: int


@dataclass(frozen=True)
class FrameGraph:
    """One timeframe: a node set plus merged directed weighted edges."""

    frame_index: int
    nodes: frozenset
    edges: tuple

    def __post_init__(self):
        if self.frame_index < 1:
            raise ParameterError(f"frame_index must be >= 1, got {self.frame_index}")
        seen = set()
        for e in self.edges:
            if e.source == e.target:
                raise FormatError(f"self-loop on node {e.source}")
            if e.source not in self.nodes or e.target not in self.nodes:
                raise FormatError(f"edge {e.source}->{e.target} has an endpoint outside the node set")
            if (e.source, e.target) in seen:
                raise FormatError(f"duplicate edge {e.source}->{e.target}")
            seen.add((e.source, e.target))

    def __len__(self):
        return len(self.nodes)

    @property
    def total_weight(self) -> float:
        return sum(e.weight for e in self.edges)

    @cached_property
    def out_weights(self) -> dict:
        out = {n: {} for n in self.nodes}
        for s, t, w in self.edges:
            out[s][t] = w
        return out

    @cached_property
    def neighbors(self) -> dict:
        """Undirected, unweighted adjacency: node -> frozenset of neighbours."""
        adj = {n: set() for n in self.nodes}
        for s, t, _ in self.edges:
            adj[s].add(t)
            adj[t].add(s)
        return {n: frozenset(v) for n, v in adj.items()}

    @cached_property
    def undirected_weights(self) -> dict:
        """node -> {neighbour: w(x,y) + w(y,x)}."""
        adj = {n: defaultdict(float) for n in self.nodes}
        for s, t, w in self.edges:
            adj[s][t] += w
            adj[t][s] += w
        return {n: dict(v) for n, v in adj.items()}

    def weight(self, source, target) -> float:
        return self.out_weights.get(source, {}).get(target, 0.0)


@dataclass(frozen=True)
class TemporalNetwork:
    frames: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        for pos, frame in enumerate(self.frames, start=1):
            if frame.frame_index != pos:
                raise ParameterError(
                    f"frame at position {pos} has frame_index {frame.frame_index}"
                )

    def __len__(self):
        return len(self.frames)

    def __iter__(self) -> Iterator[FrameGraph]:
        return iter(self.frames)

    def frame(self, index: int) -> FrameGraph:
        if not 1 <= index <= len(self.frames):
            raise ParameterError(f"no timeframe {index} (network has {len(self.frames)})")
        return self.frames[index - 1]


@dataclass(frozen=True)
class Group:
    group_id: int
    members: frozenset
    frame_index: int

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            raise ParameterError(f"group {self.group_id}@{self.frame_index} is empty")

    def __len__(self):
        return len(self.members)

    @property
    def key(self) -> tuple:
        return (self.frame_index, self.group_id)


@dataclass(frozen=True)
class Grouping:
    """Groups per timeframe. Frames with no groups may be absent."""

    by_frame: Mapping = field(default_factory=dict)

    def __post_init__(self):
        normalized = {}
        for frame, groups in self.by_frame.items():
            groups = tuple(sorted(groups, key=lambda g: g.group_id))
            ids = [g.group_id for g in groups]
            if len(set(ids)) != len(ids):
                raise FormatError(f"duplicate group id in frame {frame}")
            for g in groups:
                if g.frame_index != frame:
                    raise FormatError(f"group {g.group_id} filed under frame {frame} but says {g.frame_index}")
            normalized[frame] = groups
        object.__setattr__(self, "by_frame", dict(sorted(normalized.items())))

    @classmethod
    def from_groups(cls, groups: Iterable[Group]) -> "Grouping":
        by_frame = defaultdict(list)
        for g in groups:
            by_frame[g.frame_index].append(g)
        return cls(dict(by_frame))

    @classmethod
    def from_sets(cls, frames: Mapping) -> "Grouping":
        """Build from ``{frame: {group_id: members}}`` or ``{frame: [members, ...]}``.

        List input numbers groups from 1 in list order.
        """
        groups = []
        for frame, spec in frames.items():
            items = spec.items() if isinstance(spec, Mapping) else enumerate(spec, start=1)
            groups.extend(Group(gid, frozenset(m), frame) for gid, m in items)
        grouping = cls.from_groups(groups)
        # keep explicitly listed empty frames
        by_frame = {f: grouping.by_frame.get(f, ()) for f in frames}
        return cls(by_frame)

    @property
    def frames(self) -> list:
        return list(self.by_frame)

    def groups(self, frame: int) -> tuple:
        return self.by_frame.get(frame, ())

    def get(self, frame: int, group_id: int) -> Group:
        for g in self.groups(frame):
            if g.group_id == group_id:
                return g
        raise KeyError(f"no group {group_id} in frame {frame}")

    def __iter__(self) -> Iterator[Group]:
        for groups in self.by_frame.values():
            yield from groups

    def __len__(self):
        return sum(len(g) for g in self.by_frame.values())


def build_frame_graph(edges, frame_index: int = 1, nodes=()) -> FrameGraph:
    """Merge duplicate ``(source, target)`` pairs by summing weights.

    ``nodes`` adds isolated nodes on top of the edge endpoints.
    """
    merged = {}
    node_set = set(nodes)
    for edge in edges:
        s, t, w = edge[0], edge[1], edge[2]
        if s == t:
            raise FormatError(f"self-loop on node {s}")
        if w < 0:
            raise FormatError(f"negative weight {w} on edge {s}->{t}")
        merged[(s, t)] = merged.get((s, t), 0.0) + w
        node_set.add(s)
        node_set.add(t)
    edge_tuple = tuple(WeightedEdge(s, t, w) for (s, t), w in sorted(merged.items()))
    return FrameGraph(frame_index, frozenset(node_set), edge_tuple)


def window_interactions(interactions, window_len: int, step: int) -> TemporalNetwork:
    """Cut timestamped interactions into (possibly overlapping) timeframes.

    Window ``j`` covers ``[t0 + j*step, t0 + j*step + window_len)`` where
    ``t0`` is the earliest timestamp; windows are produced while their start
    does not exceed the latest timestamp.
    """
    if window_len <= 0:
        raise ParameterError("window_len must be positive")
    if not 0 < step <= window_len:
        raise ParameterError("step must satisfy 0 < step <= window_len")
    interactions = list(interactions)
    if not interactions:
        return TemporalNetwork(())
    t0 = min(i.timestamp for i in interactions)
    t_max = max(i.timestamp for i in interactions)
    n_windows = (t_max - t0) // step + 1
    buckets = [[] for _ in range(n_windows)]
    for it in interactions:
        offset = it.timestamp - t0
        # windows j with j*step <= offset < j*step + window_len
        lo = max(0, -(-(offset - window_len + 1) // step))
        hi = min(n_windows - 1, offset // step)
        for j in range(lo, hi + 1):
            buckets[j].append(it)
    frames = tuple(build_frame_graph(b, frame_index=j + 1) for j, b in enumerate(buckets))
    return TemporalNetwork(frames)


def induced_subgraph(frame: FrameGraph, members) -> FrameGraph:
    members = frozenset(members)
    missing = sorted(members - frame.nodes)
    if missing:
        raise ParameterError(f"node {missing[0]} is not in timeframe {frame.frame_index}")
    edges = tuple(e for e in frame.edges if e.source in members and e.target in members)
    return FrameGraph(frame.frame_index, members, edges)


def join_frames(f1: FrameGraph, f2: FrameGraph) -> FrameGraph:
    """Union of two consecutive frames; shared edges have their weights summed.

    The joint graph carries the index of the earlier frame.
    """
    if f2.frame_index != f1.frame_index + 1:
        raise ParameterError(
            f"frames {f1.frame_index} and {f2.frame_index} are not consecutive"
        )
    return build_frame_graph(
        list(f1.edges) + list(f2.edges),
        frame_index=f1.frame_index,
        nodes=f1.nodes | f2.nodes,
    )
