"""Member importance: social position and degree/closeness/betweenness centrality.

Every measure returns an :class:`ImportanceVector` with a dense ranking
(1 = most important, equal scores share a rank). The centralities work on
the undirected, unweighted view of the frame; social position uses the
directed weights through a row-normalised commitment matrix.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import ParameterError
from .tsn import FrameGraph, Group, induced_subgraph

MEASURES = ("sp", "cd", "cc", "cb")
MIN_NODES = {"sp": 1, "cd": 2, "cc": 2, "cb": 3}

# scores closer than this share a rank
_RANK_DECIMALS = 9


@dataclass(frozen=True)
class CommitmentMatrix:
    """``rows[y][x]`` = strength of the relation from ``y`` to ``x``."""

    rows: dict

    def __call__(self, source, target) -> float:
        return self.rows.get(source, {}).get(target, 0.0)


@dataclass(frozen=True)
class SpConfig:
    epsilon: float = 0.5
    tolerance: float = 1e-6
    max_iterations: int = 1000

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ParameterError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.tolerance <= 0:
            raise ParameterError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ParameterError("max_iterations must be at least 1")


@dataclass(frozen=True)
class ImportanceVector:
    scores: dict
    measure: str
    scope: object = "frame"
    ranking: dict = field(default=None)
    converged: bool = True
    iterations: int = 0

    def __post_init__(self):
        if self.ranking is None:
            object.__setattr__(self, "ranking", dense_rank(self.scores))

    def __getitem__(self, node) -> float:
        return self.scores[node]

    def total(self, nodes=None) -> float:
        if nodes is None:
            return sum(self.scores.values())
        return sum(self.scores[n] for n in nodes)


def dense_rank(scores: dict) -> dict:
    keys = {n: round(s, _RANK_DECIMALS) for n, s in scores.items()}
    distinct = sorted(set(keys.values()), reverse=True)
    position = {v: i for i, v in enumerate(distinct, start=1)}
    return {n: position[v] for n, v in keys.items()}


def commitment_from_weights(frame: FrameGraph) -> CommitmentMatrix:
    rows = {}
    for node, targets in frame.out_weights.items():
        total = sum(targets.values())
        if total > 0:
            rows[node] = {t: w / total for t, w in targets.items()}
        else:
            rows[node] = {}
    return CommitmentMatrix(rows)


def social_position(frame: FrameGraph, commitment: CommitmentMatrix = None, cfg: SpConfig = None) -> ImportanceVector:
    """Iterate ``SP(x) <- (1 - eps) + eps * sum_y SP(y) * C(y -> x)`` from SP = 1.

    Stops once the largest per-node change is within ``cfg.tolerance``; if
    ``max_iterations`` runs out first the result is flagged non-converged.
    """
    cfg = cfg or SpConfig()
    if commitment is None:
        commitment = commitment_from_weights(frame)
    eps = cfg.epsilon
    sp = {n: 1.0 for n in frame.nodes}
    converged = False
    iterations = 0
    while iterations < cfg.max_iterations:
        iterations += 1
        acc = dict.fromkeys(sp, 0.0)
        for y, row in commitment.rows.items():
            if y not in sp:
                continue
            for x, c in row.items():
                if x in acc:
                    acc[x] += sp[y] * c
        new = {x: (1 - eps) + eps * a for x, a in acc.items()}
        delta = max((abs(new[x] - sp[x]) for x in sp), default=0.0)
        sp = new
        if delta <= cfg.tolerance:
            converged = True
            break
    return ImportanceVector(sp, "sp", converged=converged, iterations=iterations)


def _require_size(frame, minimum, measure):
    if len(frame.nodes) < minimum:
        raise ParameterError(f"{measure} needs at least {minimum} nodes, got {len(frame.nodes)}")


def degree_centrality(frame: FrameGraph) -> ImportanceVector:
    _require_size(frame, 2, "degree centrality")
    m = len(frame.nodes)
    scores = {n: len(nbrs) / (m - 1) for n, nbrs in frame.neighbors.items()}
    return ImportanceVector(scores, "cd")


def _bfs(adj, source):
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def closeness_centrality(frame: FrameGraph) -> ImportanceVector:
    """``(m - 1) / sum of hop distances``; an unreachable member counts as distance ``m``."""
    _require_size(frame, 2, "closeness centrality")
    adj = frame.neighbors
    m = len(frame.nodes)
    scores = {}
    for x in frame.nodes:
        dist = _bfs(adj, x)
        reached = sum(dist.values())
        unreachable = m - len(dist)
        scores[x] = (m - 1) / (reached + unreachable * m)
    return ImportanceVector(scores, "cc")


def betweenness_centrality(frame: FrameGraph) -> ImportanceVector:
    """Brandes accumulation over ordered pairs, divided by ``m - 1``."""
    _require_size(frame, 3, "betweenness centrality")
    adj = frame.neighbors
    m = len(frame.nodes)
    total = dict.fromkeys(frame.nodes, 0.0)
    for s in sorted(frame.nodes):
        order = []
        preds = {v: [] for v in frame.nodes}
        sigma = dict.fromkeys(frame.nodes, 0)
        sigma[s] = 1
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(frame.nodes, 0.0)
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1 + delta[w])
            if w != s:
                total[w] += delta[w]
    scores = {n: b / (m - 1) for n, b in total.items()}
    return ImportanceVector(scores, "cb")


def measure_frame(frame: FrameGraph, measure: str, cfg: SpConfig = None) -> ImportanceVector:
    if measure == "sp":
        return social_position(frame, commitment_from_weights(frame), cfg)
    if measure == "cd":
        return degree_centrality(frame)
    if measure == "cc":
        return closeness_centrality(frame)
    if measure == "cb":
        return betweenness_centrality(frame)
    raise ParameterError(f"unknown importance measure {measure!r}; expected one of {MEASURES}")


def group_importance(frame: FrameGraph, group: Group, measure: str, cfg: SpConfig = None) -> ImportanceVector:
    """Run ``measure`` on the group's induced subgraph, not on the whole frame."""
    sub = induced_subgraph(frame, group.members)
    vec = measure_frame(sub, measure, cfg)
    return ImportanceVector(
        vec.scores, vec.measure, scope=group.group_id, ranking=vec.ranking,
        converged=vec.converged, iterations=vec.iterations,
    )
