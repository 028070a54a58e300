"""Fast modularity optimisation (Louvain) with an explicit modularity state.

The frame is read as undirected with ``w(x, y) = w(x->y) + w(y->x)``. The
state keeps a symmetric adjacency ``A`` whose diagonal holds the internal
weight of an aggregated super-node counted over ordered pairs, so that
``k_i = sum_j A[i][j]`` and ``2m = sum_ij A[i][j]`` at every level.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParameterError
from ..tsn import FrameGraph, Group

# minimum gain improvement that counts as a move; guards against float ties
_MOVE_EPS = 1e-12


def _adjacency(frame: FrameGraph) -> dict:
    return {n: dict(nbrs) for n, nbrs in frame.undirected_weights.items()}


def _check_partition(nodes, partition):
    partition = [frozenset(c) for c in partition]
    seen = set()
    for c in partition:
        if seen & c:
            raise ParameterError(f"node {min(seen & c)} appears in more than one community")
        seen |= c
    if seen != set(nodes):
        diff = sorted(seen ^ set(nodes))
        raise ParameterError(f"partition does not cover the node set exactly (node {diff[0]})")
    return partition


def modularity(frame: FrameGraph, partition) -> float:
    """Newman modularity of a disjoint partition, straight from the definition.

    ``Q = 1/2m * sum_ij [A_ij - k_i k_j / 2m] * [c_i == c_j]``
    """
    partition = _check_partition(frame.nodes, partition)
    adj = _adjacency(frame)
    m2 = sum(sum(row.values()) for row in adj.values())
    if m2 <= 0:
        raise ParameterError("modularity is undefined for a graph with zero total weight")
    k = {n: sum(row.values()) for n, row in adj.items()}
    q = 0.0
    for community in partition:
        for i in community:
            for j in community:
                q += adj[i].get(j, 0.0) - k[i] * k[j] / m2
    return q / m2


class ModularityState:
    """Community bookkeeping for the Louvain inner loop.

    ``sigma_in[c]`` is the weight inside ``c`` summed over ordered pairs
    (each internal link twice), ``sigma_tot[c]`` the total degree of ``c``.
    A node whose community is ``None`` has been taken out and is isolated.
    """

    def __init__(self, adjacency: dict, community: dict = None):
        self.adj = adjacency
        self.k = {n: sum(row.values()) for n, row in adjacency.items()}
        self.m2 = sum(self.k.values())
        self.community = {}
        self.sigma_in = {}
        self.sigma_tot = {}
        if community is None:
            community = {n: n for n in adjacency}
        for c in set(community.values()):
            self.sigma_in[c] = 0.0
            self.sigma_tot[c] = 0.0
        for n in sorted(adjacency):
            self.community[n] = None
            self.insert(n, community[n])

    @classmethod
    def from_frame(cls, frame: FrameGraph, partition=None) -> "ModularityState":
        community = None
        if partition is not None:
            partition = _check_partition(frame.nodes, partition)
            community = {n: min(c) for c in partition for n in c}
        return cls(_adjacency(frame), community)

    @property
    def m(self) -> float:
        return self.m2 / 2

    def links_to(self, node, community) -> float:
        """Weight between ``node`` and the other members of ``community``."""
        return sum(
            w for j, w in self.adj[node].items()
            if j != node and self.community.get(j) == community
        )

    def remove(self, node):
        c = self.community[node]
        if c is None:
            return
        self.community[node] = None
        self.sigma_tot[c] -= self.k[node]
        self.sigma_in[c] -= 2 * self.links_to(node, c) + self.adj[node].get(node, 0.0)

    def insert(self, node, community):
        if self.community[node] is not None:
            raise ParameterError(f"node {node} is already in community {self.community[node]}")
        self.sigma_in.setdefault(community, 0.0)
        self.sigma_tot.setdefault(community, 0.0)
        self.sigma_in[community] += 2 * self.links_to(node, community) + self.adj[node].get(node, 0.0)
        self.sigma_tot[community] += self.k[node]
        self.community[node] = community

    def modularity(self) -> float:
        m2 = self.m2
        return sum(
            self.sigma_in[c] / m2 - (self.sigma_tot[c] / m2) ** 2
            for c in self.sigma_in
            if self.sigma_tot[c] > 0 or self.sigma_in[c] > 0
        )

    def partition(self) -> list:
        groups = {}
        for n, c in self.community.items():
            groups.setdefault(c, set()).add(n)
        return sorted((frozenset(g) for g in groups.values()), key=min)


def modularity_gain(state: ModularityState, node, target) -> float:
    """Change in modularity from inserting an isolated ``node`` into ``target``.

    The bracket form of the Blondel gain; the node-to-community link weight
    enters twice because ``sigma_in`` counts internal links over ordered
    pairs. The node's own self-loop cancels between the two brackets.
    """
    if target not in state.sigma_tot:
        raise ParameterError(f"unknown community {target}")
    if node not in state.k:
        raise ParameterError(f"unknown node {node}")
    if state.community[node] is not None:
        raise ParameterError(f"node {node} must be removed from its community first")
    m2 = state.m2
    k_i = state.k[node]
    k_i_in = state.links_to(node, target)
    s_in = state.sigma_in[target]
    s_tot = state.sigma_tot[target]
    after = (s_in + 2 * k_i_in) / m2 - ((s_tot + k_i) / m2) ** 2
    before = s_in / m2 - (s_tot / m2) ** 2 - (k_i / m2) ** 2
    return after - before


@dataclass(frozen=True)
class HierarchicalPartition:
    """Louvain levels, finest first; each level partitions the frame's nodes."""

    frame_index: int
    levels: tuple
    qualities: tuple

    def __len__(self):
        return len(self.levels)

    def groups(self, level: int = -1) -> list:
        if not self.levels:
            return []
        return [
            Group(i, members, self.frame_index)
            for i, members in enumerate(sorted(self.levels[level], key=min), start=1)
        ]


def _one_level(adjacency: dict) -> ModularityState:
    state = ModularityState(adjacency)
    order = sorted(adjacency)
    moved = True
    while moved:
        moved = False
        for node in order:
            old = state.community[node]
            state.remove(node)
            best, best_gain = old, max(0.0, modularity_gain(state, node, old))
            neighbour_comms = {state.community[j] for j in adjacency[node] if j != node}
            neighbour_comms.discard(old)
            for c in sorted(neighbour_comms):
                gain = modularity_gain(state, node, c)
                if gain > best_gain + _MOVE_EPS:
                    best, best_gain = c, gain
            state.insert(node, best)
            if best != old:
                moved = True
    return state


def _aggregate(adjacency: dict, communities: list) -> dict:
    owner = {n: idx for idx, c in enumerate(communities) for n in c}
    agg = {idx: {} for idx in range(len(communities))}
    for i, row in adjacency.items():
        ci = owner[i]
        for j, w in row.items():
            cj = owner[j]
            agg[ci][cj] = agg[ci].get(cj, 0.0) + w
    return agg


def louvain_extract(frame: FrameGraph) -> HierarchicalPartition:
    if not frame.nodes:
        return HierarchicalPartition(frame.frame_index, (), ())
    adjacency = _adjacency(frame)
    if sum(sum(r.values()) for r in adjacency.values()) <= 0:
        raise ParameterError("louvain needs a graph with positive total weight")

    # members[i] = original nodes inside super-node i at the current level
    members = {n: frozenset([n]) for n in adjacency}
    levels, qualities = [], []
    while True:
        state = _one_level(adjacency)
        communities = state.partition()
        merged = len(communities) < len(adjacency)
        if merged or not levels:
            level = sorted(
                (frozenset().union(*(members[s] for s in c)) for c in communities), key=min
            )
            levels.append(tuple(level))
            qualities.append(state.modularity())
        if not merged:
            break
        adjacency = _aggregate(adjacency, communities)
        members = {idx: frozenset().union(*(members[s] for s in c)) for idx, c in enumerate(communities)}
    return HierarchicalPartition(frame.frame_index, tuple(levels), tuple(qualities))
